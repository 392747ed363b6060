//! Desk-scale dHYM solver on the flat torus `[0,1)²`.
//!
//! Potentials depend on two real coordinates, so the pointwise matrix of
//! `α_φ` relative to `ω` is `M = diag(a₁, a₂) + ¼·Hess(ψ₀ + φ)` and the phase
//! is `Q = arccot λ₁(M) + arccot λ₂(M)`. The unknowns are the mean-zero
//! potential φ and the phase constant c of `Q(φ) = c`; at the continuum
//! level c equals the cohomological angle `θ₀ = arccot((a₁a₂ − 1)/(a₁ + a₂))`.
//!
//! Second-order central differences on an N×N periodic grid. Newton steps are
//! solved with BiCGSTAB, right-preconditioned by the constant-coefficient
//! operator, which is diagonal in Fourier space.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::arccot;

/// Smallest line-search factor tried before giving up on a Newton step.
pub const DAMPING_FLOOR: f64 = 1.0 / (1u32 << 20) as f64;

/// `ψ₀ = amp·cos(2π·kx·x)·cos(2π·ky·y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Psi0Spec {
    pub amp: f64,
    pub kx: i32,
    pub ky: i32,
}

impl Psi0Spec {
    pub fn zero() -> Self {
        Self { amp: 0.0, kx: 1, ky: 1 }
    }

    /// Parses `"amp,kx,ky"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("psi0 spec {s:?}: expected amp,kx,ky")));
        }
        let amp: f64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad amplitude {:?}", parts[0])))?;
        let kx: i32 = parts[1].parse().map_err(|_| Error::Parse(format!("bad wave number {:?}", parts[1])))?;
        let ky: i32 = parts[2].parse().map_err(|_| Error::Parse(format!("bad wave number {:?}", parts[2])))?;
        if !amp.is_finite() {
            return Err(Error::Parse("amplitude must be finite".into()));
        }
        Ok(Self { amp, kx, ky })
    }
}

/// How `Hess ψ₀` enters the discrete operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HessianMode {
    /// Central differences of the sampled ψ₀; `φ = −ψ₀` is then an exact
    /// discrete solution.
    Discrete,
    /// Exact Hessian of the trigonometric ψ₀ at the grid points; `φ = −ψ₀`
    /// solves the discrete equation up to O(h²).
    Analytic,
}

/// Symmetric 2×2 field entries `(xx, xy, yy)`.
type Sym2 = [f64; 3];

#[derive(Clone, Debug)]
pub struct TorusProblem {
    pub a1: f64,
    pub a2: f64,
    pub n: usize,
    pub psi0_spec: Psi0Spec,
    pub mode: HessianMode,
    pub theta0: f64,
    psi0: Vec<f64>,
    psi0_hess: Vec<Sym2>,
}

fn wrap(i: usize, d: isize, n: usize) -> usize {
    (i as isize + d).rem_euclid(n as isize) as usize
}

/// Central-difference Hessian of a periodic grid field.
pub fn discrete_hessian(f: &[f64], n: usize) -> Vec<Sym2> {
    let h2 = (n * n) as f64;
    let at = |i: usize, j: usize| f[i * n + j];
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let (ip, im) = (wrap(i, 1, n), wrap(i, -1, n));
        for j in 0..n {
            let (jp, jm) = (wrap(j, 1, n), wrap(j, -1, n));
            let c = at(i, j);
            let xx = (at(ip, j) - 2.0 * c + at(im, j)) * h2;
            let yy = (at(i, jp) - 2.0 * c + at(i, jm)) * h2;
            let xy = (at(ip, jp) - at(ip, jm) - at(im, jp) + at(im, jm)) * h2 * 0.25;
            out.push([xx, xy, yy]);
        }
    }
    out
}

/// Eigenvalues `λ₁ ≤ λ₂` of `[[p, r], [r, s]]`.
pub fn sym2_eigenvalues(m: Sym2) -> (f64, f64) {
    let [p, r, s] = m;
    let mean = 0.5 * (p + s);
    let d = (0.5 * (p - s)).hypot(r);
    (mean - d, mean + d)
}

/// `(I + M²)⁻¹`.
fn weight(m: Sym2) -> Sym2 {
    let [p, r, s] = m;
    let bxx = 1.0 + p * p + r * r;
    let bxy = r * (p + s);
    let byy = 1.0 + s * s + r * r;
    let det = bxx * byy - bxy * bxy;
    [byy / det, -bxy / det, bxx / det]
}

fn mean(f: &[f64]) -> f64 {
    f.iter().sum::<f64>() / f.len() as f64
}

fn remove_mean(f: &mut [f64]) {
    let m = mean(f);
    f.iter_mut().for_each(|x| *x -= m);
}

#[cfg(test)]
fn max_abs(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InadmissiblePoint {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub phase: f64,
}

/// `θ₀ = arccot((a₁a₂ − 1)/(a₁ + a₂))`; requires the hypercritical range.
pub fn torus_theta0(a1: f64, a2: f64) -> Result<f64> {
    if !(a1.is_finite() && a2.is_finite()) {
        return Err(Error::Parse("a1 and a2 must be finite".into()));
    }
    if a1 + a2 <= 0.0 {
        return Err(Error::OutOfRange(format!("a1 + a2 = {} must be positive", a1 + a2)));
    }
    if a1 * a2 <= 1.0 {
        return Err(Error::OutOfRange(format!(
            "a1*a2 = {} must exceed 1 for a hypercritical constant solution",
            a1 * a2
        )));
    }
    Ok(arccot((a1 * a2 - 1.0) / (a1 + a2)))
}

pub fn build_torus_problem(a1: f64, a2: f64, psi0_spec: Psi0Spec, n: usize, mode: HessianMode) -> Result<TorusProblem> {
    let theta0 = torus_theta0(a1, a2)?;
    if n < 4 {
        return Err(Error::OutOfRange(format!("grid size {n} is below 4")));
    }
    let h = 1.0 / n as f64;
    let (wx, wy) = (2.0 * PI * psi0_spec.kx as f64, 2.0 * PI * psi0_spec.ky as f64);
    let mut psi0 = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (i as f64 * h, j as f64 * h);
            psi0.push(psi0_spec.amp * (wx * x).cos() * (wy * y).cos());
        }
    }
    remove_mean(&mut psi0);
    let psi0_hess = match mode {
        HessianMode::Discrete => discrete_hessian(&psi0, n),
        HessianMode::Analytic => {
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (i as f64 * h, j as f64 * h);
                    let (cx, sx) = ((wx * x).cos(), (wx * x).sin());
                    let (cy, sy) = ((wy * y).cos(), (wy * y).sin());
                    let a = psi0_spec.amp;
                    out.push([-a * wx * wx * cx * cy, a * wx * wy * sx * sy, -a * wy * wy * cx * cy]);
                }
            }
            out
        }
    };
    let prob = TorusProblem {
        a1,
        a2,
        n,
        psi0_spec,
        mode,
        theta0,
        psi0,
        psi0_hess,
    };
    let zero = vec![0.0; n * n];
    if let Err(p) = prob.phase_field_checked(&zero) {
        return Err(Error::Inadmissible(format!(
            "psi0 amplitude {} pushes the phase to {} at grid point ({}, {}) = ({}, {})",
            psi0_spec.amp, p.phase, p.i, p.j, p.x, p.y
        )));
    }
    Ok(prob)
}

impl TorusProblem {
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn psi0(&self) -> &[f64] {
        &self.psi0
    }

    /// The manufactured solution `−ψ₀`.
    pub fn manufactured_solution(&self) -> Vec<f64> {
        self.psi0.iter().map(|x| -x).collect()
    }

    fn matrices(&self, phi: &[f64]) -> Vec<Sym2> {
        let hp = discrete_hessian(phi, self.n);
        hp.iter()
            .zip(&self.psi0_hess)
            .map(|(a, b)| [self.a1 + 0.25 * (a[0] + b[0]), 0.25 * (a[1] + b[1]), self.a2 + 0.25 * (a[2] + b[2])])
            .collect()
    }

    fn phase_field_checked(&self, phi: &[f64]) -> std::result::Result<Vec<f64>, InadmissiblePoint> {
        let h = self.h();
        let mut out = Vec::with_capacity(phi.len());
        for (k, m) in self.matrices(phi).into_iter().enumerate() {
            let (l1, l2) = sym2_eigenvalues(m);
            let q = arccot(l1) + arccot(l2);
            if !(q > 0.0 && q < PI) {
                let (i, j) = (k / self.n, k % self.n);
                return Err(InadmissiblePoint {
                    i,
                    j,
                    x: i as f64 * h,
                    y: j as f64 * h,
                    phase: q,
                });
            }
            out.push(q);
        }
        Ok(out)
    }

    /// Pointwise phase `Q(x)`.
    pub fn phase_field(&self, phi: &[f64]) -> Result<Vec<f64>> {
        self.check_len(phi)?;
        self.phase_field_checked(phi).map_err(|p| {
            Error::Inadmissible(format!("phase {} at grid point ({}, {}) leaves (0, pi)", p.phase, p.i, p.j))
        })
    }

    /// `Q(x) − θ₀`.
    pub fn residual(&self, phi: &[f64]) -> Result<Vec<f64>> {
        Ok(self.phase_field(phi)?.into_iter().map(|q| q - self.theta0).collect())
    }

    fn check_len(&self, phi: &[f64]) -> Result<()> {
        if phi.len() != self.n * self.n {
            return Err(Error::Dimension(format!("field has {} entries, grid has {}", phi.len(), self.n * self.n)));
        }
        Ok(())
    }

    /// Newton linearization `δQ = −¼ Σ W_jk D_jk δφ` at φ, `W = (I + M²)⁻¹`.
    pub fn linearization(&self, phi: &[f64]) -> Result<Linearization> {
        self.check_len(phi)?;
        let w: Vec<Sym2> = self.matrices(phi).into_iter().map(weight).collect();
        Ok(Linearization::new(w, self.n))
    }
}

/// The linearized operator at a fixed iterate, with its FFT preconditioner.
pub struct Linearization {
    n: usize,
    w: Vec<Sym2>,
    symbol: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Linearization {
    fn new(w: Vec<Sym2>, n: usize) -> Self {
        let len = (n * n) as f64;
        let wbar = w.iter().fold([0.0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]).map(|x| x / len);
        let h2 = len;
        let mut symbol = Vec::with_capacity(n * n);
        for kx in 0..n {
            let tx = 2.0 * PI * kx as f64 / n as f64;
            for ky in 0..n {
                let ty = 2.0 * PI * ky as f64 / n as f64;
                let dxx = (2.0 * tx.cos() - 2.0) * h2;
                let dyy = (2.0 * ty.cos() - 2.0) * h2;
                let dxy = -tx.sin() * ty.sin() * h2;
                let s = -0.25 * (wbar[0] * dxx + 2.0 * wbar[1] * dxy + wbar[2] * dyy);
                symbol.push(if kx == 0 && ky == 0 { -1.0 } else { s });
            }
        }
        let mut planner = FftPlanner::new();
        Self {
            n,
            w,
            symbol,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    /// `J v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let hd = discrete_hessian(v, self.n);
        hd.iter()
            .zip(&self.w)
            .map(|(d, w)| -0.25 * (w[0] * d[0] + 2.0 * w[1] * d[1] + w[2] * d[2]))
            .collect()
    }

    /// The bordered operator `u ↦ J(u − ū) − ū` whose solution splits into a
    /// mean-zero potential update and a phase-constant update.
    fn apply_bordered(&self, u: &[f64]) -> Vec<f64> {
        let m = mean(u);
        let centered: Vec<f64> = u.iter().map(|x| x - m).collect();
        self.apply(&centered).into_iter().map(|x| x - m).collect()
    }

    fn fft2(&self, buf: &mut [Complex<f64>], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        for row in buf.chunks_mut(n) {
            plan.process(row);
        }
        let mut col = vec![Complex::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = buf[i * n + j];
            }
            plan.process(&mut col);
            for i in 0..n {
                buf[i * n + j] = col[i];
            }
        }
    }

    fn precondition(&self, r: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex<f64>> = r.iter().map(|&x| Complex::new(x, 0.0)).collect();
        self.fft2(&mut buf, &self.fwd);
        for (z, s) in buf.iter_mut().zip(&self.symbol) {
            *z /= *s;
        }
        self.fft2(&mut buf, &self.inv);
        let scale = 1.0 / (self.n * self.n) as f64;
        buf.iter().map(|z| z.re * scale).collect()
    }

    /// Solves the bordered system by right-preconditioned BiCGSTAB.
    fn solve_bordered(&self, b: &[f64], rel_tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize)> {
        let len = b.len();
        let bnorm = norm(b);
        let mut x = vec![0.0; len];
        if bnorm == 0.0 {
            return Ok((x, 0));
        }
        let mut r = b.to_vec();
        let r_hat = r.clone();
        let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
        let mut v = vec![0.0; len];
        let mut p = vec![0.0; len];
        for it in 1..=max_iter {
            let rho_new = dot(&r_hat, &r);
            if rho_new == 0.0 {
                return Err(Error::Solver("BiCGSTAB breakdown (rho = 0)".into()));
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for k in 0..len {
                p[k] = r[k] + beta * (p[k] - omega * v[k]);
            }
            let y = self.precondition(&p);
            v = self.apply_bordered(&y);
            let denom = dot(&r_hat, &v);
            if denom == 0.0 {
                return Err(Error::Solver("BiCGSTAB breakdown (r_hat . v = 0)".into()));
            }
            alpha = rho / denom;
            let s: Vec<f64> = r.iter().zip(&v).map(|(r, v)| r - alpha * v).collect();
            if norm(&s) <= rel_tol * bnorm {
                x.iter_mut().zip(&y).for_each(|(x, y)| *x += alpha * y);
                return Ok((x, it));
            }
            let z = self.precondition(&s);
            let t = self.apply_bordered(&z);
            let tt = dot(&t, &t);
            omega = if tt == 0.0 { 0.0 } else { dot(&t, &s) / tt };
            for k in 0..len {
                x[k] += alpha * y[k] + omega * z[k];
                r[k] = s[k] - omega * t[k];
            }
            if norm(&r) <= rel_tol * bnorm {
                return Ok((x, it));
            }
            if omega == 0.0 {
                return Err(Error::Solver("BiCGSTAB breakdown (omega = 0)".into()));
            }
        }
        Err(Error::Solver(format!("BiCGSTAB did not reach {rel_tol:e} in {max_iter} iterations")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub linear_tol: f64,
    pub linear_max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            linear_tol: 1e-12,
            linear_max_iter: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonStep {
    pub iteration: usize,
    pub residual_max: f64,
    pub step_factor: f64,
    pub halvings: u32,
    pub linear_iterations: usize,
    pub phase_min: f64,
    pub phase_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub phi: Vec<f64>,
    /// The converged constant c in `Q(φ) = c`.
    pub phase_constant: f64,
    pub theta0: f64,
    /// `max |Q(φ) − c|`.
    pub residual_max: f64,
    pub phase_min: f64,
    pub phase_max: f64,
    pub iterations: usize,
    pub converged: bool,
    pub damping_steps: usize,
    pub steps: Vec<NewtonStep>,
    pub failure: Option<String>,
}

struct Iterate {
    phi: Vec<f64>,
    c: f64,
    phase: Vec<f64>,
    res_max: f64,
}

impl Iterate {
    fn new(prob: &TorusProblem, phi: Vec<f64>, c: f64) -> Option<Self> {
        let phase = prob.phase_field_checked(&phi).ok()?;
        let res_max = phase.iter().fold(0.0f64, |a, q| a.max((q - c).abs()));
        Some(Self { phi, c, phase, res_max })
    }
}

fn phase_range(q: &[f64]) -> (f64, f64) {
    q.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Damped Newton for `Q(φ) = c` in the unknowns (mean-zero φ, c), starting
/// from `init` (mean removed) and `c = θ₀`.
pub fn newton_solve(prob: &TorusProblem, init: Option<&[f64]>, opts: &SolveOptions) -> Result<SolveReport> {
    let len = prob.n * prob.n;
    let mut phi0 = match init {
        Some(f) => {
            prob.check_len(f)?;
            f.to_vec()
        }
        None => vec![0.0; len],
    };
    remove_mean(&mut phi0);
    let mut cur = Iterate::new(prob, phi0, prob.theta0)
        .ok_or_else(|| Error::Inadmissible("initial potential leaves the admissible phase range".into()))?;
    let mut steps = Vec::new();
    let mut damping_steps = 0;
    let mut failure = None;
    let mut iterations = 0;
    while cur.res_max >= opts.tol {
        if iterations == opts.max_iter {
            failure = Some(format!("max_iter = {} reached", opts.max_iter));
            break;
        }
        iterations += 1;
        let lin = prob.linearization(&cur.phi)?;
        let rhs: Vec<f64> = cur.phase.iter().map(|q| -(q - cur.c)).collect();
        let (u, lin_its) = match lin.solve_bordered(&rhs, opts.linear_tol, opts.linear_max_iter) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        };
        let dc = mean(&u);
        let dphi: Vec<f64> = u.iter().map(|x| x - dc).collect();
        let mut lambda = 1.0;
        let mut halvings = 0;
        let accepted = loop {
            let trial_phi: Vec<f64> = cur.phi.iter().zip(&dphi).map(|(p, d)| p + lambda * d).collect();
            if let Some(next) = Iterate::new(prob, trial_phi, cur.c + lambda * dc) {
                if next.res_max < cur.res_max {
                    break Some(next);
                }
            }
            lambda *= 0.5;
            halvings += 1;
            if lambda < DAMPING_FLOOR {
                break None;
            }
        };
        match accepted {
            Some(next) => {
                if halvings > 0 {
                    damping_steps += 1;
                }
                cur = next;
                let (lo, hi) = phase_range(&cur.phase);
                steps.push(NewtonStep {
                    iteration: iterations,
                    residual_max: cur.res_max,
                    step_factor: lambda,
                    halvings,
                    linear_iterations: lin_its,
                    phase_min: lo,
                    phase_max: hi,
                });
            }
            None => {
                failure = Some(format!("line search reached the damping floor at iteration {iterations}"));
                break;
            }
        }
    }
    let (phase_min, phase_max) = phase_range(&cur.phase);
    let converged = cur.res_max < opts.tol;
    Ok(SolveReport {
        phase_constant: cur.c,
        theta0: prob.theta0,
        residual_max: cur.res_max,
        phase_min,
        phase_max,
        iterations,
        converged,
        damping_steps,
        steps,
        failure: if converged { None } else { failure },
        phi: cur.phi,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub phase_min: f64,
    pub phase_max: f64,
    pub width: f64,
    pub mean_phase: f64,
    pub theta0: f64,
    pub mean_deviation: f64,
    /// `C·h²` with `C` from [`MEAN_PHASE_CONSTANT`].
    pub mean_bound: f64,
    pub constant_phase: bool,
    pub hypercritical: bool,
    pub within_grid_bound: bool,
}

/// Constant of the `C·h²` bound on `|mean phase − θ₀|`.
pub const MEAN_PHASE_CONSTANT: f64 = 10.0;

/// Checks that φ has constant phase near θ₀ inside the hypercritical branch.
pub fn verify_solution(prob: &TorusProblem, phi: &[f64], tol: f64) -> Result<VerifyReport> {
    let q = prob.phase_field(phi)?;
    let (lo, hi) = phase_range(&q);
    let mean_phase = mean(&q);
    let dev = (mean_phase - prob.theta0).abs();
    let h = prob.h();
    let bound = MEAN_PHASE_CONSTANT * h * h;
    Ok(VerifyReport {
        phase_min: lo,
        phase_max: hi,
        width: hi - lo,
        mean_phase,
        theta0: prob.theta0,
        mean_deviation: dev,
        mean_bound: bound,
        constant_phase: hi - lo < 10.0 * tol,
        hypercritical: lo > 0.0 && hi < FRAC_PI_2,
        within_grid_bound: dev < bound,
    })
}

/// `i,j,x,y,phi,phase` rows for external plotting.
pub fn field_csv(prob: &TorusProblem, phi: &[f64]) -> Result<String> {
    let q = prob.phase_field(phi)?;
    let h = prob.h();
    let mut out = String::from("i,j,x,y,phi,phase\n");
    for (k, (p, qv)) in phi.iter().zip(&q).enumerate() {
        let (i, j) = (k / prob.n, k % prob.n);
        writeln!(out, "{i},{j},{},{},{p:e},{qv:e}", i as f64 * h, j as f64 * h).expect("write to string");
    }
    Ok(out)
}

/// `‖a − b‖∞` after removing both means.
pub fn gauge_distance(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max(((x - ma) - (y - mb)).abs()))
}
