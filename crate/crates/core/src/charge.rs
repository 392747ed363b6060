//! Central charges `Z_{V,[α]}(t) = −(−i)^p/p! ∫_V (tω + iα)^p` and their
//! winding angles.
//!
//! The lifted angle is tracked exactly: the curve is anchored at its
//! asymptotic direction `A(+∞) = −(p−2)π/2`, the window `[1, T]` beyond which
//! the leading term dominates is certified with rational bounds, and every
//! axis crossing on `(1, T)` is isolated by Sturm sequences on square-free
//! factors. Quadrant transitions therefore accumulate in exact multiples of
//! π/2; floating point is only used for the fractional angles at `t = T` and
//! `t = 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Bound, QPoly, RootInterval};
use crate::rational::{binomial, factorial, fmt_q, q, sign, to_f64, GaussQ, Q};
use crate::variety::{CohomClass, SubvarietyModel};

/// Polynomial in t with Gaussian-rational coefficients, split into real and
/// imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexPoly {
    pub re: QPoly,
    pub im: QPoly,
    /// Dimension of the subvariety the charge belongs to; for polynomials
    /// not built by [`z_polynomial`] this is the degree.
    pub dim: usize,
}

impl ComplexPoly {
    pub fn new(re: QPoly, im: QPoly) -> Self {
        let dim = re.degree().unwrap_or(0).max(im.degree().unwrap_or(0));
        Self { re, im, dim }
    }

    pub fn from_ints(re: &[i64], im: &[i64]) -> Self {
        Self::new(
            QPoly::new(re.iter().map(|&c| q(c)).collect()),
            QPoly::new(im.iter().map(|&c| q(c)).collect()),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn degree(&self) -> usize {
        self.re.degree().unwrap_or(0).max(self.im.degree().unwrap_or(0))
    }

    pub fn coeff(&self, k: usize) -> GaussQ {
        GaussQ::new(self.re.coeff(k), self.im.coeff(k))
    }

    pub fn leading(&self) -> GaussQ {
        self.coeff(self.degree())
    }

    pub fn eval(&self, t: &Q) -> GaussQ {
        GaussQ::new(self.re.eval(t), self.im.eval(t))
    }

    pub fn eval_f64(&self, t: f64) -> (f64, f64) {
        (self.re.eval_f64(t), self.im.eval_f64(t))
    }

    pub fn add(&self, other: &ComplexPoly) -> ComplexPoly {
        ComplexPoly {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
            dim: self.dim.max(other.dim),
        }
    }

    pub fn mul(&self, other: &ComplexPoly) -> ComplexPoly {
        ComplexPoly {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
            dim: self.dim + other.dim,
        }
    }

    pub fn scale(&self, c: &GaussQ) -> ComplexPoly {
        ComplexPoly {
            re: self.re.scale(&c.re).sub(&self.im.scale(&c.im)),
            im: self.re.scale(&c.im).add(&self.im.scale(&c.re)),
            dim: self.dim,
        }
    }
}

/// Builds `Z_{V,[α]}(t)`. The coefficient of `t^k` is
/// `−(−i)^p/p! · C(p,k) · i^{p−k} · ∫_V ω^k ∧ α^{p−k}`.
pub fn z_polynomial(v: &SubvarietyModel, alpha: &CohomClass, omega: &CohomClass) -> Result<ComplexPoly> {
    let p = v.dim;
    let mut re = Vec::with_capacity(p + 1);
    let mut im = Vec::with_capacity(p + 1);
    let sign_p = if p % 2 == 0 { q(-1) } else { q(1) };
    let inv_fact = Q::from_integer(1.into()) / factorial(p);
    for k in 0..=p {
        let integral = v.wedge_mix_integral(alpha, omega, p - k)?;
        let unit = GaussQ::i_pow((2 * p - k) as i64).scale(&sign_p);
        let c = unit.scale(&(binomial(p, k) * &inv_fact * integral));
        re.push(c.re);
        im.push(c.im);
    }
    Ok(ComplexPoly {
        re: QPoly::new(re),
        im: QPoly::new(im),
        dim: p,
    })
}

pub fn z_value(z: &ComplexPoly, t: &Q) -> GaussQ {
    z.eval(t)
}

/// Certified truncation point `T ≥ 1` such that for every `t ≥ T` the
/// lower-order terms are smaller than half the leading term, and neither
/// non-trivial part vanishes at `T`.
pub fn certified_window(z: &ComplexPoly, at_least: &Q) -> Q {
    let d = z.degree();
    let lead = z.leading();
    let lead_mag = lead.re.abs().max(lead.im.abs());
    let lower: Vec<Q> = (0..d)
        .map(|k| {
            let c = z.coeff(k);
            c.re.abs() + c.im.abs()
        })
        .collect();
    let mut t = q(1);
    for c in &lower {
        let r = q(1) + c / &lead_mag;
        if r > t {
            t = r;
        }
    }
    if *at_least > t {
        t = at_least.clone();
    }
    let two = q(2);
    loop {
        let tail: Q = lower
            .iter()
            .enumerate()
            .fold(Q::zero(), |acc, (k, c)| acc + c * pow(&t, k));
        let head = &lead_mag * pow(&t, d) / &two;
        let on_axis = (!z.re.is_zero() && z.re.eval(&t).is_zero())
            || (!z.im.is_zero() && z.im.eval(&t).is_zero());
        if tail < head && !on_axis {
            return t;
        }
        t *= &two;
    }
}

fn pow(x: &Q, k: usize) -> Q {
    let mut acc = q(1);
    for _ in 0..k {
        acc *= x;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonvanishingCertificate {
    pub common_root_free: bool,
    /// Degree of `gcd(Re z, Im z)`.
    pub gcd_degree: usize,
    #[serde(serialize_with = "ser_poly")]
    pub gcd: QPoly,
    #[serde(serialize_with = "ser_q")]
    pub window_end: Q,
    /// Distinct roots of `Re z` and `Im z` on `[1, T]`; `None` for an
    /// identically zero part.
    pub re_roots_on_window: Option<usize>,
    pub im_roots_on_window: Option<usize>,
    /// First common root `≥ 1`, when the charge vanishes.
    #[serde(serialize_with = "ser_opt_interval")]
    pub vanishing_root: Option<RootInterval>,
}

fn ser_poly<S: serde::Serializer>(p: &QPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn ser_opt_interval<S: serde::Serializer>(
    x: &Option<RootInterval>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

fn roots_on_closed(f: &QPoly, a: &Q, b: &Q) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    let sf = f.squarefree_part();
    let mut n = sf.count_roots_open(&Bound::Finite(a.clone()), &Bound::Finite(b.clone()));
    if f.eval(a).is_zero() {
        n += 1;
    }
    if f.eval(b).is_zero() && a != b {
        n += 1;
    }
    Some(n)
}

/// Exact decision of whether `z(t) ≠ 0` for every `t ∈ [1, +∞]`.
pub fn nonvanishing_certificate(z: &ComplexPoly) -> Result<NonvanishingCertificate> {
    if z.is_zero() {
        return Err(Error::Degenerate("both parts of the charge are identically zero".into()));
    }
    let g = z.re.gcd(&z.im);
    let one = q(1);
    let mut vanishing_root = None;
    if g.degree().unwrap_or(0) > 0 {
        if g.eval(&one).is_zero() {
            vanishing_root = Some(RootInterval {
                lo: one.clone(),
                hi: one.clone(),
            });
        } else if let Some(r) = g
            .isolate_roots(&Bound::Finite(one.clone()), &Bound::PosInf)
            .into_iter()
            .next()
        {
            vanishing_root = Some(r);
        }
    }
    let window_end = certified_window(z, &one);
    Ok(NonvanishingCertificate {
        common_root_free: vanishing_root.is_none(),
        gcd_degree: g.degree().unwrap_or(0),
        re_roots_on_window: roots_on_closed(&z.re, &one, &window_end),
        im_roots_on_window: roots_on_closed(&z.im, &one, &window_end),
        gcd: g,
        window_end,
        vanishing_root,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

/// A certified zero of one part of the charge on `(1, T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub part: Part,
    #[serde(serialize_with = "ser_interval")]
    pub interval: RootInterval,
    pub multiplicity: usize,
    /// Change of the quadrant index while passing the root with t
    /// decreasing; zero for tangential (even-multiplicity) touches.
    pub quadrant_change: i64,
}

fn ser_interval<S: serde::Serializer>(r: &RootInterval, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleReport {
    /// Algebraic lifted angle `θ̂_V`.
    pub theta_hat: f64,
    /// Slicing angle `φ_V = θ̂_V − (p−2)π/2`, the anchored argument at t = 1.
    pub phi: f64,
    /// Principal argument of `Z_V(1)` in `(−π, π]`.
    pub arg_z1: f64,
    #[serde(serialize_with = "ser_q")]
    pub re_z1: Q,
    #[serde(serialize_with = "ser_q")]
    pub im_z1: Q,
    /// Anchor `A(+∞)`.
    pub anchor: f64,
    #[serde(serialize_with = "ser_q")]
    pub window_end: Q,
    /// Sign-changing crossings ordered from t = T down to t = 1.
    pub crossings: Vec<Crossing>,
    /// Even-multiplicity touches; they never change the quadrant.
    pub touches: Vec<Crossing>,
}

/// Quadrant index mod 4 for strictly nonzero signs.
fn quadrant_of(sr: i8, si: i8) -> i64 {
    match (sr > 0, si > 0) {
        (true, true) => 0,
        (false, true) => 1,
        (false, false) => 2,
        (true, false) => 3,
    }
}

/// Exact argument of an axis-aligned Gaussian rational, else `atan2`.
fn arg_exactish(g: &GaussQ) -> f64 {
    match (sign(&g.re), sign(&g.im)) {
        (1, 0) => 0.0,
        (-1, 0) => PI,
        (0, 1) => FRAC_PI_2,
        (0, -1) => -FRAC_PI_2,
        _ => g.arg(),
    }
}

struct Event {
    part: Part,
    factor: QPoly,
    interval: RootInterval,
    multiplicity: usize,
}

fn collect_events(part: Part, f: &QPoly, lo: &Q, hi: &Q, out: &mut Vec<Event>) {
    if f.is_zero() {
        return;
    }
    for (factor, m) in f.squarefree_decomposition() {
        for interval in factor.isolate_roots(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone())) {
            out.push(Event {
                part,
                factor: factor.clone(),
                interval,
                multiplicity: m,
            });
        }
    }
}

/// Winding angle with the default certified window.
pub fn winding_angle(z: &ComplexPoly) -> Result<AngleReport> {
    winding_angle_with_window(z, &q(1))
}

/// Winding angle with the truncation point forced to at least `at_least`.
pub fn winding_angle_with_window(z: &ComplexPoly, at_least: &Q) -> Result<AngleReport> {
    let cert = nonvanishing_certificate(z)?;
    if !cert.common_root_free {
        return Err(Error::NotCertified(format!(
            "common root of Re and Im in {}",
            cert.vanishing_root.as_ref().map(|r| r.to_string()).unwrap_or_default()
        )));
    }
    let one = q(1);
    let t_end = certified_window(z, at_least);
    let p = z.dim as f64;
    let lead = z.leading();

    // anchor: −(p−2)π/2, corrected for polynomials whose leading coefficient
    // is not aligned with e^{−i(p−2)π/2}
    let canonical = GaussQ::i_pow(z.dim as i64 - 2);
    let anchor = -(p - 2.0) * FRAC_PI_2 + arg_exactish(&lead.mul(&canonical));
    let z_end = z.eval(&t_end);
    let delta = arg_exactish(&z_end.mul(&lead.conj()));
    let a_end = anchor + delta;

    let z1 = z.eval(&one);
    let arg_z1 = arg_exactish(&z1);
    let mut crossings = Vec::new();
    let mut touches = Vec::new();

    let phi = if z.re.is_zero() || z.im.is_zero() {
        // the curve stays on one axis and never reaches the origin
        a_end
    } else {
        let mut events = Vec::new();
        collect_events(Part::Re, &z.re, &one, &t_end, &mut events);
        collect_events(Part::Im, &z.im, &one, &t_end, &mut events);
        separate(&mut events);
        events.sort_by(|a, b| b.interval.lo.cmp(&a.interval.lo));

        let mut sr = sign(&z_end.re);
        let mut si = sign(&z_end.im);
        let base = quadrant_of(sr, si);
        // lift: the quadrant index congruent to `base` whose centre is
        // nearest to A(T)
        let approx = (a_end - std::f64::consts::FRAC_PI_4) / FRAC_PI_2;
        let mut quad = base + 4 * ((approx - base as f64) / 4.0).round() as i64;

        for e in events {
            if e.multiplicity % 2 == 0 {
                touches.push(Crossing {
                    part: e.part,
                    interval: e.interval,
                    multiplicity: e.multiplicity,
                    quadrant_change: 0,
                });
                continue;
            }
            match e.part {
                Part::Re => sr = -sr,
                Part::Im => si = -si,
            }
            let target = quadrant_of(sr, si);
            let step = if (quad + 1).rem_euclid(4) == target { 1 } else { -1 };
            debug_assert_eq!((quad + step).rem_euclid(4), target);
            quad += step;
            crossings.push(Crossing {
                part: e.part,
                interval: e.interval,
                multiplicity: e.multiplicity,
                quadrant_change: step,
            });
        }

        let (r1, i1) = (sign(&z1.re), sign(&z1.im));
        let right = (z.re.sign_right_of(&one), z.im.sign_right_of(&one));
        if quadrant_of(right.0, right.1) != quad.rem_euclid(4) {
            return Err(Error::SoundnessBug(
                "quadrant bookkeeping disagrees with the signs just right of t = 1".into(),
            ));
        }
        let lo = quad as f64 * FRAC_PI_2;
        if r1 != 0 && i1 != 0 {
            let k = ((lo + std::f64::consts::FRAC_PI_4 - arg_z1) / (2.0 * PI)).round();
            arg_z1 + 2.0 * PI * k
        } else {
            // Z(1) sits on an axis bounding the current quadrant: the real
            // axis has even index, the imaginary axis odd
            let want_even = i1 == 0;
            let k = if (quad % 2 == 0) == want_even { quad } else { quad + 1 };
            k as f64 * FRAC_PI_2
        }
    };

    Ok(AngleReport {
        theta_hat: phi + (p - 2.0) * FRAC_PI_2,
        phi,
        arg_z1,
        re_z1: z1.re,
        im_z1: z1.im,
        anchor,
        window_end: t_end,
        crossings,
        touches,
    })
}

/// Refines isolating intervals until every Re-root interval is disjoint
/// from every Im-root interval. Terminates because the parts share no root.
fn separate(events: &mut [Event]) {
    loop {
        let mut clash = None;
        'outer: for i in 0..events.len() {
            for j in 0..events.len() {
                if events[i].part == Part::Re
                    && events[j].part == Part::Im
                    && !events[i].interval.disjoint(&events[j].interval)
                {
                    clash = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = clash else { return };
        for k in [i, j] {
            let e = &mut events[k];
            e.interval.bisect(&e.factor);
        }
    }
}

/// `Z(1)` argument bookkeeping helper: value of `Z_V(1)` as floats.
pub fn z1_f64(z: &ComplexPoly) -> (f64, f64) {
    let v = z.eval(&q(1));
    (to_f64(&v.re), to_f64(&v.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;
    use crate::variety::build_builtin;

    /// Argument continuation by dense sampling: independent of the
    /// Sturm-based path.
    fn numeric_phi(z: &ComplexPoly) -> f64 {
        let t_far = 1e6_f64;
        let p = z.dim as f64;
        let (lr, li) = z.leading().to_f64();
        let canon = (-(p - 2.0) * FRAC_PI_2).sin_cos();
        // arg(lead · conj(canonical direction))
        let corr = (li * canon.1 - lr * canon.0).atan2(lr * canon.1 + li * canon.0);
        let (r, i) = z.eval_f64(t_far);
        let mut a = -(p - 2.0) * FRAC_PI_2 + corr;
        let (r0, i0) = (lr * t_far.powi(z.degree() as i32), li * t_far.powi(z.degree() as i32));
        a += (i * r0 - r * i0).atan2(r * r0 + i * i0);
        let n = 10_000;
        let mut prev = (r, i);
        for s in 1..=n {
            // geometric spacing from t_far to 1
            let t = t_far.powf(1.0 - s as f64 / n as f64);
            let cur = z.eval_f64(t);
            a += (cur.1 * prev.0 - cur.0 * prev.1).atan2(cur.0 * prev.0 + cur.1 * prev.1);
            prev = cur;
        }
        a
    }

    fn blp() -> (crate::variety::VarietyModel, CohomClass) {
        let m = build_builtin("blp_cp2").unwrap();
        let a = m.class(&[("H", 6), ("E", 1)]);
        (m, a)
    }

    #[test]
    fn counterexample_ambient_charge() {
        let (m, a) = blp();
        let z = z_polynomial(m.ambient(), &a, &m.omega).unwrap();
        assert_eq!(z.re, QPoly::new(vec![qr(-35, 2), q(0), qr(3, 2)]));
        assert_eq!(z.im, QPoly::new(vec![q(0), q(13)]));
        assert_eq!(z_value(&z, &q(1)), GaussQ::new(q(-16), q(13)));
    }

    #[test]
    fn exceptional_curve_charge() {
        let (m, a) = blp();
        let z = z_polynomial(m.subvariety("E").unwrap(), &a, &m.omega).unwrap();
        assert_eq!(z, ComplexPoly { re: QPoly::constant(q(1)), im: QPoly::new(vec![q(0), q(1)]), dim: 1 });
        assert_eq!(z_value(&z, &q(1)), GaussQ::new(q(1), q(1)));
    }

    #[test]
    fn zero_alpha_keeps_only_volume_term() {
        let m = build_builtin("cp2").unwrap();
        let z = z_polynomial(m.ambient(), &CohomClass::zero(1), &m.omega).unwrap();
        assert_eq!(z.re, QPoly::monomial(qr(1, 2), 2));
        assert!(z.im.is_zero());
        let zero = ComplexPoly::new(QPoly::zero(), QPoly::zero());
        assert_eq!(z_value(&zero, &qr(7, 3)), GaussQ::zero());
    }

    #[test]
    fn leading_coefficient_pattern() {
        // −(−i)^p/p! · ∫ω^p for p = 1..4: i, 1, −i, −1 times a positive scalar
        let expected = [(0, 1), (1, 0), (0, -1), (-1, 0)];
        for p in 1..=4usize {
            let mut map = std::collections::BTreeMap::new();
            map.insert(vec![0; p], q(3));
            let v = SubvarietyModel {
                name: "V".into(),
                dim: p,
                functional: crate::variety::SymTensor::from_sorted(p, 1, &map),
            };
            let z = z_polynomial(&v, &CohomClass::from_ints(&[2]), &CohomClass::from_ints(&[1])).unwrap();
            let lead = z.coeff(p);
            assert_eq!((sign(&lead.re) as i32, sign(&lead.im) as i32), expected[p - 1], "p={p}");
        }
    }

    #[test]
    fn certificates() {
        let (m, a) = blp();
        let z = z_polynomial(m.ambient(), &a, &m.omega).unwrap();
        let c = nonvanishing_certificate(&z).unwrap();
        assert!(c.common_root_free);
        assert_eq!(c.gcd_degree, 0);
        assert_eq!(c.im_roots_on_window, Some(0));
        assert_eq!(c.re_roots_on_window, Some(1));

        let bad = ComplexPoly::from_ints(&[-2, 1], &[-2, 1]);
        let c = nonvanishing_certificate(&bad).unwrap();
        assert!(!c.common_root_free);
        let r = c.vanishing_root.unwrap();
        assert!(r.lo <= q(2) && q(2) <= r.hi);

        let real_only = ComplexPoly::new(QPoly::new(vec![qr(-1, 2), q(1)]), QPoly::zero());
        assert!(nonvanishing_certificate(&real_only).unwrap().common_root_free);

        let zero = ComplexPoly::new(QPoly::zero(), QPoly::zero());
        assert!(matches!(nonvanishing_certificate(&zero), Err(Error::Degenerate(_))));
    }

    #[test]
    fn exceptional_curve_angles() {
        let z = ComplexPoly { re: QPoly::constant(q(1)), im: QPoly::new(vec![q(0), q(1)]), dim: 1 };
        let r = winding_angle(&z).unwrap();
        assert!((r.phi - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((r.theta_hat + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(r.crossings.is_empty());
        assert!((numeric_phi(&z) - r.phi).abs() < 1e-9);
    }

    #[test]
    fn counterexample_slicing_angle() {
        let (m, a) = blp();
        let z = z_polynomial(m.ambient(), &a, &m.omega).unwrap();
        let r = winding_angle(&z).unwrap();
        let want = PI - (13.0f64 / 16.0).atan();
        assert!((r.phi - want).abs() < 1e-12);
        assert_eq!(r.phi, r.theta_hat);
        assert_eq!(r.crossings.len(), 1);
        assert_eq!(r.crossings[0].part, Part::Re);
        let root = (35.0f64 / 3.0).sqrt();
        let iv = &r.crossings[0].interval;
        assert!(to_f64(&iv.lo) <= root && root <= to_f64(&iv.hi));
    }

    #[test]
    fn cp3_scalar_class_angle() {
        let m = build_builtin("cp3").unwrap();
        let z = z_polynomial(m.ambient(), &CohomClass::from_ints(&[2]), &m.omega).unwrap();
        let r = winding_angle(&z).unwrap();
        assert!((r.phi - (PI - 5.5f64.atan())).abs() < 1e-12);
        assert!((r.phi - numeric_phi(&z)).abs() < 1e-7);
    }

    #[test]
    fn refuses_vanishing_charge() {
        let bad = ComplexPoly::from_ints(&[-2, 1], &[-2, 1]);
        assert!(matches!(winding_angle(&bad), Err(Error::NotCertified(_))));
    }

    #[test]
    fn tangential_touch_is_logged_without_turning() {
        // Re = (t-3)^2 + 1/10 > 0 never vanishes; Im = (t-2)^2 touches zero
        // at t = 2 from above
        let re = QPoly::new(vec![q(9) + qr(1, 10), q(-6), q(1)]);
        let im = QPoly::new(vec![q(4), q(-4), q(1)]);
        let z = ComplexPoly::new(re, im);
        let r = winding_angle(&z).unwrap();
        assert_eq!(r.touches.len(), 1);
        assert_eq!(r.touches[0].multiplicity, 2);
        assert!(r.crossings.is_empty());
        assert!((r.phi - numeric_phi(&z)).abs() < 1e-7);
    }

    #[test]
    fn endpoint_on_axis() {
        // Z(t) = (t − 1) + i t : Z(1) = i, approached from the first quadrant
        let z = ComplexPoly::from_ints(&[-1, 1], &[0, 1]);
        let r = winding_angle(&z).unwrap();
        assert_eq!(r.phi, FRAC_PI_2 + 0.0 * r.anchor);
        assert!((r.phi - numeric_phi(&z)).abs() < 1e-7);
    }

    #[test]
    fn doubling_window_is_stable() {
        let (m, a) = blp();
        for v in m.family() {
            let z = z_polynomial(v, &a, &m.omega).unwrap();
            let r1 = winding_angle(&z).unwrap();
            let r2 = winding_angle_with_window(&z, &(r1.window_end.clone() * q(2))).unwrap();
            assert!((r1.phi - r2.phi).abs() < 1e-10);
        }
    }

    #[test]
    fn multi_turn_winding() {
        // degree-4 charge with several crossings; compare to dense oracle
        let z = ComplexPoly::from_ints(&[30, -10, -35, 0, -1], &[0, 50, 0, -24, 0]);
        let z = ComplexPoly { dim: 4, ..z };
        let r = winding_angle(&z).unwrap();
        assert!((r.phi - numeric_phi(&z)).abs() < 1e-7, "{} vs {}", r.phi, numeric_phi(&z));
        let miss = (r.phi - r.arg_z1) / (2.0 * PI);
        assert!((miss - miss.round()).abs() < 1e-9);
    }
}
