//! Pointwise Lagrangian phase `Q_ω(α) = Σ arccot λ_i` of a Hermitian pair.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Smallest admissible eigenvalue of ω.
pub const PD_THRESHOLD: f64 = 1e-10;
/// Relative tolerance for Hermitian symmetry.
pub const HERMITIAN_TOL: f64 = 1e-14;
/// Relative tolerance for the product formula.
pub const PRODUCT_TOL: f64 = 1e-10;

/// arccot on the branch `(0, π)`, continuous and decreasing.
pub fn arccot(x: f64) -> f64 {
    if x > 0.0 {
        (1.0 / x).atan()
    } else if x < 0.0 {
        PI + (1.0 / x).atan()
    } else {
        FRAC_PI_2
    }
}

/// d/dx arccot x.
pub fn arccot_deriv(x: f64) -> f64 {
    -1.0 / (1.0 + x * x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPair {
    alpha: DMatrix<C64>,
    omega: DMatrix<C64>,
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_hermitian(m: &DMatrix<C64>, what: &str) -> Result<()> {
    let scale = max_abs(m).max(1.0);
    let defect = max_abs(&(m - m.adjoint()));
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(format!("{what}: |A - A*| = {defect:e}")));
    }
    Ok(())
}

fn hermitize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).map(|z| z * 0.5)
}

impl HermitianPair {
    pub fn new(alpha: DMatrix<C64>, omega: DMatrix<C64>) -> Result<Self> {
        if !alpha.is_square() || !omega.is_square() || alpha.nrows() != omega.nrows() {
            return Err(Error::Dimension(format!(
                "alpha is {}x{}, omega is {}x{}",
                alpha.nrows(),
                alpha.ncols(),
                omega.nrows(),
                omega.ncols()
            )));
        }
        if alpha.nrows() == 0 {
            return Err(Error::Dimension("empty matrices".into()));
        }
        if alpha.iter().chain(omega.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        check_hermitian(&alpha, "alpha")?;
        check_hermitian(&omega, "omega")?;
        let (alpha, omega) = (hermitize(&alpha), hermitize(&omega));
        let min = SymmetricEigen::new(omega.clone()).eigenvalues.min();
        if min <= PD_THRESHOLD {
            return Err(Error::NotPositiveDefinite(format!("smallest eigenvalue of omega is {min:e}")));
        }
        Ok(Self { alpha, omega })
    }

    pub fn from_real(alpha: DMatrix<f64>, omega: DMatrix<f64>) -> Result<Self> {
        Self::new(alpha.map(|x| C64::new(x, 0.0)), omega.map(|x| C64::new(x, 0.0)))
    }

    pub fn from_diagonal(alpha: &[f64], omega: &[f64]) -> Result<Self> {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(alpha));
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(omega));
        Self::from_real(a, w)
    }

    pub fn n(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn alpha(&self) -> &DMatrix<C64> {
        &self.alpha
    }

    pub fn omega(&self) -> &DMatrix<C64> {
        &self.omega
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    pub lambdas: Vec<f64>,
    pub q: f64,
    pub modulus: f64,
}

/// Eigenvalues of the pencil `det(α − λω) = 0`, sorted ascending, via
/// `ω = LL*` and the ordinary problem for `L⁻¹αL⁻*`.
pub fn generalized_eigenvalues(pair: &HermitianPair) -> Result<Vec<f64>> {
    let chol = pair
        .omega
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("Cholesky factorization failed".into()))?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(&pair.alpha)
        .ok_or_else(|| Error::NotPositiveDefinite("singular Cholesky factor".into()))?;
    let b = l
        .solve_lower_triangular(&y.adjoint())
        .ok_or_else(|| Error::NotPositiveDefinite("singular Cholesky factor".into()))?;
    let mut lambdas: Vec<f64> = SymmetricEigen::new(hermitize(&b)).eigenvalues.iter().copied().collect();
    lambdas.sort_by(f64::total_cmp);
    Ok(lambdas)
}

pub fn phase_of(lambdas: &[f64]) -> f64 {
    lambdas.iter().map(|&l| arccot(l)).sum()
}

pub fn lagrangian_phase(pair: &HermitianPair) -> Result<PhasePoint> {
    let lambdas = generalized_eigenvalues(pair)?;
    let q = phase_of(&lambdas);
    let modulus = lambdas.iter().map(|l| 1.0 + l * l).product::<f64>().sqrt();
    Ok(PhasePoint { lambdas, q, modulus })
}

/// `det(α + iω) / det(ω)`, checked against `modulus·e^{iq}`.
pub fn complex_quotient(pair: &HermitianPair) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    let num = (&pair.alpha + pair.omega.map(|z| z * i)).determinant();
    let den = pair.omega.clone().determinant();
    let z = num / den;
    let pt = lagrangian_phase(pair)?;
    let expected = C64::from_polar(pt.modulus, pt.q);
    let err = (z - expected).norm() / pt.modulus;
    if err > PRODUCT_TOL {
        return Err(Error::SoundnessBug(format!(
            "product formula: det ratio {z} vs {expected}, relative error {err:e}"
        )));
    }
    Ok(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "hypercritical")]
    Hypercritical,
    #[serde(rename = "supercritical")]
    Supercritical,
    #[serde(rename = "neither")]
    Neither,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Hypercritical => "hypercritical",
            Self::Supercritical => "supercritical",
            Self::Neither => "neither",
        }
    }
}

/// Hypercritical below π/2, supercritical below π.
pub fn classify_branch(q: f64, n: usize) -> Result<Branch> {
    if !(q > 0.0 && q < n as f64 * PI) {
        return Err(Error::OutOfRange(format!("phase {q} outside (0, {n}pi)")));
    }
    Ok(if q < FRAC_PI_2 {
        Branch::Hypercritical
    } else if q < PI {
        Branch::Supercritical
    } else {
        Branch::Neither
    })
}

/// The unique `s` with `Σ arccot(λ_i + s) = target`.
pub fn solve_scalar_shift(lambdas: &[f64], target: f64) -> Result<f64> {
    let n = lambdas.len();
    if n == 0 || !(target > 0.0 && target < n as f64 * PI) {
        return Err(Error::OutOfRange(format!("target {target} outside (0, {n}pi)")));
    }
    let f = |s: f64| lambdas.iter().map(|l| arccot(l + s)).sum::<f64>() - target;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while f(lo) <= 0.0 {
        lo *= 2.0;
        if lo < -1e300 {
            return Err(Error::OutOfRange(format!("target {target} too close to {n}pi")));
        }
    }
    while f(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::OutOfRange(format!("target {target} too close to 0")));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
