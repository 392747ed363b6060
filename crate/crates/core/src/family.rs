//! Linear test families `α_t = α + tω` and exact positivity certificates for
//! the family inequality over `t ∈ [0, ∞)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::criteria::{check_kahlerity, complex_power_integral};
use crate::error::{Error, Result};
use crate::phase::arccot;
use crate::poly::{Bound, QPoly};
use crate::rational::{binomial, factorial, fmt_q, from_f64, q, rational_upper_bound, to_f64, GaussQ, Q};
use crate::variety::{CohomClass, SubvarietyModel, VarietyModel};

/// Doubling cap for the search for `T` in the test-family validation.
pub const T_SEARCH_CAP_LOG2: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    Linear,
    /// Any other monotone family. Represented, not validated.
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub base: CohomClass,
    pub direction: CohomClass,
    /// Θ₀ in radians.
    pub theta: f64,
    pub t_witness: Option<String>,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn ser_poly<S: serde::Serializer>(p: &QPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        seq.serialize_element(&fmt_q(c))?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityCertificate {
    /// Ascending coefficients.
    #[serde(serialize_with = "ser_poly")]
    pub polynomial: QPoly,
    pub sturm_roots_on_open_half_line: usize,
    #[serde(serialize_with = "ser_q")]
    pub value_at_zero: Q,
    pub strict: bool,
    pub positive: bool,
}

/// The linear family with base α and direction ω. Fails when ω does not pass
/// the family-relative Kählerity test.
pub fn linear_family(x: &VarietyModel, alpha: &CohomClass, direction: &CohomClass, theta: f64) -> Result<FamilySpec> {
    x.check_class(alpha)?;
    let (ok, detail) = check_kahlerity(x, direction, &x.omega)?;
    if !ok {
        let bad = detail.iter().find(|d| !d.ok).expect("a failing entry exists");
        return Err(Error::NonKahler(format!(
            "direction fails on {} at k = {} (value {})",
            bad.subvariety,
            bad.k,
            fmt_q(&bad.value)
        )));
    }
    Ok(FamilySpec {
        kind: FamilyKind::Linear,
        base: alpha.clone(),
        direction: direction.clone(),
        theta,
        t_witness: None,
    })
}

/// Looks for a rational `T` such that `α_T − cot(Θ/n)·ω` passes the
/// Kählerity test, doubling from 1. Records the witness on success.
pub fn validate_test_family(x: &VarietyModel, f: &mut FamilySpec) -> Result<bool> {
    if f.kind != FamilyKind::Linear {
        return Err(Error::Unsupported("only linear test families are validated".into()));
    }
    let n = x.dim as f64;
    let c = rational_upper_bound(1.0 / (f.theta / n).tan())
        .ok_or_else(|| Error::OutOfRange(format!("cot(theta/n) is not finite for theta = {}", f.theta)))?;
    let shifted = |t: &Q| f.base.add(&f.direction.scale(t)).sub(&x.omega.scale(&c));
    let mut t = Q::zero();
    if check_kahlerity(x, &shifted(&t), &x.omega)?.0 {
        f.t_witness = Some(fmt_q(&t));
        return Ok(true);
    }
    t = Q::one();
    for _ in 0..=T_SEARCH_CAP_LOG2 {
        if check_kahlerity(x, &shifted(&t), &x.omega)?.0 {
            f.t_witness = Some(fmt_q(&t));
            return Ok(true);
        }
        t = t * q(2);
    }
    Err(Error::Indeterminate(format!("no T up to 2^{T_SEARCH_CAP_LOG2} makes the family dominate")))
}

/// `∫_V (Re − cot·Im)(α + (t+i)ω)^level ∧ ω^{p−level}` as a polynomial in t.
fn level_polynomial(v: &SubvarietyModel, alpha: &CohomClass, omega: &CohomClass, level: usize, cot: &Q) -> Result<QPoly> {
    let p = v.dim;
    let t_plus_i = [GaussQ::new(q(0), q(1)), GaussQ::new(q(1), q(0))];
    let mut re = QPoly::zero();
    let mut im = QPoly::zero();
    // powers of (t + i) as complex coefficient vectors
    let mut pow: Vec<GaussQ> = vec![GaussQ::new(q(1), q(0))];
    for j in 0..=level {
        let m = v.triple_mix(alpha, level - j, omega, j + (p - level), omega)?;
        let w = binomial(level, j) * m;
        re = re.add(&QPoly::new(pow.iter().map(|z| &z.re * &w).collect()));
        im = im.add(&QPoly::new(pow.iter().map(|z| &z.im * &w).collect()));
        let mut next = vec![GaussQ::zero(); pow.len() + 1];
        for (k, z) in pow.iter().enumerate() {
            next[k] = next[k].add(&z.mul(&t_plus_i[0]));
            next[k + 1] = next[k + 1].add(&z.mul(&t_plus_i[1]));
        }
        pow = next;
    }
    Ok(re.sub(&im.scale(cot)))
}

/// `P_V(t) = ∫_V Re(α_t + iω)^p − cot·Im(α_t + iω)^p` for the linear family,
/// with the derivative identity `P_V' = p·∫_V (Re − cot·Im)(α_t + iω)^{p−1} ∧ ω`
/// checked exactly.
pub fn family_inequality_polynomial(v: &SubvarietyModel, f: &FamilySpec, omega: &CohomClass, cot: &Q) -> Result<QPoly> {
    if f.kind != FamilyKind::Linear {
        return Err(Error::Unsupported("only linear test families are expanded".into()));
    }
    if &f.direction != omega {
        return Err(Error::Unsupported("the family direction must equal the reference class".into()));
    }
    let p = v.dim;
    let poly = level_polynomial(v, &f.base, omega, p, cot)?;
    let lower = level_polynomial(v, &f.base, omega, p - 1, cot)?;
    if poly.derivative() != lower.scale(&q(p as i64)) {
        return Err(Error::SoundnessBug(format!(
            "derivative identity fails on {}: P' = {} but p*Q = {}",
            v.name,
            poly.derivative(),
            lower.scale(&q(p as i64))
        )));
    }
    Ok(poly)
}

/// Exact positivity on `[0, ∞)`: sign at zero plus a Sturm count on `(0, ∞)`.
pub fn check_family_positivity(poly: &QPoly, strict: bool) -> PositivityCertificate {
    let v0 = poly.eval(&Q::zero());
    let roots = poly.count_roots_open(&Bound::Finite(Q::zero()), &Bound::PosInf);
    let at_zero_ok = if strict { v0.is_positive() } else { !v0.is_negative() };
    let positive = !poly.is_zero() && at_zero_ok && roots == 0 && poly.sign_at_pos_inf() > 0;
    PositivityCertificate {
        polynomial: poly.clone(),
        sturm_roots_on_open_half_line: roots,
        value_at_zero: v0,
        strict,
        positive,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemarkValue {
    pub subvariety: String,
    pub m: usize,
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemarkReport {
    pub holds: bool,
    /// Set when only `m = 0` was checked under the projective weakening.
    pub hypothesis_conditional: bool,
    pub values: Vec<RemarkValue>,
}

/// `∫_V {Re(α+iω)^{p−m} − cot·Im(α+iω)^{p−m}} ∧ χ^m > 0` over every V and
/// `0 ≤ m ≤ p`. With `projective_weakening` only `m = 0` is checked and the
/// report is flagged as conditional on projectivity of the model.
pub fn check_remark_condition(
    x: &VarietyModel,
    alpha: &CohomClass,
    omega: &CohomClass,
    chi: &CohomClass,
    cot: &Q,
    projective_weakening: bool,
) -> Result<RemarkReport> {
    let (ok, detail) = check_kahlerity(x, chi, omega)?;
    if !ok {
        let bad = detail.iter().find(|d| !d.ok).expect("a failing entry exists");
        return Err(Error::NonKahler(format!("chi fails on {} at k = {}", bad.subvariety, bad.k)));
    }
    x.check_class(alpha)?;
    let mut values = Vec::new();
    for v in x.family() {
        let top = if projective_weakening { 0 } else { v.dim };
        for m in 0..=top {
            let z = complex_power_integral(v, alpha, omega, v.dim - m, chi)?;
            let value = z.re - cot * z.im;
            values.push(RemarkValue {
                subvariety: v.name.clone(),
                m,
                ok: value.is_positive(),
                value,
            });
        }
    }
    Ok(RemarkReport {
        holds: values.iter().all(|r| r.ok),
        hypothesis_conditional: projective_weakening,
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HOmegaStatus {
    #[serde(rename = "nonempty")]
    Nonempty,
    #[serde(rename = "obstructed")]
    Obstructed,
    #[serde(rename = "out-of-hypercritical-scope")]
    OutOfHypercriticalScope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subvariety: String,
    pub t: String,
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubvarietyCertificate {
    pub subvariety: String,
    pub certificate: PositivityCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HOmegaReport {
    pub status: HOmegaStatus,
    /// `arg ∫_X (α + iω)^n` (principal value).
    pub theta0: Option<f64>,
    pub cot_big_theta: Option<String>,
    pub cot_big_theta_overridden: bool,
    pub family: Option<FamilySpec>,
    pub certificates: Vec<SubvarietyCertificate>,
    pub witness: Option<Witness>,
    pub family_relative: bool,
    pub caveat: String,
}

const CAVEAT: &str = "family-relative: sufficiency assumes the listed subvarieties are adequate for the model";

/// `cot Θ₀ = cot(θ₀ + π/2) = −Im/Re` where `θ₀ = arg ∫_X (α+iω)^n`.
pub fn cot_big_theta(x: &VarietyModel, alpha: &CohomClass, omega: &CohomClass) -> Result<(GaussQ, Option<Q>)> {
    let z = complex_power_integral(x.ambient(), alpha, omega, x.dim, alpha)?;
    if z.re.is_zero() {
        return Ok((z, None));
    }
    let cot = -(&z.im / &z.re);
    Ok((z, Some(cot)))
}

/// Bundles family validation and all-V positivity into one verdict.
pub fn h_omega_verdict(x: &VarietyModel, alpha: &CohomClass, omega: &CohomClass, cot_override: Option<Q>) -> Result<HOmegaReport> {
    x.check_class(alpha)?;
    x.check_class(omega)?;
    let (total, exact_cot) = cot_big_theta(x, alpha, omega)?;
    let overridden = cot_override.is_some();
    let (theta0, cot) = match cot_override {
        Some(c) => (arccot(to_f64(&c)) - FRAC_PI_2, Some(c)),
        None => {
            let (re, im) = total.to_f64();
            (im.atan2(re), exact_cot)
        }
    };
    let mut report = HOmegaReport {
        status: HOmegaStatus::OutOfHypercriticalScope,
        theta0: Some(theta0),
        cot_big_theta: cot.as_ref().map(fmt_q),
        cot_big_theta_overridden: overridden,
        family: None,
        certificates: Vec::new(),
        witness: None,
        family_relative: true,
        caveat: CAVEAT.into(),
    };
    let in_scope = if overridden {
        theta0 > 0.0 && theta0 < FRAC_PI_2
    } else {
        total.re.is_positive() && total.im.is_positive()
    };
    let cot = match (in_scope, cot) {
        (true, Some(c)) => c,
        _ => return Ok(report),
    };

    let mut fam = linear_family(x, alpha, omega, theta0 + FRAC_PI_2)?;
    validate_test_family(x, &mut fam)?;
    let mut witness = None;
    for v in x.family() {
        let poly = family_inequality_polynomial(v, &fam, omega, &cot)?;
        let cert = check_family_positivity(&poly, true);
        if !cert.positive && witness.is_none() {
            witness = Some(failure_witness(&cert, v));
        }
        report.certificates.push(SubvarietyCertificate {
            subvariety: v.name.clone(),
            certificate: cert,
        });
    }
    report.status = if witness.is_some() { HOmegaStatus::Obstructed } else { HOmegaStatus::Nonempty };
    report.witness = witness;
    report.family = Some(fam);
    debug_assert!(theta0 < PI);
    Ok(report)
}

fn failure_witness(cert: &PositivityCertificate, v: &SubvarietyModel) -> Witness {
    if !cert.value_at_zero.is_positive() {
        return Witness {
            subvariety: v.name.clone(),
            t: "0".into(),
            value: cert.value_at_zero.clone(),
        };
    }
    let iv = cert
        .polynomial
        .isolate_roots(&Bound::Finite(Q::zero()), &Bound::PosInf)
        .into_iter()
        .next();
    let t = match iv {
        Some(r) if r.is_exact() => r.lo.clone(),
        Some(r) => (&r.lo + &r.hi) / q(2),
        // no root but negative at infinity: the polynomial is identically
        // nonpositive far out; probe a large point
        None => from_f64(1e6).unwrap_or_else(|| q(1_000_000)),
    };
    Witness {
        subvariety: v.name.clone(),
        t: fmt_q(&t),
        value: cert.polynomial.eval(&t),
    }
}

/// `P^{(m)}(0)` for the level-p family polynomial, which equals
/// `p!/(p−m)!` times the χ-condition value at χ = ω.
pub fn derivative_at_zero(poly: &QPoly, m: usize) -> Q {
    poly.coeff(m) * factorial(m)
}
