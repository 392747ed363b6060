//! Algebraic solvability criteria for the hypercritical dHYM equation on a
//! threefold, and the class-level inequalities they imply.
//!
//! The user-facing conditions are the Chern-number inequality, the position
//! of the ambient slicing angle, and the comparison of slicing angles on the
//! proper subvarieties. When all three hold, Kählerity of α, the stability
//! inequalities and the twisted ladder are consequences; they are evaluated
//! exactly and any failure is reported as a soundness bug.
//!
//! Dimension 3 runs the full pipeline. Other dimensions run the surface
//! subset: charges, the `Im Z_V > 0` test over the family, and the ℋ_ω
//! obstruction from [`crate::family`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::charge::{nonvanishing_certificate, winding_angle, z_polynomial, AngleReport, ComplexPoly};
use crate::error::{Error, Result};
use crate::family::{h_omega_verdict, HOmegaReport, HOmegaStatus};
use crate::phase::arccot;
use crate::rational::{binomial, fmt_q, q, to_f64, GaussQ, Q};
use crate::variety::{CohomClass, SubvarietyModel, VarietyModel};

/// Width of the band around a transcendental angle comparison inside which
/// the outcome is reported as indeterminate.
pub const ANGLE_BAND: f64 = 1e-12;

/// Tolerance for the θ₀ cross-check between the winding pipeline and the
/// exact cotangent.
pub const THETA0_TOL: f64 = 1e-9;

/// `∫_V (α + iω)^k ∧ β^{p−k}`, exactly.
pub fn complex_power_integral(
    v: &SubvarietyModel,
    alpha: &CohomClass,
    omega: &CohomClass,
    k: usize,
    beta: &CohomClass,
) -> Result<GaussQ> {
    let mut acc = GaussQ::zero();
    for j in 0..=k {
        let m = v.triple_mix(alpha, k - j, omega, j, beta)?;
        acc = acc.add(&GaussQ::i_pow(j as i64).scale(&(binomial(k, j) * m)));
    }
    Ok(acc)
}

/// `∫_V (Re(α+iω)^k − c·Im(α+iω)^k) ∧ β^{p−k}`.
pub fn twisted_integral(
    v: &SubvarietyModel,
    alpha: &CohomClass,
    omega: &CohomClass,
    k: usize,
    beta: &CohomClass,
    cot: &Q,
) -> Result<Q> {
    let z = complex_power_integral(v, alpha, omega, k, beta)?;
    Ok(z.re - cot * z.im)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernVector {
    #[serde(serialize_with = "ser_qs")]
    pub a: [Q; 4],
}

fn ser_qs<S: serde::Serializer>(a: &[Q; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for x in a {
        seq.serialize_element(&fmt_q(x))?;
    }
    seq.end()
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&fmt_q(v)),
        None => s.serialize_none(),
    }
}

impl ChernVector {
    pub fn from_ints(a: [i64; 4]) -> Self {
        Self { a: a.map(q) }
    }
}

/// `a_i = ∫_X α^i ∧ ω^{3−i}`.
pub fn chern_vector(x: &VarietyModel, alpha: &CohomClass, omega: &CohomClass) -> Result<ChernVector> {
    if x.dim != 3 {
        return Err(Error::Dimension(format!("Chern vector needs dim 3, model {} has dim {}", x.name, x.dim)));
    }
    x.check_class(alpha)?;
    x.check_class(omega)?;
    let amb = x.ambient();
    let a = [0, 1, 2, 3].map(|i| amb.wedge_mix_integral(alpha, omega, i));
    let [a0, a1, a2, a3] = a;
    Ok(ChernVector { a: [a0?, a1?, a2?, a3?] })
}

/// `a₃·a₀ < 9·a₁·a₂`.
pub fn check_chern_inequality(c: &ChernVector) -> bool {
    let [a0, a1, a2, a3] = &c.a;
    a3 * a0 < q(9) * a1 * a2
}

/// `cot θ₀ = (a₃ − 3a₁)/(3a₂ − a₀)`.
pub fn cot_theta0_rational(c: &ChernVector) -> Result<Q> {
    let [a0, a1, a2, a3] = &c.a;
    let den = q(3) * a2 - a0;
    if den.is_zero() {
        return Err(Error::OutOfRange("3a2 = a0: theta_0 sits on the pi/2 boundary".into()));
    }
    Ok((a3 - q(3) * a1) / den)
}

fn band_gt(x: f64, y: f64, what: &str) -> Result<bool> {
    if (x - y).abs() < ANGLE_BAND {
        return Err(Error::Indeterminate(format!("{what}: {x} vs {y}")));
    }
    Ok(x > y)
}

/// `Im Z_X(1) > 0` and `φ_X ∈ (π/2, π)`.
pub fn check_condition_ii(z_x: &ComplexPoly) -> Result<bool> {
    if z_x.dim != 3 {
        return Err(Error::Dimension(format!("condition (ii) is stated for threefolds, got p = {}", z_x.dim)));
    }
    let im = z_x.eval(&q(1)).im;
    let cert = nonvanishing_certificate(z_x)?;
    if !cert.common_root_free {
        return Ok(false);
    }
    let phi = winding_angle(z_x)?.phi;
    let above = band_gt(phi, FRAC_PI_2, "phi_X against pi/2")?;
    let below = band_gt(PI, phi, "phi_X against pi")?;
    Ok(im.is_positive() && above && below)
}

/// Proper subvarieties: `Im Z_V(1) > 0` and `φ_V > φ_X`.
pub fn check_condition_iii<'a>(reports: impl IntoIterator<Item = &'a AngleReport>, phi_x: f64) -> Result<bool> {
    let mut ok = true;
    for r in reports {
        let above = band_gt(r.phi, phi_x, "phi_V against phi_X")?;
        ok &= r.im_z1.is_positive() && above;
    }
    Ok(ok)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralDetail {
    pub subvariety: String,
    pub k: usize,
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
    pub ok: bool,
}

/// Positivity of `∫_V α^k ∧ ω^{p−k}` for every V in the family and k = 1..p.
pub fn check_kahlerity(x: &VarietyModel, alpha: &CohomClass, omega: &CohomClass) -> Result<(bool, Vec<IntegralDetail>)> {
    x.check_class(alpha)?;
    x.check_class(omega)?;
    let mut details = Vec::new();
    for v in x.family() {
        for k in 1..=v.dim {
            let value = v.wedge_mix_integral(alpha, omega, k)?;
            details.push(IntegralDetail {
                subvariety: v.name.clone(),
                k,
                ok: value.is_positive(),
                value,
            });
        }
    }
    Ok((details.iter().all(|d| d.ok), details))
}

/// `∫_V Re(α+iω)^p − cot·Im(α+iω)^p`: zero on X, positive on proper V.
pub fn check_stability_inequalities(
    x: &VarietyModel,
    alpha: &CohomClass,
    omega: &CohomClass,
    cot: &Q,
) -> Result<(bool, Vec<IntegralDetail>)> {
    x.check_class(alpha)?;
    let mut details = Vec::new();
    for v in x.family() {
        let value = twisted_integral(v, alpha, omega, v.dim, alpha, cot)?;
        if v.is_ambient() {
            if !value.is_zero() {
                return Err(Error::InconsistentTheta0(format!(
                    "ambient value {} with cot theta_0 = {} (must vanish)",
                    fmt_q(&value),
                    fmt_q(cot)
                )));
            }
            details.push(IntegralDetail {
                subvariety: v.name.clone(),
                k: v.dim,
                value,
                ok: true,
            });
        } else {
            details.push(IntegralDetail {
                subvariety: v.name.clone(),
                k: v.dim,
                ok: value.is_positive(),
                value,
            });
        }
    }
    Ok((details.iter().all(|d| d.ok), details))
}

/// The ladder `∫_V (Re(α+iω)^k − cot·Im(α+iω)^k) ∧ α^{p−k}`, k = 1..p:
/// non-negative on X, positive on proper V. In dimension 3 the ambient
/// k = 1, 2 values are cross-checked against their closed forms in the
/// Chern vector whenever `cot` is the exact `cot θ₀`.
pub fn check_claim_inequalities(
    x: &VarietyModel,
    alpha: &CohomClass,
    omega: &CohomClass,
    cot: &Q,
) -> Result<(bool, Vec<IntegralDetail>)> {
    x.check_class(alpha)?;
    let mut details = Vec::new();
    for v in x.family() {
        for k in 1..=v.dim {
            let value = twisted_integral(v, alpha, omega, k, alpha, cot)?;
            let ok = if v.is_ambient() { !value.is_negative() } else { value.is_positive() };
            details.push(IntegralDetail {
                subvariety: v.name.clone(),
                k,
                value,
                ok,
            });
        }
    }
    if x.dim == 3 {
        let c = chern_vector(x, alpha, omega)?;
        if cot_theta0_rational(&c).ok().as_ref() == Some(cot) {
            let [a0, a1, a2, a3] = &c.a;
            let den = q(3) * a2 - a0;
            let k1 = (q(2) * a2 * a3 - a3 * a0 + q(3) * a1 * a2) / &den;
            let k2 = (q(3) * a1 * a2 + a2 * a3 + a1 * a0 - a0 * a3) / &den;
            for (k, want) in [(1, k1), (2, k2)] {
                let got = details
                    .iter()
                    .find(|d| d.subvariety == x.ambient().name && d.k == k)
                    .map(|d| d.value.clone())
                    .expect("ambient ladder entries are always present");
                if got != want {
                    return Err(Error::InternalConsistency(format!(
                        "claim k = {k}: ladder value {} differs from closed form {}",
                        fmt_q(&got),
                        fmt_q(&want)
                    )));
                }
            }
        }
    }
    Ok((details.iter().all(|d| d.ok), details))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubvarietyAngles {
    pub subvariety: String,
    pub dim: usize,
    pub z1: String,
    pub certified: bool,
    pub im_positive: bool,
    /// `None` when the charge vanishes somewhere on `[1, ∞]`.
    pub angles: Option<AngleReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictLabel {
    #[serde(rename = "solvable-hypercritical")]
    SolvableHypercritical,
    #[serde(rename = "not-solvable")]
    NotSolvable,
    #[serde(rename = "condition-(B)-holds, ℋ_ω-obstructed")]
    ConditionBObstructed,
    #[serde(rename = "condition-(B)-holds, ℋ_ω-nonempty")]
    ConditionBNonempty,
    #[serde(rename = "condition-(B)-holds, not-hypercritical")]
    ConditionBNotHypercritical,
    #[serde(rename = "condition-(B)-fails")]
    ConditionBFails,
}

impl VerdictLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SolvableHypercritical => "solvable-hypercritical",
            Self::NotSolvable => "not-solvable",
            Self::ConditionBObstructed => "condition-(B)-holds, ℋ_ω-obstructed",
            Self::ConditionBNonempty => "condition-(B)-holds, ℋ_ω-nonempty",
            Self::ConditionBNotHypercritical => "condition-(B)-holds, not-hypercritical",
            Self::ConditionBFails => "condition-(B)-fails",
        }
    }

    /// The affirmative outcome of each pipeline.
    pub fn is_positive(&self) -> bool {
        matches!(self, Self::SolvableHypercritical | Self::ConditionBNonempty)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriteriaVerdict {
    pub label: VerdictLabel,
    pub dim: usize,
    pub chern: Option<ChernVector>,
    pub chern_ok: Option<bool>,
    pub cond2_ok: Option<bool>,
    pub cond3_ok: Option<bool>,
    /// `Im Z_V(1) > 0` for every V in the family.
    pub condition_b: bool,
    pub kahlerity_ok: bool,
    pub stability_ok: Option<bool>,
    pub claim_ok: Option<bool>,
    pub phi_x: Option<f64>,
    pub theta0: Option<f64>,
    #[serde(serialize_with = "ser_opt_q")]
    pub cot_theta0: Option<Q>,
    pub subvarieties: Vec<SubvarietyAngles>,
    pub kahlerity: Vec<IntegralDetail>,
    pub stability: Vec<IntegralDetail>,
    pub claim: Vec<IntegralDetail>,
    pub h_omega: Option<HOmegaReport>,
    pub family_relative: bool,
    pub family_complete: bool,
}

fn angles_for(v: &SubvarietyModel, alpha: &CohomClass, omega: &CohomClass) -> Result<SubvarietyAngles> {
    let z = z_polynomial(v, alpha, omega)?;
    let cert = nonvanishing_certificate(&z)?;
    let z1 = z.eval(&q(1));
    let angles = if cert.common_root_free { Some(winding_angle(&z)?) } else { None };
    Ok(SubvarietyAngles {
        subvariety: v.name.clone(),
        dim: v.dim,
        z1: z1.to_string_exact(),
        certified: cert.common_root_free,
        im_positive: z1.im.is_positive(),
        angles,
    })
}

/// Runs every check and aggregates the verdict.
pub fn full_verdict(x: &VarietyModel, alpha: &CohomClass, omega: &CohomClass) -> Result<CriteriaVerdict> {
    x.check_class(alpha)?;
    x.check_class(omega)?;
    let subvarieties = x
        .family()
        .iter()
        .map(|v| angles_for(v, alpha, omega))
        .collect::<Result<Vec<_>>>()?;
    let condition_b = subvarieties.iter().all(|s| s.im_positive);
    let (kahlerity_ok, kahlerity) = check_kahlerity(x, alpha, omega)?;

    let mut verdict = CriteriaVerdict {
        label: VerdictLabel::NotSolvable,
        dim: x.dim,
        chern: None,
        chern_ok: None,
        cond2_ok: None,
        cond3_ok: None,
        condition_b,
        kahlerity_ok,
        stability_ok: None,
        claim_ok: None,
        phi_x: None,
        theta0: None,
        cot_theta0: None,
        subvarieties,
        kahlerity,
        stability: Vec::new(),
        claim: Vec::new(),
        h_omega: None,
        family_relative: true,
        family_complete: x.family_complete(),
    };

    if x.dim != 3 {
        let h = h_omega_verdict(x, alpha, omega, None)?;
        verdict.theta0 = h.theta0;
        verdict.label = match (condition_b, &h.status) {
            (false, _) => VerdictLabel::ConditionBFails,
            (true, HOmegaStatus::Nonempty) => VerdictLabel::ConditionBNonempty,
            (true, HOmegaStatus::Obstructed) => VerdictLabel::ConditionBObstructed,
            (true, HOmegaStatus::OutOfHypercriticalScope) => VerdictLabel::ConditionBNotHypercritical,
        };
        verdict.h_omega = Some(h);
        return Ok(verdict);
    }

    let chern = chern_vector(x, alpha, omega)?;
    let chern_ok = check_chern_inequality(&chern);
    let z_x = z_polynomial(x.ambient(), alpha, omega)?;
    let cond2 = check_condition_ii(&z_x)?;
    let ambient = verdict.subvarieties.last().expect("ambient entry present");
    let phi_x = ambient.angles.as_ref().map(|a| a.phi);
    verdict.phi_x = phi_x;

    let cond3 = match phi_x {
        Some(px) => {
            let proper = &verdict.subvarieties[..verdict.subvarieties.len() - 1];
            if proper.iter().all(|s| s.certified) {
                check_condition_iii(proper.iter().filter_map(|s| s.angles.as_ref()), px)?
            } else {
                false
            }
        }
        None => false,
    };
    let cot = cot_theta0_rational(&chern).ok();
    verdict.chern = Some(chern);
    verdict.chern_ok = Some(chern_ok);
    verdict.cond2_ok = Some(cond2);
    verdict.cond3_ok = Some(cond3);

    if let Some(cot) = &cot {
        let (stab_ok, stab) = check_stability_inequalities(x, alpha, omega, cot)?;
        let (claim_ok, claim) = check_claim_inequalities(x, alpha, omega, cot)?;
        verdict.stability_ok = Some(stab_ok);
        verdict.stability = stab;
        verdict.claim_ok = Some(claim_ok);
        verdict.claim = claim;
    }
    verdict.cot_theta0 = cot.clone();

    if chern_ok && cond2 && cond3 {
        let px = phi_x.expect("condition (ii) implies a certified ambient charge");
        let theta0 = PI - px;
        verdict.theta0 = Some(theta0);
        verdict.label = VerdictLabel::SolvableHypercritical;
        let cot = cot.ok_or_else(|| Error::SoundnessBug("criteria pass but 3a2 = a0".into()))?;
        let exact_theta = arccot(to_f64(&cot));
        if (exact_theta - theta0).abs() >= THETA0_TOL || !(0.0..FRAC_PI_2).contains(&theta0) {
            return Err(Error::SoundnessBug(format!(
                "theta_0 from winding {theta0} vs arccot(cot theta_0) {exact_theta}"
            )));
        }
        if !verdict.kahlerity_ok {
            return Err(Error::SoundnessBug("criteria pass but alpha fails the Kählerity integrals".into()));
        }
        if verdict.stability_ok != Some(true) {
            return Err(Error::SoundnessBug("criteria pass but a stability inequality fails".into()));
        }
        if verdict.claim_ok != Some(true) {
            return Err(Error::SoundnessBug("criteria pass but a ladder inequality fails".into()));
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;
    use crate::variety::build_builtin;

    fn cp3_alpha(c: i64) -> (VarietyModel, CohomClass) {
        (build_builtin("cp3").unwrap(), CohomClass::from_ints(&[c]))
    }

    #[test]
    fn chern_vectors() {
        let (m, a) = cp3_alpha(2);
        assert_eq!(chern_vector(&m, &a, &m.omega).unwrap(), ChernVector::from_ints([1, 2, 4, 8]));
        let z = chern_vector(&m, &CohomClass::zero(1), &m.omega).unwrap();
        assert_eq!(z, ChernVector::from_ints([1, 0, 0, 0]));
        let same = chern_vector(&m, &m.omega, &m.omega).unwrap();
        assert_eq!(same, ChernVector::from_ints([1, 1, 1, 1]));
        let blp = build_builtin("blp_cp2").unwrap();
        assert!(matches!(chern_vector(&blp, &blp.omega, &blp.omega), Err(Error::Dimension(_))));
    }

    #[test]
    fn chern_inequality() {
        assert!(check_chern_inequality(&ChernVector::from_ints([1, 2, 4, 8])));
        assert!(!check_chern_inequality(&ChernVector::from_ints([1, 0, 0, 1])));
        assert!(check_chern_inequality(&ChernVector::from_ints([5, 5, 5, 5])));
    }

    #[test]
    fn cot_theta0_values() {
        assert_eq!(cot_theta0_rational(&ChernVector::from_ints([1, 2, 4, 8])).unwrap(), qr(2, 11));
        assert_eq!(cot_theta0_rational(&ChernVector::from_ints([1, 1, 1, 1])).unwrap(), q(-1));
        assert_eq!(cot_theta0_rational(&ChernVector::from_ints([1, 1, 1, 3])).unwrap(), q(0));
        assert!(cot_theta0_rational(&ChernVector::from_ints([3, 0, 1, 0])).is_err());
    }

    #[test]
    fn condition_ii_cases() {
        let (m, a) = cp3_alpha(2);
        let z = z_polynomial(m.ambient(), &a, &m.omega).unwrap();
        let six_z = z.eval(&q(1)).scale(&q(6));
        assert_eq!(six_z, GaussQ::new(q(-2), q(11)));
        assert!(check_condition_ii(&z).unwrap());
        let z0 = z_polynomial(m.ambient(), &CohomClass::zero(1), &m.omega).unwrap();
        assert_eq!(z0.eval(&q(1)).scale(&q(6)), GaussQ::new(q(0), q(-1)));
        assert!(!check_condition_ii(&z0).unwrap());
        let blp = build_builtin("blp_cp2").unwrap();
        let zs = z_polynomial(blp.ambient(), &blp.class(&[("H", 6), ("E", 1)]), &blp.omega).unwrap();
        assert!(matches!(check_condition_ii(&zs), Err(Error::Dimension(_))));
    }

    #[test]
    fn condition_iii_on_cp3() {
        let (m, a) = cp3_alpha(2);
        let reports: Vec<_> = m
            .family()
            .iter()
            .map(|v| winding_angle(&z_polynomial(v, &a, &m.omega).unwrap()).unwrap())
            .collect();
        let line = &reports[0];
        assert_eq!((line.re_z1.clone(), line.im_z1.clone()), (q(-2), q(1)));
        let plane = &reports[1];
        assert_eq!((plane.re_z1.clone(), plane.im_z1.clone()), (qr(-3, 2), q(2)));
        let phi_x = reports[2].phi;
        assert!(check_condition_iii(&reports[..2], phi_x).unwrap());
        assert!((line.phi - (PI - 0.5f64.atan())).abs() < 1e-12);
        assert!((plane.phi - (PI - (4.0f64 / 3.0).atan())).abs() < 1e-12);
    }

    #[test]
    fn condition_iii_band_is_indeterminate() {
        let (m, a) = cp3_alpha(2);
        let r = winding_angle(&z_polynomial(&m.family()[0], &a, &m.omega).unwrap()).unwrap();
        let phi = r.phi;
        assert!(matches!(check_condition_iii([&r], phi + 1e-13), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn blowup_family_has_positive_imaginary_charges() {
        let m = build_builtin("blp_cp2").unwrap();
        let a = m.class(&[("H", 6), ("E", 1)]);
        let v = full_verdict(&m, &a, &m.omega).unwrap();
        assert!(v.condition_b);
        let z1: Vec<_> = v.subvarieties.iter().map(|s| s.z1.as_str()).collect();
        assert_eq!(z1, ["1 + 1i", "-7 + 1i", "-6 + 2i", "-16 + 13i"]);
        assert_eq!(v.label, VerdictLabel::ConditionBObstructed);
    }

    #[test]
    fn p1_positive_alpha_has_positive_imaginary_part() {
        let m = build_builtin("blp_cp2").unwrap();
        let a = m.class(&[("H", 3), ("E", -1)]);
        for v in m.proper() {
            assert!(v.wedge_mix_integral(&a, &m.omega, 1).unwrap() >= q(0));
            let z = z_polynomial(v, &a, &m.omega).unwrap();
            assert_eq!(z.eval(&q(1)).im, v.wedge_mix_integral(&a, &m.omega, 0).unwrap());
        }
    }

    #[test]
    fn kahlerity_examples() {
        let (m, a) = cp3_alpha(2);
        let (ok, d) = check_kahlerity(&m, &a, &m.omega).unwrap();
        assert!(ok);
        assert!(d.iter().all(|x| x.value.is_positive()));
        let blp = build_builtin("blp_cp2").unwrap();
        let alpha = blp.class(&[("H", 6), ("E", 1)]);
        let (ok, d) = check_kahlerity(&blp, &alpha, &blp.omega).unwrap();
        assert!(!ok);
        let bad: Vec<_> = d.iter().filter(|x| !x.ok).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].subvariety.as_str(), bad[0].k, bad[0].value.clone()), ("E", 1, q(-1)));
        let (ok, d) = check_kahlerity(&m, &m.omega, &m.omega).unwrap();
        assert!(ok && d.iter().all(|x| x.value == q(1)));
    }

    #[test]
    fn stability_examples() {
        let (m, a) = cp3_alpha(2);
        let (ok, d) = check_stability_inequalities(&m, &a, &m.omega, &qr(2, 11)).unwrap();
        assert!(ok);
        assert_eq!(d[0].value, q(2) - qr(2, 11));
        // plane: (α² − ω²) − cot·2α·ω = 3 − 8/11
        assert_eq!(d[1].value, q(3) - qr(8, 11));
        assert_eq!(d[2].value, q(0));

        let blp = build_builtin("blp_cp2").unwrap();
        let alpha = blp.class(&[("H", 6), ("E", 1)]);
        // ambient equality needs cot θ₀ = 32/26; with cot Θ₀ = −13/16 the
        // twisted ambient integral is nonzero
        assert!(matches!(
            check_stability_inequalities(&blp, &alpha, &blp.omega, &qr(-13, 16)),
            Err(Error::InconsistentTheta0(_))
        ));
        let e = blp.subvariety("E").unwrap();
        let v = twisted_integral(e, &alpha, &blp.omega, 1, &alpha, &qr(-13, 16)).unwrap();
        assert_eq!(v, qr(-3, 16));

        let z = CohomClass::zero(1);
        assert!(matches!(
            check_stability_inequalities(&m, &z, &m.omega, &q(5)),
            Err(Error::InconsistentTheta0(_))
        ));
    }

    #[test]
    fn claim_ladder_closed_forms() {
        let (m, a) = cp3_alpha(2);
        let (ok, d) = check_claim_inequalities(&m, &a, &m.omega, &qr(2, 11)).unwrap();
        assert!(ok);
        let amb = |k| d.iter().find(|x| x.subvariety == "X" && x.k == k).unwrap().value.clone();
        assert_eq!(amb(1), qr(80, 11));
        assert_eq!(amb(2), qr(50, 11));
        assert_eq!(amb(3), q(0));
    }

    #[test]
    fn claim_with_alpha_equal_omega() {
        let m = build_builtin("cp3").unwrap();
        let (ok, d) = check_claim_inequalities(&m, &m.omega, &m.omega, &q(-1)).unwrap();
        let amb3 = d.iter().find(|x| x.subvariety == "X" && x.k == 3).unwrap();
        assert_eq!(amb3.value, q(0));
        assert!(amb3.ok, "ambient ladder is non-strict");
        assert!(ok);
    }

    #[test]
    fn verdicts() {
        let (m, a) = cp3_alpha(2);
        let v = full_verdict(&m, &a, &m.omega).unwrap();
        assert_eq!(v.label, VerdictLabel::SolvableHypercritical);
        assert_eq!(v.cot_theta0, Some(qr(2, 11)));
        let t0 = v.theta0.unwrap();
        assert!((t0 - (11.0f64 / 2.0).atan()).abs() < 1e-12);
        assert!(v.family_complete && v.family_relative);

        let neg = full_verdict(&m, &m.omega.neg(), &m.omega).unwrap();
        assert_eq!(neg.label, VerdictLabel::NotSolvable);
        assert_eq!(neg.cond2_ok, Some(false));
        assert_eq!(neg.chern_ok, Some(false));

        let same = full_verdict(&m, &m.omega, &m.omega).unwrap();
        assert_eq!(same.label, VerdictLabel::NotSolvable);
    }

    #[test]
    fn scalar_threshold_on_cp3() {
        let m = build_builtin("cp3").unwrap();
        for (c, want) in [(qr(17, 10), false), (qr(7, 4), true), (qr(9, 5), true), (qr(3, 2), false)] {
            let v = full_verdict(&m, &CohomClass::new(vec![c.clone()]), &m.omega).unwrap();
            assert_eq!(v.label == VerdictLabel::SolvableHypercritical, want, "c = {c}");
        }
    }

    #[test]
    fn scale_equivariance() {
        let (m, a) = cp3_alpha(2);
        let v1 = full_verdict(&m, &a, &m.omega).unwrap();
        let c = qr(7, 3);
        let v2 = full_verdict(&m, &a.scale(&c), &m.omega.scale(&c)).unwrap();
        assert_eq!(v1.label, v2.label);
        assert_eq!(v1.kahlerity_ok, v2.kahlerity_ok);
        assert_eq!(v1.stability_ok, v2.stability_ok);
        assert_eq!(v1.claim_ok, v2.claim_ok);
    }
}
