//! Report assembly, the golden blow-up counterexample, and parameter sweeps.
//!
//! Reports serialize to JSON with declaration-ordered keys. Floats are
//! rounded to 12 significant digits; exact rationals are strings.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::charge::{nonvanishing_certificate, winding_angle, z_polynomial, AngleReport, NonvanishingCertificate};
use crate::criteria::{complex_power_integral, full_verdict, twisted_integral, CriteriaVerdict, VerdictLabel};
use crate::error::{Error, Result};
use crate::family::{check_remark_condition, h_omega_verdict, HOmegaReport, HOmegaStatus, RemarkReport};
use crate::phase::{classify_branch, complex_quotient, lagrangian_phase, Branch, HermitianPair, C64};
use crate::rational::{fmt_q, parse_q, q, qr, GaussQ, Q};
use crate::torus::{
    build_torus_problem, field_csv, newton_solve, verify_solution, HessianMode, Psi0Spec, SolveOptions, SolveReport,
    VerifyReport,
};
use crate::variety::{build_builtin, load_model, CohomClass, VarietyModel};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const FAMILY_WARNING: &str = "verdicts are relative to the model's listed subvariety family";

/// Verdict class of a command, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Positive,
    Negative,
    Borderline,
    /// Golden values reproduced.
    Reproduced,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Positive | Self::Reproduced => 0,
            Self::Negative => 1,
            Self::Borderline => 2,
        }
    }
}

/// 2 for indeterminate comparisons, 3 for everything else.
pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::Indeterminate(_) => 2,
        _ => 3,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedClass {
    pub name: String,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub model: Option<String>,
    pub classes: Vec<NamedClass>,
    pub verdict: Option<String>,
    pub outcome: Outcome,
    pub result: Value,
    pub warnings: Vec<String>,
    pub version: &'static str,
    /// Text-mode lines; not part of the JSON document.
    #[serde(skip)]
    pub summary: Vec<String>,
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific notation round-trips")
}

/// Fixed 12-significant-digit text for CSV cells.
pub fn fmt_f12(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("report bodies serialize");
    round_floats(&mut v);
    v
}

impl Report {
    fn new(command: &str, model: Option<&VarietyModel>, outcome: Outcome, result: Value) -> Self {
        Self {
            command: command.into(),
            model: model.map(|m| m.name.clone()),
            classes: Vec::new(),
            verdict: None,
            outcome,
            result,
            warnings: Vec::new(),
            version: VERSION,
            summary: Vec::new(),
        }
    }

    fn with_class(mut self, name: &str, c: &CohomClass) -> Self {
        self.classes.push(NamedClass {
            name: name.into(),
            coeffs: c.to_strings(),
        });
        self
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        round_floats(&mut v);
        serde_json::to_string_pretty(&v).expect("values serialize")
    }

    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        if let Some(m) = &self.model {
            writeln!(out, "model: {m}").unwrap();
        }
        for c in &self.classes {
            writeln!(out, "{}: [{}]", c.name, c.coeffs.join(", ")).unwrap();
        }
        if let Some(v) = &self.verdict {
            writeln!(out, "verdict: {v}").unwrap();
        }
        for line in &self.summary {
            writeln!(out, "  {line}").unwrap();
        }
        writeln!(out, "outcome: {:?}", self.outcome).unwrap();
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        out
    }
}

fn parse_class(model: &VarietyModel, s: &str) -> Result<CohomClass> {
    let c = CohomClass::parse_list(s)?;
    model.check_class(&c)?;
    Ok(c)
}

fn resolve(model: &str, alpha: &str, omega: Option<&str>) -> Result<(VarietyModel, CohomClass, CohomClass)> {
    let m = load_model(model)?;
    let a = parse_class(&m, alpha)?;
    let w = match omega {
        Some(s) => parse_class(&m, s)?,
        None => m.omega.clone(),
    };
    Ok((m, a, w))
}

fn family_warnings(m: &VarietyModel) -> Vec<String> {
    let mut w = vec![FAMILY_WARNING.to_string()];
    if !m.family_complete() {
        w.push("the listed family is not known to be complete".into());
    }
    w
}

pub fn run_check(model: &str, alpha: &str, omega: Option<&str>) -> Result<Report> {
    let (m, a, w) = resolve(model, alpha, omega)?;
    let m = m.with_omega(&w)?;
    let v: CriteriaVerdict = full_verdict(&m, &a, &w)?;
    let outcome = if v.label.is_positive() { Outcome::Positive } else { Outcome::Negative };
    let mut r = Report::new("check", Some(&m), outcome, to_value(&v)).with_class("alpha", &a).with_class("omega", &w);
    r.verdict = Some(v.label.as_str().into());
    r.summary = check_summary(&v);
    r.warnings = family_warnings(&m);
    if m.dim != 3 {
        r.warnings
            .push(format!("dimension {}: only the charge, Im Z_V and h-omega checks apply", m.dim));
    }
    Ok(r)
}

fn fmt_angle(a: Option<&AngleReport>) -> String {
    match a {
        Some(a) => format!("theta_hat = {:.12}, phi = {:.12}", a.theta_hat, a.phi),
        None => "charge vanishes on [1, inf)".into(),
    }
}

fn opt_text(b: Option<bool>) -> String {
    b.map(|x| x.to_string()).unwrap_or_else(|| "n/a".into())
}

fn check_summary(v: &CriteriaVerdict) -> Vec<String> {
    let mut out: Vec<String> = v
        .subvarieties
        .iter()
        .map(|s| format!("{}: Z(1) = {}, {}", s.subvariety, s.z1, fmt_angle(s.angles.as_ref())))
        .collect();
    if let Some(c) = &v.chern {
        let a: Vec<String> = c.a.iter().map(fmt_q).collect();
        out.push(format!("a = ({})", a.join(", ")));
        out.push(format!("chern inequality: {}", opt_text(v.chern_ok)));
        out.push(format!("condition (ii): {}", opt_text(v.cond2_ok)));
        out.push(format!("condition (iii): {}", opt_text(v.cond3_ok)));
    }
    out.push(format!("Im Z_V > 0 on the family: {}", v.condition_b));
    if let Some(t) = v.theta0 {
        out.push(format!("theta_0 = {t:.12}"));
    }
    if let Some(h) = &v.h_omega {
        out.extend(h_omega_summary(h));
    }
    out
}

fn h_omega_summary(h: &HOmegaReport) -> Vec<String> {
    let mut out = vec![format!(
        "h-omega: {:?} (cot Theta_0 = {})",
        h.status,
        h.cot_big_theta.as_deref().unwrap_or("n/a")
    )];
    for c in &h.certificates {
        out.push(format!(
            "{}: P(0) = {}, roots on (0, inf) = {}, positive = {}",
            c.subvariety,
            fmt_q(&c.certificate.value_at_zero),
            c.certificate.sturm_roots_on_open_half_line,
            c.certificate.positive
        ));
    }
    if let Some(w) = &h.witness {
        out.push(format!("witness: {} at t = {} with value {}", w.subvariety, w.t, fmt_q(&w.value)));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ChargeEntry {
    pub subvariety: String,
    pub dim: usize,
    pub polynomial_re: String,
    pub polynomial_im: String,
    pub z1: String,
    pub certificate: NonvanishingCertificate,
    pub angles: Option<AngleReport>,
}

pub fn run_charge(model: &str, alpha: &str, omega: Option<&str>, subvariety: Option<&str>) -> Result<Report> {
    let (m, a, w) = resolve(model, alpha, omega)?;
    let m = m.with_omega(&w)?;
    let targets: Vec<_> = match subvariety {
        Some(name) => vec![m
            .subvariety(name)
            .ok_or_else(|| Error::Parse(format!("model {} has no subvariety {name:?}", m.name)))?],
        None => m.family().iter().collect(),
    };
    let mut entries = Vec::new();
    for v in targets {
        let z = z_polynomial(v, &a, &w)?;
        let cert = nonvanishing_certificate(&z)?;
        let angles = if cert.common_root_free { Some(winding_angle(&z)?) } else { None };
        entries.push(ChargeEntry {
            subvariety: v.name.clone(),
            dim: v.dim,
            polynomial_re: z.re.to_string(),
            polynomial_im: z.im.to_string(),
            z1: z.eval(&q(1)).to_string_exact(),
            certificate: cert,
            angles,
        });
    }
    let all = entries.iter().all(|e| e.certificate.common_root_free);
    let outcome = if all { Outcome::Positive } else { Outcome::Negative };
    let mut r = Report::new("charge", Some(&m), outcome, to_value(&entries)).with_class("alpha", &a).with_class("omega", &w);
    r.summary = entries
        .iter()
        .map(|e| {
            format!(
                "{}: Re Z = {}, Im Z = {}, Z(1) = {}, {}",
                e.subvariety,
                e.polynomial_re,
                e.polynomial_im,
                e.z1,
                fmt_angle(e.angles.as_ref())
            )
        })
        .collect();
    if !all {
        r.warnings.push("some charges vanish on [1, inf); their angles are undefined".into());
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct HOmegaBody {
    pub h_omega: HOmegaReport,
    pub remark: Option<RemarkReport>,
}

pub fn run_h_omega(
    model: &str,
    alpha: &str,
    omega: Option<&str>,
    cot_theta: Option<&str>,
    chi: Option<&str>,
    projective_weakening: bool,
) -> Result<Report> {
    let (m, a, w) = resolve(model, alpha, omega)?;
    let m = m.with_omega(&w)?;
    let cot = cot_theta.map(parse_q).transpose()?;
    let h = h_omega_verdict(&m, &a, &w, cot)?;
    let mut warnings = family_warnings(&m);
    let remark = match chi {
        Some(s) => {
            let chi = parse_class(&m, s)?;
            match h.cot_big_theta.as_deref().map(parse_q).transpose()? {
                Some(c) => Some(check_remark_condition(&m, &a, &w, &chi, &c, projective_weakening)?),
                None => {
                    warnings.push("no rational cot Theta_0 available; remark condition skipped".into());
                    None
                }
            }
        }
        None => None,
    };
    if remark.as_ref().is_some_and(|r| r.hypothesis_conditional) {
        warnings.push("weakened remark check assumes the model is projective".into());
    }
    let outcome = match h.status {
        HOmegaStatus::Nonempty => Outcome::Positive,
        _ => Outcome::Negative,
    };
    let label = match h.status {
        HOmegaStatus::Nonempty => "ℋ_ω-nonempty",
        HOmegaStatus::Obstructed => "ℋ_ω-obstructed",
        HOmegaStatus::OutOfHypercriticalScope => "out-of-hypercritical-scope",
    };
    let summary = h_omega_summary(&h);
    let mut r = Report::new("h-omega", Some(&m), outcome, to_value(&HOmegaBody { h_omega: h, remark }))
        .with_class("alpha", &a)
        .with_class("omega", &w);
    r.summary = summary;
    r.verdict = Some(label.into());
    r.warnings = warnings;
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleBody {
    pub total_integral: String,
    pub z_x: String,
    pub tan_theta0: String,
    pub exceptional_value: String,
    pub charges: Vec<(String, String)>,
    pub im_positive_on_family: bool,
    pub label: String,
    pub h_omega: HOmegaReport,
}

fn golden<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<()> {
    if got != want {
        return Err(Error::InternalConsistency(format!("golden {what}: got {got:?}, expected {want:?}")));
    }
    Ok(())
}

/// The blow-up of CP² at a point with `ω = 2H − E`, `α = 6H + E`: condition
/// (B) holds on every listed subvariety, yet the exceptional curve obstructs
/// ℋ_ω. Every value is checked exactly.
pub fn run_counterexample() -> Result<Report> {
    let m = build_builtin("blp_cp2")?;
    let a = m.class(&[("H", 6), ("E", 1)]);
    let w = m.omega.clone();
    golden("omega", w.clone(), m.class(&[("H", 2), ("E", -1)]))?;

    let total = complex_power_integral(m.ambient(), &a, &w, 2, &a)?;
    golden("integral of (alpha + i omega)^2", total.clone(), GaussQ::new(q(32), q(26)))?;
    let zx = z_polynomial(m.ambient(), &a, &w)?.eval(&q(1));
    golden("Z_X", zx.clone(), GaussQ::new(q(-16), q(13)))?;
    let tan = &total.im / &total.re;
    golden("tan theta_0", tan.clone(), qr(13, 16))?;
    let e = m.subvariety("E").ok_or_else(|| Error::InternalConsistency("E missing".into()))?;
    let ev = e.restrict_intersect(&[&a.add(&w.scale(&tan))])?;
    golden("integral over E", ev.clone(), qr(-3, 16))?;
    // the same number is the twisted E integral with cot Theta_0 = −tan theta_0
    golden("twisted E value", twisted_integral(e, &a, &w, 1, &a, &-tan.clone())?, qr(-3, 16))?;

    let mut charges = Vec::new();
    let mut im_positive = true;
    for v in m.family() {
        let z = z_polynomial(v, &a, &w)?.eval(&q(1));
        im_positive &= z.im.is_positive();
        charges.push((v.name.clone(), z.to_string_exact()));
    }
    golden("Im Z_V > 0 on the family", im_positive, true)?;

    let verdict = full_verdict(&m, &a, &w)?;
    golden("label", verdict.label, VerdictLabel::ConditionBObstructed)?;
    let h = verdict.h_omega.clone().ok_or_else(|| Error::InternalConsistency("h-omega report missing".into()))?;
    let wit = h.witness.clone().ok_or_else(|| Error::InternalConsistency("no obstruction witness".into()))?;
    golden("witness", (wit.subvariety.as_str(), wit.value.clone()), ("E", qr(-3, 16)))?;

    let body = CounterexampleBody {
        total_integral: total.to_string_exact(),
        z_x: zx.to_string_exact(),
        tan_theta0: fmt_q(&tan),
        exceptional_value: fmt_q(&ev),
        charges,
        im_positive_on_family: im_positive,
        label: verdict.label.as_str().into(),
        h_omega: h,
    };
    let summary = vec![
        format!("integral of (alpha + i omega)^2 = {}", body.total_integral),
        format!("Z_X = {}", body.z_x),
        format!("tan theta_0 = {}", body.tan_theta0),
        format!("integral over E of alpha + tan(theta_0) omega = {}", body.exceptional_value),
        format!("Im Z_V > 0 on the family: {}", body.im_positive_on_family),
    ];
    let mut r = Report::new("counterexample", Some(&m), Outcome::Reproduced, to_value(&body))
        .with_class("alpha", &a)
        .with_class("omega", &w);
    r.verdict = Some(verdict.label.as_str().into());
    r.summary = summary;
    r.warnings = family_warnings(&m);
    Ok(r)
}

/// One coefficient axis `start:end:step` (or a single value).
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub values: Vec<Q>,
}

/// Parses a comma-separated list of axes, one per basis coefficient.
pub fn parse_grid(spec: &str) -> Result<Vec<Axis>> {
    spec.split(',').map(|a| parse_axis(a.trim())).collect()
}

fn parse_axis(s: &str) -> Result<Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis { values: vec![parse_q(v)?] }),
        [a, b, st] => {
            let (start, end, step) = (parse_q(a)?, parse_q(b)?, parse_q(st)?);
            if !step.is_positive() {
                return Err(Error::Parse(format!("grid step in {s:?} must be positive")));
            }
            let mut values = Vec::new();
            let mut x = start;
            while x <= end {
                values.push(x.clone());
                x += &step;
                if values.len() > 1_000_000 {
                    return Err(Error::Parse(format!("grid axis {s:?} has too many points")));
                }
            }
            Ok(Axis { values })
        }
        _ => Err(Error::Parse(format!("grid axis {s:?}: expected start:end:step or a single value"))),
    }
}

fn grid_points(axes: &[Axis]) -> Vec<Vec<Q>> {
    let mut pts = vec![Vec::new()];
    for ax in axes {
        let mut next = Vec::with_capacity(pts.len() * ax.values.len());
        for p in &pts {
            for v in &ax.values {
                let mut q = p.clone();
                q.push(v.clone());
                next.push(q);
            }
        }
        pts = next;
    }
    if axes.iter().any(|a| a.values.is_empty()) {
        return Vec::new();
    }
    pts
}

fn opt_bool(b: Option<bool>) -> String {
    b.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f(x: Option<f64>) -> String {
    x.map(fmt_f12).unwrap_or_default()
}

fn sweep_row(m: &VarietyModel, w: &CohomClass, coeffs: &[Q]) -> Vec<String> {
    let a = CohomClass::new(coeffs.to_vec());
    let mut row: Vec<String> = coeffs.iter().map(fmt_q).collect();
    match full_verdict(m, &a, w) {
        Ok(v) => {
            let chern: Vec<String> = match &v.chern {
                Some(c) => c.a.iter().map(fmt_q).collect(),
                None => vec![String::new(); 4],
            };
            row.extend(chern);
            row.push(opt_bool(v.chern_ok));
            row.push(opt_bool(v.cond2_ok));
            row.push(opt_bool(v.cond3_ok));
            row.push(v.condition_b.to_string());
            row.push(opt_f(v.phi_x));
            row.push(opt_f(v.theta0));
            row.push(opt_bool(v.stability_ok));
            row.push(opt_bool(v.claim_ok));
            let h = match h_omega_verdict(m, &a, w, None) {
                Ok(h) => match h.status {
                    HOmegaStatus::Nonempty => "nonempty".to_string(),
                    HOmegaStatus::Obstructed => "obstructed".to_string(),
                    HOmegaStatus::OutOfHypercriticalScope => "out-of-scope".to_string(),
                },
                Err(e) => format!("error: {e}"),
            };
            row.push(h);
            row.push(v.label.as_str().to_string());
            row.push("ok".into());
        }
        Err(e) => {
            row.extend(std::iter::repeat_n(String::new(), 14));
            row.push(match e {
                Error::Indeterminate(_) => format!("borderline: {e}"),
                _ => format!("error: {e}"),
            });
        }
    }
    row
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Evaluates every grid point in parallel; rows keep grid order and carry a
/// per-row status instead of aborting.
pub fn run_sweep(model: &str, grid: &str, omega: Option<&str>) -> Result<String> {
    let m = load_model(model)?;
    let w = match omega {
        Some(s) => parse_class(&m, s)?,
        None => m.omega.clone(),
    };
    let m = m.with_omega(&w)?;
    let axes = if grid.trim().is_empty() { Vec::new() } else { parse_grid(grid)? };
    if !axes.is_empty() && axes.len() != m.basis.len() {
        return Err(Error::ClassLength {
            expected: m.basis.len(),
            got: axes.len(),
        });
    }
    let points = if axes.is_empty() { Vec::new() } else { grid_points(&axes) };
    let rows: Vec<Vec<String>> = points.par_iter().map(|p| sweep_row(&m, &w, p)).collect();

    let mut header: Vec<String> = m.basis.clone();
    header.extend(
        [
            "a0", "a1", "a2", "a3", "chern_ok", "cond2_ok", "cond3_ok", "condition_b", "phi_x", "theta0", "stability_ok",
            "claim_ok", "h_omega", "label", "status",
        ]
        .map(String::from),
    );
    let mut out = String::new();
    for line in std::iter::once(&header).chain(rows.iter()) {
        let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveBody {
    pub a1: f64,
    pub a2: f64,
    pub n: usize,
    pub psi0: Psi0Spec,
    pub psi0_hessian: HessianMode,
    pub options: SolveOptions,
    pub solve: SolveReport,
    pub verify: Option<VerifyReport>,
    /// `‖φ − (−ψ₀)‖∞` after mean removal.
    pub manufactured_error: f64,
}

pub struct SolveOutput {
    pub report: Report,
    /// `i,j,x,y,phi,phase` rows when the final iterate is admissible.
    pub field_csv: Option<String>,
}

pub fn run_solve(a1: f64, a2: f64, psi0: Psi0Spec, n: usize, mode: HessianMode, opts: SolveOptions) -> Result<SolveOutput> {
    let prob = build_torus_problem(a1, a2, psi0, n, mode)?;
    let s = newton_solve(&prob, None, &opts)?;
    let verify = verify_solution(&prob, &s.phi, opts.tol).ok();
    let manufactured_error = crate::torus::gauge_distance(&s.phi, &prob.manufactured_solution());
    let csv = field_csv(&prob, &s.phi).ok();
    let outcome = if s.converged { Outcome::Positive } else { Outcome::Negative };
    let mut warnings = Vec::new();
    if let Some(f) = &s.failure {
        warnings.push(f.clone());
    }
    let body = SolveBody {
        a1,
        a2,
        n,
        psi0,
        psi0_hessian: mode,
        options: opts,
        solve: s.clone(),
        verify,
        manufactured_error,
    };
    let mut r = Report::new("solve", None, outcome, to_value(&body));
    r.verdict = Some(if s.converged { "converged" } else { "not-converged" }.into());
    r.summary = vec![
        format!("iterations = {}, damped steps = {}", s.iterations, s.damping_steps),
        format!("residual max = {:e}", s.residual_max),
        format!("phase constant = {:.12}, theta_0 = {:.12}", s.phase_constant, s.theta0),
        format!("phase range = [{:.12}, {:.12}]", s.phase_min, s.phase_max),
        format!("distance to -psi0 = {manufactured_error:e}"),
    ];
    r.warnings = warnings;
    Ok(SolveOutput { report: r, field_csv: csv })
}

fn parse_entry(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| Error::Parse("complex entry must be [re, im]".into()))?;
            let im = a[1].as_f64().ok_or_else(|| Error::Parse("complex entry must be [re, im]".into()))?;
            Ok(C64::new(re, im))
        }
        _ => Err(Error::Parse(format!("matrix entry {v} must be a number or [re, im]"))),
    }
}

fn parse_matrix(v: &Value, what: &str) -> Result<DMatrix<C64>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array of rows")))?;
    let n = rows.len();
    let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::Parse(format!("{what} row {i} must be an array")))?;
        if row.len() != n {
            return Err(Error::Dimension(format!("{what} row {i} has {} entries, expected {n}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = parse_entry(e)?;
        }
    }
    Ok(m)
}

/// Parses `{"alpha": [[..]], "omega": [[..]]}`; entries are numbers or
/// `[re, im]` pairs.
pub fn parse_pair_json(text: &str) -> Result<HermitianPair> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("pair document: {e}")))?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("pair document must be an object".into()))?;
    for k in obj.keys() {
        if k != "alpha" && k != "omega" {
            return Err(Error::Parse(format!("unknown key {k:?} in pair document")));
        }
    }
    let a = obj.get("alpha").ok_or_else(|| Error::Parse("missing \"alpha\"".into()))?;
    let w = obj.get("omega").ok_or_else(|| Error::Parse("missing \"omega\"".into()))?;
    HermitianPair::new(parse_matrix(a, "alpha")?, parse_matrix(w, "omega")?)
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseBody {
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub q: f64,
    pub modulus: f64,
    pub quotient: [f64; 2],
    pub branch: Branch,
}

pub fn run_phase(text: &str) -> Result<Report> {
    let pair = parse_pair_json(text)?;
    let pt = lagrangian_phase(&pair)?;
    let z = complex_quotient(&pair)?;
    let branch = classify_branch(pt.q, pair.n())?;
    let summary = vec![
        format!("lambdas = {:?}", pt.lambdas),
        format!("Q = {:.12}, modulus = {:.12}", pt.q, pt.modulus),
        format!("det(alpha + i omega)/det(omega) = {:.12} + {:.12}i", z.re, z.im),
    ];
    let body = PhaseBody {
        n: pair.n(),
        lambdas: pt.lambdas,
        q: pt.q,
        modulus: pt.modulus,
        quotient: [z.re, z.im],
        branch,
    };
    let mut r = Report::new("phase", None, Outcome::Positive, to_value(&body));
    r.verdict = Some(branch.as_str().into());
    r.summary = summary;
    Ok(r)
}

/// Round-trip check for every exact rational string in a report.
pub fn rationals_round_trip(v: &Value) -> bool {
    match v {
        Value::String(s) => match parse_q(s) {
            Ok(x) => fmt_q(&x) == *s,
            Err(_) => true,
        },
        Value::Array(a) => a.iter().all(rationals_round_trip),
        Value::Object(m) => m.values().all(rationals_round_trip),
        _ => true,
    }
}
