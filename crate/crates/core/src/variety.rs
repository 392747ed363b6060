//! Exact intersection rings of model varieties.
//!
//! A [`VarietyModel`] carries an n-dimensional ambient space described by a
//! symmetric n-linear intersection form on a divisor basis, a designated
//! Kähler class ω, and a finite family of subvariety models. Each
//! subvariety records the restricted p-linear functional `D₁⋯D_p ↦ ∫_V D₁⋯D_p`.
//! The ambient space is itself a member of the family (with p = n), always
//! listed last and named `X`.
//!
//! Verdicts computed over a model are relative to the listed family. For the
//! projective spaces every p-dimensional irreducible subvariety has class
//! `d·H^{n-p}` and all checked quantities are homogeneous of degree one in d,
//! so the builtin `cp*` families are complete; [`VarietyModel::family_complete`]
//! reports this.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, Q};

pub const AMBIENT_NAME: &str = "X";

/// A class in H^{1,1}, as exact coefficients over the model's divisor basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomClass {
    coeffs: Vec<Q>,
}

impl CohomClass {
    pub fn new(coeffs: Vec<Q>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(len: usize) -> Self {
        Self::new(vec![Q::zero(); len])
    }

    /// Parses a comma-separated coefficient list such as `6,1` or `3/2,-1`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|c| parse_q(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &CohomClass) -> CohomClass {
        CohomClass::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CohomClass) -> CohomClass {
        CohomClass::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Q) -> CohomClass {
        CohomClass::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn neg(&self) -> CohomClass {
        self.scale(&q(-1))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_q).collect()
    }
}

impl Serialize for CohomClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl fmt::Display for CohomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_strings().join(","))
    }
}

/// Symmetric multilinear form on a finite basis, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTensor {
    rank: usize,
    basis_len: usize,
    dense: Vec<Q>,
}

impl SymTensor {
    /// Builds the form from values on sorted index tuples. Missing tuples
    /// are zero.
    pub fn from_sorted(rank: usize, basis_len: usize, entries: &BTreeMap<Vec<usize>, Q>) -> Self {
        let size = basis_len.pow(rank as u32);
        let mut dense = vec![Q::zero(); size];
        for (flat, slot) in dense.iter_mut().enumerate() {
            let mut idx = unflatten(flat, rank, basis_len);
            idx.sort_unstable();
            if let Some(v) = entries.get(&idx) {
                *slot = v.clone();
            }
        }
        Self {
            rank,
            basis_len,
            dense,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, idx: &[usize]) -> Q {
        self.dense[flatten(idx, self.basis_len)].clone()
    }

    /// Nonzero values on the upper simplex (sorted index tuples).
    pub fn sorted_entries(&self) -> BTreeMap<Vec<usize>, Q> {
        let mut out = BTreeMap::new();
        for (flat, v) in self.dense.iter().enumerate() {
            let idx = unflatten(flat, self.rank, self.basis_len);
            if idx.windows(2).all(|w| w[0] <= w[1]) && !v.is_zero() {
                out.insert(idx, v.clone());
            }
        }
        out
    }

    /// Multilinear evaluation on `rank` classes.
    pub fn eval(&self, classes: &[&CohomClass]) -> Q {
        debug_assert_eq!(classes.len(), self.rank);
        let mut acc = Q::zero();
        let mut stack = vec![(0usize, 0usize, q(1))];
        // depth-first over index tuples, skipping zero coefficients
        while let Some((depth, flat, weight)) = stack.pop() {
            if depth == self.rank {
                let v = &self.dense[flat];
                if !v.is_zero() {
                    acc += weight * v;
                }
                continue;
            }
            for (i, c) in classes[depth].coeffs.iter().enumerate() {
                if !c.is_zero() {
                    stack.push((depth + 1, flat * self.basis_len + i, &weight * c));
                }
            }
        }
        acc
    }
}

fn flatten(idx: &[usize], base: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * base + i)
}

fn unflatten(mut flat: usize, rank: usize, base: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for slot in idx.iter_mut().rev() {
        *slot = flat % base;
        flat /= base;
    }
    idx
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubvarietyModel {
    pub name: String,
    pub dim: usize,
    pub functional: SymTensor,
}

impl SubvarietyModel {
    pub fn is_ambient(&self) -> bool {
        self.name == AMBIENT_NAME
    }

    /// `∫_V D₁ ∧ ⋯ ∧ D_p`.
    pub fn restrict_intersect(&self, classes: &[&CohomClass]) -> Result<Q> {
        if classes.len() != self.dim {
            return Err(Error::Arity {
                expected: self.dim,
                got: classes.len(),
            });
        }
        for c in classes {
            if c.len() != self.functional.basis_len {
                return Err(Error::ClassLength {
                    expected: self.functional.basis_len,
                    got: c.len(),
                });
            }
        }
        Ok(self.functional.eval(classes))
    }

    /// `∫_V α^k ∧ ω^{p-k}`.
    pub fn wedge_mix_integral(&self, alpha: &CohomClass, omega: &CohomClass, k: usize) -> Result<Q> {
        if k > self.dim {
            return Err(Error::OutOfRange(format!(
                "power k = {k} exceeds dim {} of {}",
                self.dim, self.name
            )));
        }
        let mut args = vec![alpha; k];
        args.extend(std::iter::repeat_n(omega, self.dim - k));
        self.restrict_intersect(&args)
    }

    /// `∫_V α^j ∧ ω^{k} ∧ χ^{p-j-k}`.
    pub fn triple_mix(
        &self,
        alpha: &CohomClass,
        j: usize,
        omega: &CohomClass,
        k: usize,
        chi: &CohomClass,
    ) -> Result<Q> {
        if j + k > self.dim {
            return Err(Error::OutOfRange(format!(
                "powers {j} + {k} exceed dim {} of {}",
                self.dim, self.name
            )));
        }
        let mut args = vec![alpha; j];
        args.extend(std::iter::repeat_n(omega, k));
        args.extend(std::iter::repeat_n(chi, self.dim - j - k));
        self.restrict_intersect(&args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyModel {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub omega: CohomClass,
    /// Proper subvarieties followed by the ambient space.
    family: Vec<SubvarietyModel>,
    builtin_complete: bool,
}

impl VarietyModel {
    /// Assembles and validates a model. `proper` must not contain the
    /// ambient space; it is appended from `tensor`.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        tensor: SymTensor,
        omega: CohomClass,
        proper: Vec<SubvarietyModel>,
    ) -> Result<Self> {
        let dim = tensor.rank();
        if dim == 0 {
            return Err(Error::Parse("dim must be at least 1".into()));
        }
        if basis.is_empty() {
            return Err(Error::Parse("basis must be non-empty".into()));
        }
        if omega.len() != basis.len() {
            return Err(Error::ClassLength {
                expected: basis.len(),
                got: omega.len(),
            });
        }
        let mut family = proper;
        for v in &family {
            if v.dim == 0 || v.dim >= dim {
                return Err(Error::Parse(format!(
                    "subvariety {} has dim {}; proper subvarieties need 1 <= p < {dim}",
                    v.name, v.dim
                )));
            }
            if v.name == AMBIENT_NAME {
                return Err(Error::Parse(format!(
                    "the name {AMBIENT_NAME:?} is reserved for the ambient space"
                )));
            }
        }
        family.push(SubvarietyModel {
            name: AMBIENT_NAME.into(),
            dim,
            functional: tensor,
        });
        let model = Self {
            name: name.into(),
            dim,
            basis,
            omega,
            family,
            builtin_complete: false,
        };
        for v in model.family() {
            let vol = v.wedge_mix_integral(&model.omega, &model.omega, 0)?;
            if !vol.is_positive() {
                return Err(Error::Parse(format!(
                    "omega volume on {} is {}, must be > 0",
                    v.name,
                    fmt_q(&vol)
                )));
            }
        }
        Ok(model)
    }

    /// The same model with another reference Kähler class.
    pub fn with_omega(&self, omega: &CohomClass) -> Result<Self> {
        if &self.omega == omega {
            return Ok(self.clone());
        }
        let mut m = Self::new(&self.name, self.basis.clone(), self.tensor().clone(), omega.clone(), self.proper().to_vec())?;
        m.builtin_complete = self.builtin_complete;
        Ok(m)
    }

    pub fn family(&self) -> &[SubvarietyModel] {
        &self.family
    }

    pub fn proper(&self) -> &[SubvarietyModel] {
        &self.family[..self.family.len() - 1]
    }

    pub fn ambient(&self) -> &SubvarietyModel {
        self.family.last().expect("family always holds the ambient space")
    }

    pub fn subvariety(&self, name: &str) -> Option<&SubvarietyModel> {
        self.family.iter().find(|v| v.name == name)
    }

    pub fn tensor(&self) -> &SymTensor {
        &self.ambient().functional
    }

    /// True when the family provably covers every irreducible subvariety.
    pub fn family_complete(&self) -> bool {
        self.builtin_complete
    }

    pub fn check_class(&self, c: &CohomClass) -> Result<()> {
        if c.len() != self.basis.len() {
            return Err(Error::ClassLength {
                expected: self.basis.len(),
                got: c.len(),
            });
        }
        Ok(())
    }

    /// Class from basis-named coefficients, e.g. `[("H", 6), ("E", 1)]`.
    pub fn class(&self, terms: &[(&str, i64)]) -> CohomClass {
        let mut c = CohomClass::zero(self.basis.len());
        for (name, v) in terms {
            let i = self
                .basis
                .iter()
                .position(|b| b == name)
                .unwrap_or_else(|| panic!("{name} is not in the basis"));
            c.coeffs[i] += q(*v);
        }
        c
    }
}

fn tensor_from_ints(rank: usize, basis_len: usize, entries: &[(&[usize], i64)]) -> SymTensor {
    let map = entries
        .iter()
        .map(|(idx, v)| {
            let mut k = idx.to_vec();
            k.sort_unstable();
            (k, q(*v))
        })
        .collect();
    SymTensor::from_sorted(rank, basis_len, &map)
}

fn sub(name: &str, dim: usize, basis_len: usize, entries: &[(&[usize], i64)]) -> SubvarietyModel {
    SubvarietyModel {
        name: name.into(),
        dim,
        functional: tensor_from_ints(dim, basis_len, entries),
    }
}

/// Builtin models: `cp1`, `cp2`, `cp3`, `blp_cp2`, `p1xp1`.
pub fn build_builtin(name: &str) -> Result<VarietyModel> {
    let basis = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let (model, complete) = match name {
        "cp1" => (
            VarietyModel::new(
                name,
                basis(&["H"]),
                tensor_from_ints(1, 1, &[(&[0], 1)]),
                CohomClass::from_ints(&[1]),
                vec![],
            )?,
            true,
        ),
        "cp2" => (
            VarietyModel::new(
                name,
                basis(&["H"]),
                tensor_from_ints(2, 1, &[(&[0, 0], 1)]),
                CohomClass::from_ints(&[1]),
                vec![sub("line", 1, 1, &[(&[0], 1)])],
            )?,
            true,
        ),
        "cp3" => (
            VarietyModel::new(
                name,
                basis(&["H"]),
                tensor_from_ints(3, 1, &[(&[0, 0, 0], 1)]),
                CohomClass::from_ints(&[1]),
                vec![
                    sub("line", 1, 1, &[(&[0], 1)]),
                    sub("plane", 2, 1, &[(&[0, 0], 1)]),
                ],
            )?,
            true,
        ),
        // H^2 = 1, E^2 = -1, H.E = 0
        "blp_cp2" => (
            VarietyModel::new(
                name,
                basis(&["H", "E"]),
                tensor_from_ints(2, 2, &[(&[0, 0], 1), (&[1, 1], -1)]),
                CohomClass::from_ints(&[2, -1]),
                vec![
                    sub("E", 1, 2, &[(&[1], -1)]),
                    sub("H-E", 1, 2, &[(&[0], 1), (&[1], 1)]),
                    sub("H", 1, 2, &[(&[0], 1)]),
                ],
            )?,
            false,
        ),
        "p1xp1" => (
            VarietyModel::new(
                name,
                basis(&["A", "B"]),
                tensor_from_ints(2, 2, &[(&[0, 1], 1)]),
                CohomClass::from_ints(&[1, 1]),
                vec![
                    sub("A", 1, 2, &[(&[1], 1)]),
                    sub("B", 1, 2, &[(&[0], 1)]),
                ],
            )?,
            false,
        ),
        other => return Err(Error::UnknownModel(other.into())),
    };
    Ok(VarietyModel {
        builtin_complete: complete,
        ..model
    })
}

pub const BUILTIN_NAMES: [&str; 5] = ["cp1", "cp2", "cp3", "blp_cp2", "p1xp1"];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    dim: usize,
    basis: Vec<String>,
    tensor: BTreeMap<String, String>,
    omega: BTreeMap<String, String>,
    #[serde(default)]
    subvarieties: Vec<SubvarietyFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubvarietyFile {
    name: String,
    dim: usize,
    functional: BTreeMap<String, String>,
}

fn parse_entries(
    what: &str,
    rank: usize,
    basis: &[String],
    raw: &BTreeMap<String, String>,
) -> Result<SymTensor> {
    let mut entries: BTreeMap<Vec<usize>, (String, Q)> = BTreeMap::new();
    for (key, val) in raw {
        let mut idx = key
            .split('.')
            .map(|part| {
                basis.iter().position(|b| b == part.trim()).ok_or_else(|| {
                    Error::Parse(format!("{what}: key {key:?} names {part:?}, which is not in the basis"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if idx.len() != rank {
            return Err(Error::Parse(format!(
                "{what}: key {key:?} has {} factors, expected {rank}",
                idx.len()
            )));
        }
        idx.sort_unstable();
        let v = parse_q(val).map_err(|e| Error::Parse(format!("{what}: key {key:?}: {e}")))?;
        if let Some((prev_key, prev)) = entries.get(&idx) {
            if *prev != v {
                return Err(Error::Parse(format!(
                    "{what}: conflicting entries {prev_key:?} = {} and {key:?} = {}",
                    fmt_q(prev),
                    fmt_q(&v)
                )));
            }
            continue;
        }
        entries.insert(idx, (key.clone(), v));
    }
    let map = entries.into_iter().map(|(k, (_, v))| (k, v)).collect();
    Ok(SymTensor::from_sorted(rank, basis.len(), &map))
}

/// Parses a model document (TOML). See `docs/model-format.md`.
pub fn parse_model(text: &str) -> Result<VarietyModel> {
    let file: ModelFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut seen = std::collections::BTreeSet::new();
    for b in &file.basis {
        if b.is_empty() || b.contains('.') || !seen.insert(b.as_str()) {
            return Err(Error::Parse(format!("invalid or duplicate basis name {b:?}")));
        }
    }
    if file.dim == 0 {
        return Err(Error::Parse("dim must be at least 1".into()));
    }
    let tensor = parse_entries("tensor", file.dim, &file.basis, &file.tensor)?;
    let mut omega = CohomClass::zero(file.basis.len());
    for (k, v) in &file.omega {
        let i = file
            .basis
            .iter()
            .position(|b| b == k)
            .ok_or_else(|| Error::Parse(format!("omega: {k:?} is not in the basis")))?;
        omega.coeffs[i] = parse_q(v)?;
    }
    let proper = file
        .subvarieties
        .iter()
        .map(|s| {
            if s.dim == 0 || s.dim >= file.dim {
                return Err(Error::Parse(format!(
                    "subvariety {}: dim {} outside 1..{}",
                    s.name, s.dim, file.dim
                )));
            }
            Ok(SubvarietyModel {
                name: s.name.clone(),
                dim: s.dim,
                functional: parse_entries(&format!("subvariety {}", s.name), s.dim, &file.basis, &s.functional)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    VarietyModel::new(file.name, file.basis, tensor, omega, proper)
}

fn entries_to_strings(basis: &[String], t: &SymTensor) -> BTreeMap<String, String> {
    t.sorted_entries()
        .into_iter()
        .map(|(idx, v)| {
            let key = idx.iter().map(|&i| basis[i].as_str()).collect::<Vec<_>>().join(".");
            (key, fmt_q(&v))
        })
        .collect()
}

/// Serializes a model to the document format read by [`parse_model`].
pub fn serialize_model(m: &VarietyModel) -> String {
    let file = ModelFile {
        name: m.name.clone(),
        dim: m.dim,
        basis: m.basis.clone(),
        tensor: entries_to_strings(&m.basis, m.tensor()),
        omega: m
            .basis
            .iter()
            .zip(m.omega.coeffs())
            .map(|(b, c)| (b.clone(), fmt_q(c)))
            .collect(),
        subvarieties: m
            .proper()
            .iter()
            .map(|v| SubvarietyFile {
                name: v.name.clone(),
                dim: v.dim,
                functional: entries_to_strings(&m.basis, &v.functional),
            })
            .collect(),
    };
    toml::to_string(&file).expect("model documents always serialize")
}

/// Resolves `name` as a builtin, falling back to reading it as a file path.
pub fn load_model(spec: &str) -> Result<VarietyModel> {
    match build_builtin(spec) {
        Ok(m) => Ok(m),
        Err(Error::UnknownModel(_)) => {
            let text = std::fs::read_to_string(spec).map_err(|e| {
                Error::Parse(format!("{spec:?} is neither a builtin model nor a readable file: {e}"))
            })?;
            parse_model(&text)
        }
        Err(e) => Err(e),
    }
}
