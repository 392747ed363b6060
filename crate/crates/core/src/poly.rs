//! Dense univariate polynomials over the rationals, with the exact real-root
//! machinery (square-free decomposition, Sturm sequences, isolation) that the
//! angle and positivity certificates are built on.
//!
//! Coefficients are stored in ascending degree order. The representation is
//! canonical: no trailing zero coefficients, so the zero polynomial is empty.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, sign, to_f64, Q};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

/// Evaluation point for sign queries, extended by the two infinities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Q),
    PosInf,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `c · t^deg`.
    pub fn monomial(c: Q, deg: usize) -> Self {
        let mut coeffs = vec![Q::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &Q) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn eval(&self, t: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + to_f64(c);
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.lead();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let l = self.lead();
        self.scale(&(Q::one() / l))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's algorithm: pairwise coprime square-free monic factors `f_m`,
    /// returned with their multiplicity `m`, such that `self = c · Π f_m^m`.
    /// Constant factors are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut m = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), m));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            m += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    /// Sign of the polynomial just to the right of `a`.
    pub fn sign_right_of(&self, a: &Q) -> i8 {
        let mut p = self.clone();
        while !p.is_zero() {
            let s = sign(&p.eval(a));
            if s != 0 {
                return s;
            }
            p = p.derivative();
        }
        0
    }

    /// Sign of the polynomial just to the left of `b`.
    pub fn sign_left_of(&self, b: &Q) -> i8 {
        let mut p = self.clone();
        let mut flip = 1;
        while !p.is_zero() {
            let s = sign(&p.eval(b));
            if s != 0 {
                return s * flip;
            }
            p = p.derivative();
            flip = -flip;
        }
        0
    }

    pub fn sign_at_pos_inf(&self) -> i8 {
        sign(&self.lead())
    }

    pub fn sign_at_neg_inf(&self) -> i8 {
        let s = sign(&self.lead());
        if self.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }

    /// Strict upper bound on the modulus of every complex root
    /// (`1 + max |c_k / c_n|`).
    pub fn cauchy_bound(&self) -> Q {
        let lead = self.lead().abs();
        let mut m = Q::zero();
        if let Some(d) = self.degree() {
            for c in &self.coeffs[..d] {
                let r = c.abs() / &lead;
                if r > m {
                    m = r;
                }
            }
        }
        m + Q::one()
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    pub fn count_roots_open(&self, lo: &Bound, hi: &Bound) -> usize {
        SturmSequence::new(self).count_open(lo, hi)
    }

    /// Isolates each distinct real root in `(lo, hi)`, in increasing order.
    pub fn isolate_roots(&self, lo: &Bound, hi: &Bound) -> Vec<RootInterval> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.squarefree_part();
        let sturm = SturmSequence::new(&f);
        let bound = f.cauchy_bound();
        let lo = match lo {
            Bound::Finite(a) => a.clone(),
            _ => -bound.clone(),
        };
        let hi = match hi {
            Bound::Finite(b) => b.clone(),
            _ => bound,
        };
        let mut out = Vec::new();
        isolate_rec(&f, &sturm, lo, hi, &mut out);
        out
    }
}

fn isolate_rec(f: &QPoly, sturm: &SturmSequence, lo: Q, hi: Q, out: &mut Vec<RootInterval>) {
    if lo >= hi {
        return;
    }
    let n = sturm.count_open(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
    match n {
        0 => {}
        1 => out.push(RootInterval { lo, hi }),
        _ => {
            let mid = (&lo + &hi) / Q::from_integer(2.into());
            isolate_rec(f, sturm, lo, mid.clone(), out);
            if f.eval(&mid).is_zero() {
                out.push(RootInterval {
                    lo: mid.clone(),
                    hi: mid.clone(),
                });
            }
            isolate_rec(f, sturm, mid, hi, out);
        }
    }
}

/// An isolating interval: either an exact rational root (`lo == hi`) or an
/// open interval `(lo, hi)` holding exactly one simple root of its
/// square-free polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Q,
    pub hi: Q,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    /// Halves the interval. `f` must be the square-free polynomial the
    /// interval isolates a root of.
    pub fn bisect(&mut self, f: &QPoly) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / Q::from_integer(2.into());
        let at_mid = sign(&f.eval(&mid));
        if at_mid == 0 {
            self.lo = mid.clone();
            self.hi = mid;
        } else if at_mid == f.sign_right_of(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// True when the two intervals cannot contain a common point.
    pub fn disjoint(&self, other: &RootInterval) -> bool {
        let before = |a: &RootInterval, b: &RootInterval| {
            if a.is_exact() && b.is_exact() {
                a.hi < b.lo
            } else {
                a.hi <= b.lo
            }
        };
        before(self, other) || before(other, self)
    }
}

impl fmt::Display for RootInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "[{}]", fmt_q(&self.lo))
        } else {
            write!(f, "({}, {})", fmt_q(&self.lo), fmt_q(&self.hi))
        }
    }
}

/// Signed remainder sequence `f, f', -rem(f, f'), …`.
///
/// Sign variations are evaluated with one-sided limits, so the count of
/// distinct roots in an open interval is exact even when an endpoint is a
/// root of `f` or of an intermediate term.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QPoly>,
}

impl SturmSequence {
    pub fn new(f: &QPoly) -> Self {
        let mut seq = Vec::new();
        if f.is_zero() {
            return Self { seq };
        }
        seq.push(f.clone());
        let df = f.derivative();
        if df.is_zero() {
            return Self { seq };
        }
        seq.push(df);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        Self { seq }
    }

    pub fn polys(&self) -> &[QPoly] {
        &self.seq
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    fn variations_right_of(&self, b: &Bound) -> usize {
        match b {
            Bound::NegInf => Self::variations(self.seq.iter().map(|p| p.sign_at_neg_inf())),
            Bound::Finite(a) => Self::variations(self.seq.iter().map(|p| p.sign_right_of(a))),
            Bound::PosInf => Self::variations(self.seq.iter().map(|p| p.sign_at_pos_inf())),
        }
    }

    fn variations_left_of(&self, b: &Bound) -> usize {
        match b {
            Bound::NegInf => Self::variations(self.seq.iter().map(|p| p.sign_at_neg_inf())),
            Bound::Finite(a) => Self::variations(self.seq.iter().map(|p| p.sign_left_of(a))),
            Bound::PosInf => Self::variations(self.seq.iter().map(|p| p.sign_at_pos_inf())),
        }
    }

    /// Distinct real roots of the first term in the open interval `(lo, hi)`.
    pub fn count_open(&self, lo: &Bound, hi: &Bound) -> usize {
        if self.seq.is_empty() {
            return 0;
        }
        let a = self.variations_right_of(lo);
        let b = self.variations_left_of(hi);
        a.saturating_sub(b)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = fmt_q(&c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
