//! Exact rational helpers shared by every algebraic module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `-?[0-9]+(/[1-9][0-9]*)?`.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    match den {
        None => Ok(Q::from_integer(n)),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) || d.starts_with('0') {
                return Err(bad());
            }
            let d: BigInt = d.parse().map_err(|_| bad())?;
            Ok(Q::new(n, d))
        }
    }
}

/// Canonical string form, `p/q` or an integer.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // the num conversion gives up on very large operands
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Smallest "nice" rational not below `x`: the binary expansion of `x`
/// nudged upward by a relative margin, so that it dominates `x` even after
/// rounding in the float evaluation that produced it.
pub fn rational_upper_bound(x: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let margin = 1e-9 * x.abs().max(1.0);
    from_f64(x + margin)
}

pub fn binomial(n: usize, k: usize) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

pub fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Q::zero(), Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::new(q(1), q(0)),
            1 => Self::new(q(0), q(1)),
            2 => Self::new(q(-1), q(0)),
            _ => Self::new(q(0), q(-1)),
        }
    }

    pub fn mul(&self, other: &GaussQ) -> GaussQ {
        GaussQ::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn scale(&self, s: &Q) -> GaussQ {
        GaussQ::new(&self.re * s, &self.im * s)
    }

    pub fn add(&self, other: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn conj(&self) -> GaussQ {
        GaussQ::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> f64 {
        let (re, im) = self.to_f64();
        im.atan2(re)
    }

    pub fn to_string_exact(&self) -> String {
        let im = &self.im;
        if im.is_negative() {
            format!("{} - {}i", fmt_q(&self.re), fmt_q(&-im.clone()))
        } else {
            format!("{} + {}i", fmt_q(&self.re), fmt_q(im))
        }
    }
}
