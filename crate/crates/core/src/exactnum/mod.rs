//! Exact rationals, extended rationals and computable upper reals.
//!
//! Every seminorm value produced by this crate is an [`UpperReal`]: a set of
//! rationals `{q : x < q}` presented either exactly or by a non-increasing
//! stream of rational bounds whose infimum is the denoted value.

mod enclose;
mod upper;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub use enclose::{ln_enclosure, nth_root_enclosure, round_down, round_up, RatInterval};
pub use upper::{
    to_exact, upper_inf, upper_inf_stream, upper_lt, upper_max, upper_scale, BoundStream, Semi,
    UpperReal, DEFAULT_DEPTH,
};

/// Arbitrary-precision rational in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

/// Shorthand for `n/d` with machine-sized parts. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `q^e` for a possibly negative exponent; `0^0 = 1`, and `0^e` for `e < 0` panics.
pub fn rpow(q: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let base = if e < 0 { q.recip() } else { q.clone() };
    let mut exp = e.unsigned_abs();
    let mut acc = Rational::one();
    let mut sq = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &sq;
        }
        exp >>= 1;
        if exp > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

pub fn rmax(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn rmin(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rat(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering of `q`, rounded towards `-inf` (`up = false`) or `+inf`.
pub fn fmt_decimal(q: &Rational, digits: usize, up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = q * Rational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = n.is_negative();
    let abs = n.abs();
    let int_part = &abs / &scale;
    let frac = &abs % &scale;
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// A rational or `+inf`. `Finite(a) < PlusInfinity` for every `a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    Finite(Rational),
    PlusInfinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::PlusInfinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub(crate) fn scale(&self, c: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(q) => ExtRational::Finite(q * c),
            ExtRational::PlusInfinity => ExtRational::PlusInfinity,
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(q: Rational) -> Self {
        ExtRational::Finite(q)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => f.write_str(&fmt_rat(q)),
            ExtRational::PlusInfinity => f.write_str("+inf"),
        }
    }
}
