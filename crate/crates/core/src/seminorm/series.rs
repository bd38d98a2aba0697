use std::fmt;

use num_traits::{Signed, Zero};

use crate::ball::RGoodFilter;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, to_exact, ExtRational, Rational};
use crate::field::ValuedField;

use super::poly::{filter_seminorm_poly, Poly};

/// `a_0 + … + a_n T^n` plus a caller-certified bound on `max_{i>n} |a_i| R^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries<E> {
    coeffs: Vec<E>,
    tail_bound: Rational,
}

impl<E: Clone + PartialEq> TruncSeries<E> {
    pub fn new(coeffs: Vec<E>, tail_bound: Rational) -> Result<Self> {
        if tail_bound.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "tail bound {} is negative",
                fmt_rat(&tail_bound)
            )));
        }
        Ok(TruncSeries { coeffs, tail_bound })
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn tail_bound(&self) -> &Rational {
        &self.tail_bound
    }

    pub fn truncation<F: ValuedField<Elem = E>>(&self, field: &F) -> Poly<E> {
        Poly::new(field, self.coeffs.clone())
    }
}

impl<E: fmt::Display> fmt::Display for TruncSeries<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("series[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; tail={}]", fmt_rat(&self.tail_bound))
    }
}

/// Closed interval `[lo, hi]` holding a series seminorm value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesEnclosure {
    pub lo: Rational,
    pub hi: ExtRational,
    /// Whether the truncation value was exact; otherwise `lo` is only `0`.
    pub exact_center: bool,
}

impl SeriesEnclosure {
    pub fn width(&self) -> Option<Rational> {
        self.hi.finite().map(|h| h - &self.lo)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && ExtRational::Finite(v.clone()) <= self.hi
    }
}

impl fmt::Display for SeriesEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lo), self.hi)
    }
}

/// `[max(0, v − tail), v + tail]` for the truncation value `v`. When `v` is only
/// bounded above at `depth`, the lower end degrades to `0`.
pub fn series_enclosure<F: ValuedField>(
    filter: &RGoodFilter<F>,
    series: &TruncSeries<F::Elem>,
    depth: usize,
) -> SeriesEnclosure {
    let v = filter_seminorm_poly(filter, &series.truncation(filter.field()));
    let t = series.tail_bound();
    match to_exact(&v, depth) {
        Some(v) => {
            let lo = &v - t;
            SeriesEnclosure {
                lo: if lo.is_negative() { Rational::zero() } else { lo },
                hi: ExtRational::Finite(v + t),
                exact_center: true,
            }
        }
        None => SeriesEnclosure {
            lo: Rational::zero(),
            hi: match v.bound(depth) {
                ExtRational::Finite(b) => ExtRational::Finite(b + t),
                top => top,
            },
            exact_center: false,
        },
    }
}
