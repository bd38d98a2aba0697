use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{fmt_rat, ExtRational, Rational};
use crate::error::{Error, Result};

/// Depth used by front ends when the caller does not pick one.
pub const DEFAULT_DEPTH: usize = 64;

/// Outcome of a semi-decision. `Unknown` never contradicts a later `Yes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semi {
    Yes,
    Unknown,
}

impl Semi {
    pub fn is_yes(self) -> bool {
        self == Semi::Yes
    }
}

impl fmt::Display for Semi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semi::Yes => f.write_str("yes"),
            Semi::Unknown => f.write_str("unknown"),
        }
    }
}

type BoundFn = dyn Fn(usize) -> ExtRational + Send + Sync;

/// Non-increasing, depth-indexed sequence of bounds. Pure: evaluating a depth
/// twice gives the same answer, so streams are freely shared across threads.
#[derive(Clone)]
pub struct BoundStream {
    bounds: Arc<BoundFn>,
    stable_from: Option<usize>,
}

impl BoundStream {
    pub fn bound(&self, depth: usize) -> ExtRational {
        (self.bounds)(depth)
    }

    /// Index from which the construction certifies the bounds are constant.
    pub fn stable_from(&self) -> Option<usize> {
        self.stable_from
    }
}

impl fmt::Debug for BoundStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = (0..4).map(|d| self.bound(d).to_string()).collect();
        write!(f, "Stream[{}, ...]", head.join(", "))?;
        if let Some(s) = self.stable_from {
            write!(f, " stable@{s}")?;
        }
        Ok(())
    }
}

/// Upper real: an upward-closed rounded set of rationals.
///
/// `Exact(v)` is the right section `{q : q > v}`, `Top` the empty cut (`+inf`),
/// and `Stream` the cut `{q : bound(d) < q for some d}`.
#[derive(Clone, Debug)]
pub enum UpperReal {
    Exact(Rational),
    Top,
    Stream(BoundStream),
}

impl UpperReal {
    pub fn exact(q: Rational) -> Self {
        UpperReal::Exact(q)
    }

    /// Builds a stream from arbitrary bounds; the stored stream is the running
    /// minimum, so the non-increasing invariant holds whatever `f` returns.
    pub fn from_bounds<F>(f: F) -> Self
    where
        F: Fn(usize) -> ExtRational + Send + Sync + 'static,
    {
        UpperReal::Stream(BoundStream {
            bounds: Arc::new(move |d| (0..=d).map(&f).min().expect("non-empty range")),
            stable_from: None,
        })
    }

    /// Stream whose bounds are constant from `stable_from` onward. The running
    /// minimum is taken as in [`UpperReal::from_bounds`].
    pub fn certified<F>(f: F, stable_from: usize) -> Self
    where
        F: Fn(usize) -> ExtRational + Send + Sync + 'static,
    {
        match UpperReal::from_bounds(f) {
            UpperReal::Stream(s) => UpperReal::Stream(BoundStream {
                stable_from: Some(stable_from),
                ..s
            }),
            other => other,
        }
    }

    /// `f` must already be non-increasing.
    pub(crate) fn monotone<F>(f: F, stable_from: Option<usize>) -> Self
    where
        F: Fn(usize) -> ExtRational + Send + Sync + 'static,
    {
        UpperReal::Stream(BoundStream {
            bounds: Arc::new(f),
            stable_from,
        })
    }

    pub fn bound(&self, depth: usize) -> ExtRational {
        match self {
            UpperReal::Exact(v) => ExtRational::Finite(v.clone()),
            UpperReal::Top => ExtRational::PlusInfinity,
            UpperReal::Stream(s) => s.bound(depth),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            UpperReal::Exact(v) => Some(v),
            _ => None,
        }
    }

    fn stable_index(&self) -> Option<usize> {
        match self {
            UpperReal::Exact(_) | UpperReal::Top => Some(0),
            UpperReal::Stream(s) => s.stable_from,
        }
    }

    /// Human-readable value at `depth`: the exact value, or `<= bound`.
    pub fn describe(&self, depth: usize) -> String {
        match to_exact(self, depth) {
            Some(v) => fmt_rat(&v),
            None => match self.bound(depth) {
                ExtRational::PlusInfinity => "+inf".to_string(),
                b => format!("<= {b} (depth {depth})"),
            },
        }
    }
}

/// `x < q`, i.e. `q` lies in the cut, semi-decided from the bounds up to `depth`.
pub fn upper_lt(x: &UpperReal, q: &Rational, depth: usize) -> Semi {
    match x.bound(depth) {
        ExtRational::Finite(b) if &b < q => Semi::Yes,
        _ => Semi::Unknown,
    }
}

/// Intersection of the two cuts.
pub fn upper_max(x: &UpperReal, y: &UpperReal) -> UpperReal {
    match (x, y) {
        (UpperReal::Top, _) | (_, UpperReal::Top) => UpperReal::Top,
        (UpperReal::Exact(a), UpperReal::Exact(b)) => {
            UpperReal::Exact(if a >= b { a.clone() } else { b.clone() })
        }
        _ => {
            let stable = match (x.stable_index(), y.stable_index()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            let (x, y) = (x.clone(), y.clone());
            UpperReal::monotone(move |d| x.bound(d).max(y.bound(d)), stable)
        }
    }
}

/// `c * x` for `c >= 0`; `0 * Top = 0`.
pub fn upper_scale(c: &Rational, x: &UpperReal) -> Result<UpperReal> {
    if c.is_negative() {
        return Err(Error::NegativeScale(fmt_rat(c)));
    }
    if c.is_zero() {
        return Ok(UpperReal::Exact(Rational::zero()));
    }
    Ok(match x {
        UpperReal::Exact(v) => UpperReal::Exact(v * c),
        UpperReal::Top => UpperReal::Top,
        UpperReal::Stream(s) => {
            let (s, c) = (s.clone(), c.clone());
            let stable = s.stable_from;
            UpperReal::monotone(move |d| s.bound(d).scale(&c), stable)
        }
    })
}

/// Infimum of a finite non-empty family (union of the cuts).
pub fn upper_inf(xs: &[UpperReal]) -> Result<UpperReal> {
    if xs.is_empty() {
        return Err(Error::EmptyInf);
    }
    let live: Vec<&UpperReal> = xs.iter().filter(|x| !matches!(x, UpperReal::Top)).collect();
    if live.is_empty() {
        return Ok(UpperReal::Top);
    }
    if live.len() == 1 {
        return Ok(live[0].clone());
    }
    if let Some(exacts) = live.iter().map(|x| x.as_exact()).collect::<Option<Vec<_>>>() {
        let min = exacts.into_iter().min().expect("non-empty");
        return Ok(UpperReal::Exact(min.clone()));
    }
    let stable = live
        .iter()
        .map(|x| x.stable_index())
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().max().unwrap_or(0));
    let owned: Vec<UpperReal> = live.into_iter().cloned().collect();
    Ok(UpperReal::monotone(
        move |d| {
            owned
                .iter()
                .map(|x| x.bound(d))
                .min()
                .expect("non-empty family")
        },
        stable,
    ))
}

/// Infimum of a productive stream of upper reals: the bound at depth `d` is the
/// minimum of the depth-`d` bounds of the first `d + 1` members.
pub fn upper_inf_stream<F>(xs: F) -> UpperReal
where
    F: Fn(usize) -> UpperReal + Send + Sync + 'static,
{
    UpperReal::monotone(
        move |d| (0..=d).map(|i| xs(i).bound(d)).min().expect("non-empty"),
        None,
    )
}

/// The rational value of `x`, when it is exact or certified to have stabilised
/// at or before `depth`.
pub fn to_exact(x: &UpperReal, depth: usize) -> Option<Rational> {
    match x {
        UpperReal::Exact(v) => Some(v.clone()),
        UpperReal::Top => None,
        UpperReal::Stream(s) => match s.stable_from {
            Some(k) if k <= depth => s.bound(k).finite().cloned(),
            _ => None,
        },
    }
}
