//! Fields with exact, rational-valued non-Archimedean norms.
//!
//! None of the shipped fields are complete or algebraically closed; the
//! seminorm engine only needs decidable equality and exact norms.

mod padic;
mod tadic;
mod trivial;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, int, rpow, Rational};

pub use padic::PAdicQ;
pub use tadic::{RatFunc, TAdicField};
pub use trivial::TrivialQ;

/// The value group `Γ = {|k| : k ≠ 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueGroup {
    /// `{1}`.
    Trivial,
    /// `{g^n : n ∈ ℤ}` for a rational `0 < g < 1`.
    Cyclic { generator: Rational },
}

impl ValueGroup {
    pub fn contains(&self, r: &Rational) -> bool {
        match self {
            ValueGroup::Trivial => r.is_one(),
            ValueGroup::Cyclic { generator } => {
                if !r.is_positive() {
                    return false;
                }
                let step = generator.recip();
                let mut x = if *r <= int(1) { r.clone() } else { r.recip() };
                while x < int(1) {
                    x *= &step;
                }
                x.is_one()
            }
        }
    }

    /// Smallest integer `m` with `g^m <= r`, for a cyclic group.
    pub fn exponent_at_most(&self, r: &Rational) -> Option<i64> {
        let ValueGroup::Cyclic { generator } = self else {
            return None;
        };
        if !r.is_positive() {
            return None;
        }
        let mut m: i64 = 0;
        if rpow(generator, 0) <= *r {
            while rpow(generator, m - 1) <= *r {
                m -= 1;
            }
        } else {
            while rpow(generator, m) > *r {
                m += 1;
            }
        }
        Some(m)
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueGroup::Trivial => f.write_str("{1}"),
            ValueGroup::Cyclic { generator } => write!(f, "({})^Z", fmt_rat(generator)),
        }
    }
}

/// A field `K` with an exact ultrametric norm taking values in `Γ ∪ {0} ⊆ ℚ≥0`.
pub trait ValuedField: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static;

    /// Descriptor in CLI syntax, e.g. `padic:2`.
    fn name(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn norm(&self, a: &Self::Elem) -> Rational;
    fn value_group(&self) -> ValueGroup;

    /// An element of norm `< 1` generating the value group, if the norm is non-trivial.
    fn uniformizer(&self) -> Option<Self::Elem>;

    /// The transcendental `t` of a function field.
    fn variable(&self) -> Option<Self::Elem> {
        None
    }

    /// Deterministic enumeration of a dense set of elements; index 0 is zero.
    fn enumerate(&self, index: usize) -> Self::Elem;

    /// Random element with a spread of norms, for fixtures and verifiers.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Random element of norm `<= 1`.
    fn sample_integral(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn one(&self) -> Self::Elem {
        self.from_rational(&Rational::one())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut sq = a.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Element `s` of the largest norm `|s| <= radius` in the value group, so
    /// that `center + s·u` lies in the closed disc for every integral `u`.
    /// `None` when the closed disc is the single point `{center}`.
    fn disc_scale(&self, radius: &Rational) -> Option<Self::Elem> {
        match self.value_group() {
            ValueGroup::Trivial => (*radius >= int(1)).then(|| self.one()),
            group @ ValueGroup::Cyclic { .. } => {
                let m = group.exponent_at_most(radius)?;
                let pi = self.uniformizer()?;
                let pm = self.pow(&pi, m.unsigned_abs() as u32);
                if m >= 0 {
                    Some(pm)
                } else {
                    self.inv(&pm)
                }
            }
        }
    }
}

/// `K_R = {k : |k| <= R}` membership.
pub fn in_k_r<F: ValuedField>(field: &F, k: &F::Elem, radius: &Rational) -> bool {
    field.norm(k) <= *radius
}

/// A field together with the radius `R` of the disc `K{R⁻¹T}`.
#[derive(Clone, Debug)]
pub struct Ambient<F: ValuedField> {
    field: F,
    radius: Rational,
}

impl<F: ValuedField> Ambient<F> {
    pub fn new(field: F, radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::NonPositiveRadius(fmt_rat(&radius)));
        }
        Ok(Ambient { field, radius })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// The ambient radius `R`.
    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn norm(&self, k: &F::Elem) -> Rational {
        self.field.norm(k)
    }

    pub fn in_k_r(&self, k: &F::Elem) -> bool {
        in_k_r(&self.field, k, &self.radius)
    }

    pub fn check_center(&self, k: &F::Elem) -> Result<()> {
        if self.in_k_r(k) {
            Ok(())
        } else {
            Err(Error::CenterNotInKR {
                center: k.to_string(),
                norm: fmt_rat(&self.norm(k)),
                bound: fmt_rat(&self.radius),
            })
        }
    }

    /// Random element of `K_R`; falls back to zero after a few rejections.
    pub fn sample_k_r(&self, rng: &mut dyn RngCore) -> F::Elem {
        for _ in 0..16 {
            let k = self.field.sample(rng);
            if self.in_k_r(&k) {
                return k;
            }
        }
        self.field.zero()
    }
}

/// Stern's diatomic sequence.
fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

/// Enumeration of ℚ: `0, 1, -1, 1/2, -1/2, 2, -2, 1/3, ...` (Calkin–Wilf order).
pub fn enumerate_rational(index: usize) -> Rational {
    if index == 0 {
        return Rational::zero();
    }
    let j = (index as u64 + 1) / 2;
    let q = Rational::new(BigInt::from(fusc(j)), BigInt::from(fusc(j + 1)));
    if index % 2 == 1 {
        q
    } else {
        -q
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_p(n)` for a non-zero integer.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// Small random rational `u/v` with `|u| <= 20`, `1 <= v <= 12`.
pub(crate) fn small_rational(rng: &mut dyn RngCore, avoid: Option<u64>) -> Rational {
    use rand::Rng;
    loop {
        let u: i64 = rng.gen_range(-20..=20);
        let v: i64 = rng.gen_range(1..=12);
        if u == 0 {
            continue;
        }
        if let Some(p) = avoid {
            let p = p as i64;
            if u % p == 0 || v % p == 0 {
                continue;
            }
        }
        return Rational::new(BigInt::from(u), BigInt::from(v));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn rational_enumeration_prefix() {
        let got: Vec<Rational> = (0..9).map(enumerate_rational).collect();
        let want = vec![
            int(0),
            int(1),
            int(-1),
            rat(1, 2),
            rat(-1, 2),
            int(2),
            int(-2),
            rat(1, 3),
            rat(-1, 3),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn value_group_membership() {
        let g = ValueGroup::Cyclic {
            generator: rat(1, 2),
        };
        assert!(g.contains(&rat(1, 8)));
        assert!(g.contains(&int(4)));
        assert!(g.contains(&int(1)));
        assert!(!g.contains(&rat(3, 8)));
        assert!(!g.contains(&int(0)));
        assert!(ValueGroup::Trivial.contains(&int(1)));
        assert!(!ValueGroup::Trivial.contains(&rat(1, 2)));
    }

    #[test]
    fn exponent_at_most() {
        let g = ValueGroup::Cyclic {
            generator: rat(1, 2),
        };
        assert_eq!(g.exponent_at_most(&rat(1, 4)), Some(2));
        assert_eq!(g.exponent_at_most(&rat(3, 8)), Some(2));
        assert_eq!(g.exponent_at_most(&int(1)), Some(0));
        assert_eq!(g.exponent_at_most(&int(5)), Some(-2));
    }

    #[test]
    fn ambient_rejects_nonpositive_radius() {
        assert!(Ambient::new(TrivialQ, int(0)).is_err());
        assert!(Ambient::new(TrivialQ, rat(-1, 2)).is_err());
    }

    #[test]
    fn in_k_r_examples() {
        assert!(!in_k_r(&TrivialQ, &int(7), &rat(1, 2)));
        assert!(in_k_r(&TrivialQ, &int(0), &rat(1, 2)));
        let q2 = PAdicQ::new(2).unwrap();
        assert!(in_k_r(&q2, &int(2), &rat(1, 2)));
    }
}
