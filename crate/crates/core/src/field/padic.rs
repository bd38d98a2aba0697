use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, RngCore};

use super::{enumerate_rational, int_valuation, is_prime, small_rational, ValueGroup, ValuedField};
use crate::error::{Error, Result};
use crate::exactnum::{rat, rpow, Rational};

/// ℚ with the `p`-adic norm `|k|_p = p^(-v_p(k))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PAdicQ {
    p: u64,
}

impl PAdicQ {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PAdicQ { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Exact `v_p(k)` for `k ≠ 0`.
    pub fn valuation(&self, k: &Rational) -> Option<i64> {
        if k.is_zero() {
            return None;
        }
        Some(int_valuation(k.numer(), self.p) - int_valuation(k.denom(), self.p))
    }
}

impl ValuedField for PAdicQ {
    type Elem = Rational;

    fn name(&self) -> String {
        format!("padic:{}", self.p)
    }

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn neg(&self, a: &Rational) -> Rational {
        -a
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn norm(&self, a: &Rational) -> Rational {
        match self.valuation(a) {
            None => Rational::zero(),
            Some(v) => rpow(&rat(self.p as i64, 1), -v),
        }
    }

    fn value_group(&self) -> ValueGroup {
        ValueGroup::Cyclic {
            generator: rat(1, self.p as i64),
        }
    }

    fn uniformizer(&self) -> Option<Rational> {
        Some(Rational::from_integer(BigInt::from(self.p)))
    }

    fn enumerate(&self, index: usize) -> Rational {
        enumerate_rational(index)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Rational {
        if rng.gen_ratio(1, 8) {
            return Rational::zero();
        }
        let e: i64 = rng.gen_range(-2..=3);
        small_rational(rng, Some(self.p)) * rpow(&rat(self.p as i64, 1), e)
    }

    fn sample_integral(&self, rng: &mut dyn RngCore) -> Rational {
        if rng.gen_bool(0.5) {
            let bound = 4 * self.p as i64;
            Rational::from_integer(BigInt::from(rng.gen_range(0..bound)))
        } else {
            let e: i64 = rng.gen_range(0..=3);
            small_rational(rng, Some(self.p)) * rpow(&rat(self.p as i64, 1), e)
        }
    }
}
