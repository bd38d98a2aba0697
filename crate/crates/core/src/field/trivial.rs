use num_traits::Zero;
use rand::{Rng, RngCore};

use super::{enumerate_rational, small_rational, ValueGroup, ValuedField};
use crate::exactnum::{int, Rational};

/// ℚ with the trivial norm: `|0| = 0`, `|k| = 1` otherwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrivialQ;

impl ValuedField for TrivialQ {
    type Elem = Rational;

    fn name(&self) -> String {
        "trivial".to_string()
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
        if a.is_zero() {
            int(0)
        } else {
            int(1)
        }
    }

    fn value_group(&self) -> ValueGroup {
        ValueGroup::Trivial
    }

    fn uniformizer(&self) -> Option<Rational> {
        None
    }

    fn enumerate(&self, index: usize) -> Rational {
        enumerate_rational(index)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Rational {
        if rng.gen_ratio(1, 8) {
            Rational::zero()
        } else {
            small_rational(rng, None)
        }
    }

    fn sample_integral(&self, rng: &mut dyn RngCore) -> Rational {
        self.sample(rng)
    }
}
