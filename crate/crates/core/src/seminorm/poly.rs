use std::fmt;

use crate::ball::{FilterGenerator, FormalBall, RGoodFilter};
use crate::error::{Error, Result};
use crate::exactnum::{rmax, rpow, Rational, UpperReal};
use crate::field::ValuedField;

use super::{chain_inf, LinPoly};

/// `c·∏(T − b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<E> {
    pub lead: E,
    pub roots: Vec<E>,
}

/// `Σ c_i T^i` with trailing zeros trimmed, plus an optional witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E> {
    coeffs: Vec<E>,
    witness: Option<Factorization<E>>,
}

fn trim<F: ValuedField>(field: &F, mut c: Vec<F::Elem>) -> Vec<F::Elem> {
    while c.last().is_some_and(|x| field.is_zero(x)) {
        c.pop();
    }
    c
}

fn expand<F: ValuedField>(field: &F, w: &Factorization<F::Elem>) -> Vec<F::Elem> {
    let mut c = vec![w.lead.clone()];
    for b in &w.roots {
        // multiply by (T − b)
        let mut next = vec![field.zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = field.add(&next[i + 1], ci);
            next[i] = field.sub(&next[i], &field.mul(ci, b));
        }
        c = next;
    }
    trim(field, c)
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn new<F: ValuedField<Elem = E>>(field: &F, coeffs: Vec<E>) -> Self {
        Poly {
            coeffs: trim(field, coeffs),
            witness: None,
        }
    }

    pub fn from_factors<F: ValuedField<Elem = E>>(field: &F, lead: E, roots: Vec<E>) -> Self {
        let w = Factorization { lead, roots };
        Poly {
            coeffs: expand(field, &w),
            witness: Some(w),
        }
    }

    /// Attaches a witness after checking that it expands to `coeffs`.
    pub fn with_witness<F: ValuedField<Elem = E>>(
        field: &F,
        coeffs: Vec<E>,
        witness: Factorization<E>,
    ) -> Result<Self> {
        let coeffs = trim(field, coeffs);
        if expand(field, &witness) != coeffs {
            return Err(Error::WitnessMismatch);
        }
        Ok(Poly {
            coeffs,
            witness: Some(witness),
        })
    }

    pub fn from_lin<F: ValuedField<Elem = E>>(field: &F, f: &LinPoly<E>) -> Self {
        Poly::new(field, vec![field.neg(&f.b), f.a.clone()])
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn witness(&self) -> Option<&Factorization<E>> {
        self.witness.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add<F: ValuedField<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = field.zero();
        let c = (0..n)
            .map(|i| {
                field.add(
                    self.coeffs.get(i).unwrap_or(&zero),
                    other.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        Poly::new(field, c)
    }

    /// Product; the witness survives when both factors carry one.
    pub fn mul<F: ValuedField<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::new(field, vec![]);
        }
        let mut c = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = field.add(&c[i + j], &field.mul(a, b));
            }
        }
        let witness = match (&self.witness, &other.witness) {
            (Some(x), Some(y)) => Some(Factorization {
                lead: field.mul(&x.lead, &y.lead),
                roots: x.roots.iter().chain(&y.roots).cloned().collect(),
            }),
            _ => None,
        };
        Poly {
            coeffs: trim(field, c),
            witness,
        }
    }

    /// Horner evaluation.
    pub fn eval<F: ValuedField<Elem = E>>(&self, field: &F, z: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, z), c))
    }
}

impl<E: fmt::Display> fmt::Display for Poly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("poly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Coefficients `c_i` with `f(T) = Σ c_i (T − k)^i`, by repeated synthetic division.
pub fn taylor_shift<F: ValuedField>(field: &F, f: &Poly<F::Elem>, k: &F::Elem) -> Poly<F::Elem> {
    let mut rest: Vec<F::Elem> = f.coeffs().to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        // divide rest by (T − k): quotient q, remainder r = rest(k)
        let n = rest.len();
        let mut q = vec![field.zero(); n - 1];
        let mut acc = field.zero();
        for i in (0..n).rev() {
            acc = field.add(&field.mul(&acc, k), &rest[i]);
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        out.push(acc);
        rest = q;
    }
    Poly::new(field, out)
}

/// `max_i |c_i| q^i` over the Taylor coefficients at the ball center.
pub fn hat_ball_poly<F: ValuedField>(field: &F, ball: &FormalBall<F::Elem>, f: &Poly<F::Elem>) -> Rational {
    weighted_max(field, taylor_shift(field, f, ball.center()).coeffs(), ball.radius())
}

/// `|c|·∏ max(|k − b_j|, q)` from the factorization witness.
pub fn product_ball_poly<F: ValuedField>(
    field: &F,
    ball: &FormalBall<F::Elem>,
    f: &Poly<F::Elem>,
) -> Result<Rational> {
    let w = f.witness().ok_or(Error::FactorizationRequired)?;
    let mut acc = field.norm(&w.lead);
    for b in &w.roots {
        acc *= rmax(&field.norm(&field.sub(ball.center(), b)), ball.radius());
    }
    Ok(acc)
}

/// `max_i |c_i| R^i`.
pub fn gauss_norm_poly<F: ValuedField>(field: &F, f: &Poly<F::Elem>, radius: &Rational) -> Rational {
    weighted_max(field, f.coeffs(), radius)
}

fn weighted_max<F: ValuedField>(field: &F, c: &[F::Elem], r: &Rational) -> Rational {
    c.iter()
        .enumerate()
        .map(|(i, ci)| field.norm(ci) * rpow(r, i as i64))
        .max()
        .unwrap_or_default()
}

/// `inf_{B ∈ F} hat(B, f)`; disc points have the closed form `max_i |c_i| r^i`.
pub fn filter_seminorm_poly<F: ValuedField>(filter: &RGoodFilter<F>, f: &Poly<F::Elem>) -> UpperReal {
    let field = filter.field();
    if f.degree().unwrap_or(0) == 0 {
        let c = f.coeffs().first().map(|c| field.norm(c)).unwrap_or_default();
        return UpperReal::Exact(c);
    }
    match filter.generator() {
        FilterGenerator::DiscPoint {
            center,
            limit_radius,
        } => UpperReal::Exact(weighted_max(
            field,
            taylor_shift(field, f, center).coeffs(),
            limit_radius,
        )),
        FilterGenerator::Chain(_) => {
            let cap = gauss_norm_poly(field, f, filter.ambient().radius());
            let (field, f) = (field.clone(), f.clone());
            chain_inf(filter, cap, move |b| hat_ball_poly(&field, b, &f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::field::{Ambient, PAdicQ, TrivialQ};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn taylor_shift_examples() {
        let q = TrivialQ;
        let f = Poly::new(&q, ints(&[-1, 0, 1]));
        assert_eq!(taylor_shift(&q, &f, &int(0)).coeffs(), ints(&[-1, 0, 1]).as_slice());
        let f = Poly::new(&q, ints(&[0, 0, 1]));
        assert_eq!(taylor_shift(&q, &f, &int(1)).coeffs(), ints(&[1, 2, 1]).as_slice());
        let f = Poly::new(&q, ints(&[-5, 1]));
        assert_eq!(taylor_shift(&q, &f, &int(3)).coeffs(), ints(&[-2, 1]).as_slice());
    }

    #[test]
    fn hat_and_product_examples() {
        let q2 = PAdicQ::new(2).unwrap();
        let amb = Ambient::new(q2, int(1)).unwrap();
        let b = FormalBall::new(&amb, int(0), rat(1, 2)).unwrap();
        let f = Poly::from_factors(&q2, int(1), ints(&[1, -1]));
        assert_eq!(f.coeffs(), ints(&[-1, 0, 1]).as_slice());
        assert_eq!(hat_ball_poly(&q2, &b, &f), int(1));
        assert_eq!(product_ball_poly(&q2, &b, &f).unwrap(), int(1));
        assert_eq!(hat_ball_poly(&q2, &b, &Poly::new(&q2, ints(&[1]))), int(1));

        let q3 = PAdicQ::new(3).unwrap();
        let amb3 = Ambient::new(q3, int(1)).unwrap();
        let b = FormalBall::new(&amb3, int(0), rat(1, 2)).unwrap();
        let f = Poly::from_factors(&q3, int(3), ints(&[1, -1]));
        assert_eq!(product_ball_poly(&q3, &b, &f).unwrap(), rat(1, 3));
        assert_eq!(hat_ball_poly(&q3, &b, &f), rat(1, 3));

        let bare = Poly::new(&q3, ints(&[-3, 0, 3]));
        assert_eq!(product_ball_poly(&q3, &b, &bare), Err(Error::FactorizationRequired));
    }

    #[test]
    fn witness_must_expand() {
        let q = TrivialQ;
        let w = Factorization {
            lead: int(2),
            roots: ints(&[1]),
        };
        assert!(Poly::with_witness(&q, ints(&[-2, 2]), w.clone()).is_ok());
        assert_eq!(
            Poly::with_witness(&q, ints(&[-1, 2]), w),
            Err(Error::WitnessMismatch)
        );
    }

    #[test]
    fn gauss_examples() {
        let q2 = PAdicQ::new(2).unwrap();
        assert_eq!(gauss_norm_poly(&q2, &Poly::new(&q2, ints(&[4, 0, 2])), &int(1)), rat(1, 2));
        assert_eq!(gauss_norm_poly(&q2, &Poly::new(&q2, ints(&[-3, 1])), &rat(1, 4)), int(1));
        assert_eq!(gauss_norm_poly(&q2, &Poly::new(&q2, ints(&[8])), &int(5)), rat(1, 8));
    }

    #[test]
    fn filter_poly_closed_forms() {
        let q2 = PAdicQ::new(2).unwrap();
        let amb = Ambient::new(q2, int(1)).unwrap();
        let f = RGoodFilter::disc_point(amb.clone(), int(0), rat(1, 2)).unwrap();
        let t3 = Poly::new(&q2, ints(&[0, 0, 0, 1]));
        assert_eq!(filter_seminorm_poly(&f, &t3).as_exact(), Some(&rat(1, 8)));
        let e = RGoodFilter::disc_point(amb, int(3), int(0)).unwrap();
        let g = Poly::new(&q2, ints(&[-1, 0, 1]));
        assert_eq!(filter_seminorm_poly(&e, &g).as_exact(), Some(&rat(1, 8)));

        let amb = Ambient::new(TrivialQ, rat(1, 2)).unwrap();
        let f = RGoodFilter::disc_point(amb, int(0), rat(1, 3)).unwrap();
        let geo = Poly::new(&TrivialQ, ints(&[1; 8]));
        assert_eq!(filter_seminorm_poly(&f, &geo).as_exact(), Some(&int(1)));
    }
}
