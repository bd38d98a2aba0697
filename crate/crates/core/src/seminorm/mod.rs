//! Seminorms on linear polynomials `aT − b`, their extension to `K[T]` and to
//! truncated power series, and the seminorm/filter correspondence.

mod modulus;
mod poly;
mod roundtrip;
mod series;

use std::fmt;
use std::sync::Arc;

use crate::ball::{FilterGenerator, FormalBall, RGoodFilter};
use crate::exactnum::{rmax, rmin, upper_lt, upper_scale, ExtRational, Rational, Semi, UpperReal};
use crate::field::{Ambient, ValuedField};

pub use modulus::{max_modulus_oracle, ModulusReport};
pub use poly::{
    filter_seminorm_poly, gauss_norm_poly, hat_ball_poly, product_ball_poly, taylor_shift,
    Factorization, Poly,
};
pub use roundtrip::{
    seminorm_to_filter, verify_roundtrip_f, verify_roundtrip_x, Disagreement, RoundtripReport,
    SeminormFilter,
};
pub use series::{series_enclosure, SeriesEnclosure, TruncSeries};

/// The linear polynomial `aT − b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinPoly<E> {
    pub a: E,
    pub b: E,
}

impl<E> LinPoly<E> {
    pub fn new(a: E, b: E) -> Self {
        LinPoly { a, b }
    }
}

impl<E: Clone> LinPoly<E> {
    /// `T − k`.
    pub fn monic<F: ValuedField<Elem = E>>(field: &F, k: &E) -> Self {
        LinPoly::new(field.one(), k.clone())
    }

    /// The constant `c`, i.e. `0·T − (−c)`.
    pub fn constant<F: ValuedField<Elem = E>>(field: &F, c: &E) -> Self {
        LinPoly::new(field.zero(), field.neg(c))
    }

    pub fn add<F: ValuedField<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        LinPoly::new(field.add(&self.a, &other.a), field.add(&self.b, &other.b))
    }
}

impl<E: fmt::Display> fmt::Display for LinPoly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*T - ({})", self.a, self.b)
    }
}

/// A seminorm on `A_Lin` over a fixed ambient, evaluated as upper reals.
pub trait KSeminorm<F: ValuedField>: Send + Sync {
    fn ambient(&self) -> &Ambient<F>;
    fn eval_lin(&self, f: &LinPoly<F::Elem>) -> UpperReal;
}

/// `max(|a·k − b|, |a|·q)`.
pub fn ball_seminorm_lin<F: ValuedField>(
    field: &F,
    ball: &FormalBall<F::Elem>,
    f: &LinPoly<F::Elem>,
) -> Rational {
    let ak_b = field.sub(&field.mul(&f.a, ball.center()), &f.b);
    rmax(&field.norm(&ak_b), &(field.norm(&f.a) * ball.radius()))
}

/// `max(|a|R, |b|)`.
pub fn gauss_norm_lin<F: ValuedField>(field: &F, f: &LinPoly<F::Elem>, radius: &Rational) -> Rational {
    rmax(&(field.norm(&f.a) * radius), &field.norm(&f.b))
}

/// Infimum over the chain generators of `value`, capped by `cap` (the value on
/// balls of radius `> R`). The stream bound at depth `d` uses generators `0..=d`.
pub(crate) fn chain_inf<F, V>(filter: &RGoodFilter<F>, cap: Rational, value: V) -> UpperReal
where
    F: ValuedField,
    V: Fn(&FormalBall<F::Elem>) -> Rational + Send + Sync + 'static,
{
    let FilterGenerator::Chain(chain) = filter.generator() else {
        unreachable!("chain_inf on a disc point");
    };
    match chain.len() {
        Some(n) => {
            let mut running = Vec::with_capacity(n);
            let mut acc = cap;
            for i in 0..n {
                acc = rmin(&acc, &value(&chain.get(i).expect("in range")));
                running.push(acc.clone());
            }
            UpperReal::monotone(move |d| ExtRational::Finite(running[d.min(n - 1)].clone()), Some(n - 1))
        }
        None => {
            let chain = chain.clone();
            UpperReal::monotone(
                move |d| {
                    let m = chain
                        .prefix(d)
                        .iter()
                        .map(&value)
                        .fold(cap.clone(), |acc, v| rmin(&acc, &v));
                    ExtRational::Finite(m)
                },
                None,
            )
        }
    }
}

/// `inf_{B ∈ F} max(|ak − b|, |a|q)`.
pub fn filter_seminorm_lin<F: ValuedField>(filter: &RGoodFilter<F>, f: &LinPoly<F::Elem>) -> UpperReal {
    let field = filter.field();
    if field.is_zero(&f.a) {
        return UpperReal::Exact(field.norm(&f.b));
    }
    match filter.generator() {
        FilterGenerator::DiscPoint {
            center,
            limit_radius,
        } => UpperReal::Exact(ball_seminorm_lin(
            field,
            &FormalBall::unchecked(center.clone(), limit_radius.clone()),
            f,
        )),
        FilterGenerator::Chain(_) => {
            let cap = gauss_norm_lin(field, f, filter.ambient().radius());
            let (field, f) = (field.clone(), f.clone());
            chain_inf(filter, cap, move |b| ball_seminorm_lin(&field, b, &f))
        }
    }
}

/// The Gauss norm `max(|a|R, |b|)` as a seminorm.
#[derive(Clone, Debug)]
pub struct GaussNorm<F: ValuedField> {
    ambient: Ambient<F>,
}

impl<F: ValuedField> GaussNorm<F> {
    pub fn new(ambient: Ambient<F>) -> Self {
        GaussNorm { ambient }
    }
}

impl<F: ValuedField> KSeminorm<F> for GaussNorm<F> {
    fn ambient(&self) -> &Ambient<F> {
        &self.ambient
    }

    fn eval_lin(&self, f: &LinPoly<F::Elem>) -> UpperReal {
        UpperReal::Exact(gauss_norm_lin(self.ambient.field(), f, self.ambient.radius()))
    }
}

/// The seminorm of a single formal ball.
#[derive(Clone, Debug)]
pub struct BallSeminorm<F: ValuedField> {
    ambient: Ambient<F>,
    ball: FormalBall<F::Elem>,
}

impl<F: ValuedField> BallSeminorm<F> {
    pub fn new(ambient: Ambient<F>, ball: FormalBall<F::Elem>) -> Self {
        BallSeminorm { ambient, ball }
    }
}

impl<F: ValuedField> KSeminorm<F> for BallSeminorm<F> {
    fn ambient(&self) -> &Ambient<F> {
        &self.ambient
    }

    fn eval_lin(&self, f: &LinPoly<F::Elem>) -> UpperReal {
        UpperReal::Exact(ball_seminorm_lin(self.ambient.field(), &self.ball, f))
    }
}

/// `|·|_F` for a filter `F`.
#[derive(Clone, Debug)]
pub struct FilterSeminorm<F: ValuedField> {
    filter: RGoodFilter<F>,
}

impl<F: ValuedField> FilterSeminorm<F> {
    pub fn new(filter: RGoodFilter<F>) -> Self {
        FilterSeminorm { filter }
    }

    pub fn filter(&self) -> &RGoodFilter<F> {
        &self.filter
    }

    pub fn into_dyn(self) -> Arc<dyn KSeminorm<F>> {
        Arc::new(self)
    }
}

impl<F: ValuedField> KSeminorm<F> for FilterSeminorm<F> {
    fn ambient(&self) -> &Ambient<F> {
        self.filter.ambient()
    }

    fn eval_lin(&self, f: &LinPoly<F::Elem>) -> UpperReal {
        filter_seminorm_lin(&self.filter, f)
    }
}

/// Probes the seminorm laws (constants, semi-multiplicativity, ultrametric,
/// boundedness) at the given thresholds. Returns one line per violation.
pub fn check_kseminorm_laws<F: ValuedField>(
    x: &dyn KSeminorm<F>,
    polys: &[LinPoly<F::Elem>],
    thresholds: &[Rational],
    depth: usize,
) -> Vec<String> {
    let field = x.ambient().field();
    let radius = x.ambient().radius();
    let lt = |v: &UpperReal, q: &Rational| upper_lt(v, q, depth);
    let mut out = Vec::new();
    let t = x.eval_lin(&LinPoly::monic(field, &field.zero()));
    for f in polys {
        let c = LinPoly::new(field.zero(), f.b.clone());
        let vc = x.eval_lin(&c);
        let at = x.eval_lin(&LinPoly::new(f.a.clone(), field.zero()));
        let scaled = upper_scale(&field.norm(&f.a), &t).expect("norms are non-negative");
        let vf = x.eval_lin(f);
        let gauss = gauss_norm_lin(field, f, radius);
        for q in thresholds {
            if lt(&vc, q) != Semi::from(field.norm(&f.b) < *q) {
                out.push(format!("constants: |{}| vs {q}", f.b));
            }
            if lt(&at, q) != lt(&scaled, q) {
                out.push(format!("semi-multiplicative: {} at {q}", f.a));
            }
            if gauss < *q && lt(&vf, q) != Semi::Yes {
                out.push(format!("bounded: {f} at {q}"));
            }
        }
    }
    for w in polys.windows(2) {
        let sum = w[0].add(field, &w[1]);
        let (v0, v1, vs) = (x.eval_lin(&w[0]), x.eval_lin(&w[1]), x.eval_lin(&sum));
        for q in thresholds {
            if lt(&v0, q).is_yes() && lt(&v1, q).is_yes() && !lt(&vs, q).is_yes() {
                out.push(format!("ultrametric: {} + {} at {q}", w[0], w[1]));
            }
        }
    }
    out
}

impl From<bool> for Semi {
    fn from(b: bool) -> Self {
        if b {
            Semi::Yes
        } else {
            Semi::Unknown
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::field::{PAdicQ, TrivialQ};

    #[test]
    fn ball_values() {
        let q2 = PAdicQ::new(2).unwrap();
        let amb = Ambient::new(q2, int(1)).unwrap();
        let b = FormalBall::new(&amb, int(0), rat(1, 8)).unwrap();
        assert_eq!(ball_seminorm_lin(&q2, &b, &LinPoly::monic(&q2, &int(2))), rat(1, 2));
        let b = FormalBall::new(&amb, int(3), rat(1, 4)).unwrap();
        assert_eq!(ball_seminorm_lin(&q2, &b, &LinPoly::monic(&q2, &int(3))), rat(1, 4));
        assert_eq!(ball_seminorm_lin(&q2, &b, &LinPoly::new(int(0), int(12))), rat(1, 4));
    }

    #[test]
    fn disc_point_closed_forms() {
        let q2 = PAdicQ::new(2).unwrap();
        let amb = Ambient::new(q2, int(1)).unwrap();
        let f = RGoodFilter::disc_point(amb.clone(), int(0), rat(1, 2)).unwrap();
        let v = filter_seminorm_lin(&f, &LinPoly::monic(&q2, &int(0)));
        assert_eq!(v.as_exact(), Some(&rat(1, 2)));
        let f = RGoodFilter::disc_point(amb, int(1), int(0)).unwrap();
        let v = filter_seminorm_lin(&f, &LinPoly::monic(&q2, &int(5)));
        assert_eq!(v.as_exact(), Some(&rat(1, 4)));

        let amb = Ambient::new(TrivialQ, int(2)).unwrap();
        let f = RGoodFilter::disc_point(amb, int(0), rat(3, 2)).unwrap();
        for a in [int(0), int(1), rat(-7, 3)] {
            let v = filter_seminorm_lin(&f, &LinPoly::monic(&TrivialQ, &a));
            assert_eq!(v.as_exact(), Some(&rat(3, 2)));
        }
    }

    #[test]
    fn chain_values_decrease() {
        let q2 = PAdicQ::new(2).unwrap();
        let amb = Ambient::new(q2, int(1)).unwrap();
        let a2 = amb.clone();
        let f = RGoodFilter::chain_fn(amb, move |i| {
            FormalBall::new(&a2, int(0), rat(1, 1 << i.min(60))).unwrap()
        });
        let v = filter_seminorm_lin(&f, &LinPoly::monic(&q2, &int(0)));
        assert_eq!(v.bound(0), ExtRational::Finite(int(1)));
        assert_eq!(v.bound(3), ExtRational::Finite(rat(1, 8)));
        let c = filter_seminorm_lin(&f, &LinPoly::constant(&q2, &int(6)));
        assert_eq!(c.as_exact(), Some(&rat(1, 2)));
    }

    #[test]
    fn laws_hold_for_gauss_and_filters() {
        let q3 = PAdicQ::new(3).unwrap();
        let amb = Ambient::new(q3, int(1)).unwrap();
        let polys: Vec<_> = (0..12)
            .map(|i| LinPoly::new(q3.enumerate(i), q3.enumerate(i * 7 + 3)))
            .collect();
        let qs: Vec<_> = [rat(1, 27), rat(1, 9), rat(1, 3), int(1), int(3), int(9)].into();
        assert!(check_kseminorm_laws(&GaussNorm::new(amb.clone()), &polys, &qs, 8).is_empty());
        let f = RGoodFilter::disc_point(amb, rat(2, 5), rat(1, 9)).unwrap();
        assert!(check_kseminorm_laws(&FilterSeminorm::new(f), &polys, &qs, 8).is_empty());
    }
}
