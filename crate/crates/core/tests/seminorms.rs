mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

use berkfilter::ball::{ball_included, FormalBall, RGoodFilter};
use berkfilter::exactnum::{int, rat, rmax, rpow, to_exact, upper_lt, ExtRational, Rational, Semi};
use berkfilter::field::{Ambient, PAdicQ, TAdicField, TrivialQ, ValuedField};
use berkfilter::seminorm::{
    check_kseminorm_laws, filter_seminorm_lin, filter_seminorm_poly, gauss_norm_poly, hat_ball_poly,
    max_modulus_oracle, product_ball_poly, series_enclosure, BallSeminorm, FilterSeminorm, GaussNorm,
    KSeminorm, LinPoly, Poly, TruncSeries,
};

use common::{random_ball, random_factored, random_poly, rng, taylor_oracle};

fn ambients() -> (Ambient<TrivialQ>, Ambient<PAdicQ>, Ambient<PAdicQ>, Ambient<TAdicField>) {
    (
        Ambient::new(TrivialQ, int(2)).unwrap(),
        Ambient::new(PAdicQ::new(2).unwrap(), int(1)).unwrap(),
        Ambient::new(PAdicQ::new(3).unwrap(), rat(1, 3)).unwrap(),
        Ambient::new(TAdicField::new(rat(1, 2)).unwrap(), int(1)).unwrap(),
    )
}

fn hat_properties<F: ValuedField>(amb: &Ambient<F>, seed: u64) -> Result<(), TestCaseError> {
    let field = amb.field();
    let mut r = rng(seed);
    let ball = random_ball(amb, &mut r);
    let (f, g) = (random_poly(field, &mut r, 3), random_poly(field, &mut r, 3));
    let hf = hat_ball_poly(field, &ball, &f);
    prop_assert_eq!(&hf, &taylor_oracle(field, ball.center(), ball.radius(), &f));
    let hg = hat_ball_poly(field, &ball, &g);
    prop_assert_eq!(hat_ball_poly(field, &ball, &f.mul(field, &g)), &hf * &hg);
    prop_assert!(hat_ball_poly(field, &ball, &f.add(field, &g)) <= rmax(&hf, &hg));

    let c = field.sample(&mut r);
    prop_assert_eq!(hat_ball_poly(field, &ball, &Poly::new(field, vec![c.clone()])), field.norm(&c));

    let bigger = FormalBall::unchecked(ball.center().clone(), ball.radius() * rat(3, 2));
    prop_assert!(ball_included(field, &ball, &bigger));
    prop_assert!(hf <= hat_ball_poly(field, &bigger, &f));
    prop_assert!(hf <= gauss_norm_poly(field, &f, &(amb.radius() * rat(3, 2))));

    let p = random_factored(field, &mut r, 4);
    prop_assert_eq!(product_ball_poly(field, &ball, &p).unwrap(), hat_ball_poly(field, &ball, &p));
    Ok(())
}

fn filter_bounds<F: ValuedField>(amb: &Ambient<F>, seed: u64) -> Result<(), TestCaseError> {
    let field = amb.field();
    let mut r = rng(seed);
    let b = random_ball(amb, &mut r);
    let disc = RGoodFilter::disc_point(amb.clone(), b.center().clone(), b.radius().clone()).unwrap();
    let f = random_poly(field, &mut r, 4);
    let v = filter_seminorm_poly(&disc, &f);
    prop_assert_eq!(v.as_exact(), Some(&hat_ball_poly(field, &b, &f)));
    prop_assert!(v.as_exact().unwrap() <= &gauss_norm_poly(field, &f, amb.radius()));

    let lin = LinPoly::new(field.sample(&mut r), field.sample(&mut r));
    let vl = filter_seminorm_lin(&disc, &lin);
    prop_assert_eq!(vl.as_exact(), Some(&hat_ball_poly(field, &b, &Poly::from_lin(field, &lin))));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hat_seminorm_properties(seed in any::<u64>()) {
        let (a, b, c, d) = ambients();
        hat_properties(&a, seed)?;
        hat_properties(&b, seed)?;
        hat_properties(&c, seed)?;
        hat_properties(&d, seed)?;
    }

    #[test]
    fn disc_filters_are_bounded_by_gauss(seed in any::<u64>()) {
        let (a, b, c, d) = ambients();
        filter_bounds(&a, seed)?;
        filter_bounds(&b, seed)?;
        filter_bounds(&c, seed)?;
        filter_bounds(&d, seed)?;
    }

    #[test]
    fn chain_values_descend_to_the_limit(seed in any::<u64>(), len in 2usize..12) {
        let amb = Ambient::new(PAdicQ::new(2).unwrap(), int(1)).unwrap();
        let field = amb.field().clone();
        let mut r = rng(seed);
        let mut center = Rational::from_integer(0.into());
        let mut balls = Vec::new();
        for i in 0..len {
            let q = rpow(&rat(1, 2), i as i64);
            if i > 0 && r.gen_bool(0.5) {
                center += rpow(&int(2), i as i64);
            }
            balls.push(FormalBall::new(&amb, center.clone(), q).unwrap());
        }
        let last = balls.last().unwrap().clone();
        let chain = RGoodFilter::chain_prefix(amb.clone(), balls).unwrap();
        let f = random_poly(&field, &mut r, 4);
        let v = filter_seminorm_poly(&chain, &f);
        for d in 0..len {
            prop_assert!(v.bound(d + 1) <= v.bound(d));
        }
        prop_assert_eq!(to_exact(&v, len), Some(hat_ball_poly(&field, &last, &f)));
        prop_assert!(v.bound(0) <= ExtRational::Finite(gauss_norm_poly(&field, &f, amb.radius())));
    }

    #[test]
    fn telescoping_bound(seed in any::<u64>(), m in 0usize..5, extra in 1usize..5) {
        let amb = Ambient::new(PAdicQ::new(3).unwrap(), int(1)).unwrap();
        let field = amb.field();
        let mut r = rng(seed);
        let disc = RGoodFilter::disc_point(amb.clone(), amb.sample_k_r(&mut r), rat(1, 3)).unwrap();
        let n = m + extra;
        let coeffs: Vec<Rational> = (0..=n).map(|_| field.sample(&mut r)).collect();
        let value = |k: usize| {
            filter_seminorm_poly(&disc, &Poly::new(field, coeffs[..=k].to_vec())).as_exact().unwrap().clone()
        };
        let (vn, vm) = (value(n), value(m));
        let gap = (vn.clone() - vm.clone()).abs();
        let bound = (m + 1..=n).map(|i| field.norm(&coeffs[i])).max().unwrap();
        prop_assert!(gap <= bound);
    }
}

#[test]
fn centers_outside_k_r_are_rejected() {
    let amb = Ambient::new(PAdicQ::new(2).unwrap(), rat(1, 2)).unwrap();
    let e = FormalBall::new(&amb, int(1), rat(1, 4)).unwrap_err();
    assert_eq!(e.code(), "center_not_in_k_r");
    assert!(RGoodFilter::disc_point(amb.clone(), rat(1, 2), rat(1, 4)).is_err());
    assert!(RGoodFilter::disc_point(amb.clone(), int(2), rat(1, 4)).is_ok());
    assert!(FormalBall::new(&amb, int(0), int(0)).is_err());
    assert!(RGoodFilter::disc_point(amb, int(0), int(1)).is_err());
}

#[test]
fn worked_values() {
    let q2 = PAdicQ::new(2).unwrap();
    let amb = Ambient::new(q2, int(1)).unwrap();
    let disc = RGoodFilter::disc_point(amb.clone(), int(0), rat(1, 2)).unwrap();
    let f = Poly::new(&q2, vec![int(-1), int(0), int(1)]);
    assert_eq!(filter_seminorm_poly(&disc, &f).as_exact(), Some(&int(1)));

    let ball = FormalBall::new(&amb, int(1), rat(1, 4)).unwrap();
    let g = Poly::from_factors(&q2, int(3), vec![int(1), int(-1)]);
    assert_eq!(hat_ball_poly(&q2, &ball, &g), rat(1, 8));
    assert!(product_ball_poly(&q2, &ball, &f).is_err());

    let triv = Ambient::new(TrivialQ, rat(1, 2)).unwrap();
    let d = RGoodFilter::disc_point(triv, int(0), rat(1, 4)).unwrap();
    let s = TruncSeries::new(vec![int(1); 11], rpow(&rat(1, 2), 11)).unwrap();
    let e = series_enclosure(&d, &s, 0);
    assert!(e.contains(&int(1)));
    assert_eq!(e.width(), Some(rpow(&rat(1, 2), 11) * int(2)));
}

#[test]
fn max_modulus_on_q2() {
    let q2 = PAdicQ::new(2).unwrap();
    let amb = Ambient::new(q2, int(1)).unwrap();
    let ball = FormalBall::new(&amb, int(1), rat(1, 2)).unwrap();
    let f = Poly::from_factors(&q2, int(1), vec![int(3), rat(1, 3)]);
    let rep = max_modulus_oracle(&q2, &ball, &f, 16, 1);
    assert!(rep.sound());
    assert!(rep.witness.is_some());
    assert_eq!(rep.bound, hat_ball_poly(&q2, &ball, &f));
}

#[test]
fn kseminorm_laws_hold_for_shipped_seminorms() {
    let amb = Ambient::new(PAdicQ::new(2).unwrap(), int(2)).unwrap();
    let field = *amb.field();
    let polys: Vec<_> = (0..12)
        .map(|i| LinPoly::new(field.enumerate(i + 1), field.enumerate(3 * i)))
        .collect();
    let qs: Vec<Rational> = [rat(1, 8), rat(1, 2), int(1), int(3), int(8)].to_vec();
    let ball = FormalBall::new(&amb, int(1), rat(1, 2)).unwrap();
    let seminorms: Vec<Box<dyn KSeminorm<PAdicQ>>> = vec![
        Box::new(GaussNorm::new(amb.clone())),
        Box::new(BallSeminorm::new(amb.clone(), ball)),
        Box::new(FilterSeminorm::new(RGoodFilter::disc_point(amb.clone(), int(4), int(0)).unwrap())),
    ];
    for x in &seminorms {
        assert!(check_kseminorm_laws(x.as_ref(), &polys, &qs, 8).is_empty());
    }
    let g = GaussNorm::new(amb);
    let t = LinPoly::monic(&field, &field.zero());
    assert_eq!(upper_lt(&g.eval_lin(&t), &int(2), 0), Semi::Unknown);
}
