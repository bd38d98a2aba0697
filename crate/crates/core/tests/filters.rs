mod common;

use proptest::prelude::*;

use berkfilter::ball::{check_r_good, filter_member, filter_radius, Clause, FormalBall, Member, RGoodFilter};
use berkfilter::classifier::{canonicalize_trivial, TrivialCanonicalForm};
use berkfilter::exactnum::{int, rat, rpow, Rational};
use berkfilter::field::{Ambient, PAdicQ, TAdicField, TrivialQ, ValuedField};
use berkfilter::seminorm::{verify_roundtrip_f, verify_roundtrip_x, FilterSeminorm, LinPoly};

use common::{random_radius, rng};

fn probes<F: ValuedField>(
    amb: &Ambient<F>,
    seed: u64,
) -> (Vec<(LinPoly<F::Elem>, Rational)>, Vec<FormalBall<F::Elem>>) {
    let field = amb.field();
    let mut r = rng(seed);
    let mut lin = Vec::new();
    let mut balls = Vec::new();
    for i in 0..24 {
        let k = if i % 2 == 0 { field.enumerate(i) } else { field.sample(&mut r) };
        let q = random_radius(amb, &mut r);
        lin.push((LinPoly::monic(field, &k), q.clone()));
        let c = if amb.in_k_r(&k) { k } else { amb.sample_k_r(&mut r) };
        balls.push(FormalBall::unchecked(c, q));
    }
    (lin, balls)
}

fn roundtrip<F: ValuedField>(amb: Ambient<F>, seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed ^ 0x5eed);
    let k = amb.sample_k_r(&mut r);
    let limit = if seed % 5 == 0 { int(0) } else { random_radius(&amb, &mut r) };
    let filter = RGoodFilter::disc_point(amb.clone(), k, limit).unwrap();
    let (lin, balls) = probes(&amb, seed);
    let x = FilterSeminorm::new(filter.clone()).into_dyn();
    let rx = verify_roundtrip_x(x, &lin, 32);
    prop_assert!(rx.passed(), "{:?}", rx.disagreements);
    let rf = verify_roundtrip_f(&filter, &balls, 32);
    prop_assert!(rf.passed(), "{:?}", rf.disagreements);
    prop_assert!(check_r_good(&filter, 16, 16).passed());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn disc_points_roundtrip(seed in any::<u64>(), ri in 0usize..3) {
        let big_r = [rat(1, 2), int(1), int(2)][ri].clone();
        roundtrip(Ambient::new(TrivialQ, big_r.clone()).unwrap(), seed)?;
        roundtrip(Ambient::new(PAdicQ::new(2).unwrap(), big_r.clone()).unwrap(), seed)?;
        roundtrip(Ambient::new(PAdicQ::new(3).unwrap(), big_r.clone()).unwrap(), seed)?;
        roundtrip(Ambient::new(TAdicField::new(rat(1, 2)).unwrap(), big_r).unwrap(), seed)?;
    }

    #[test]
    fn trivial_canonical_forms(k in -50i64..50, num in 1i64..40, den in 1i64..20) {
        let r = rat(num, den);
        let small = Ambient::new(TrivialQ, rat(1, 2)).unwrap();
        if r <= rat(1, 2) {
            let f = RGoodFilter::disc_point(small, int(0), r.clone()).unwrap();
            prop_assert_eq!(canonicalize_trivial(&f, 8).unwrap().tag(), "RadiusOnly");
        } else {
            prop_assert!(RGoodFilter::disc_point(small, int(0), r.clone()).is_err());
        }
        let big = Ambient::new(TrivialQ, int(2)).unwrap();
        if r <= int(2) {
            let f = RGoodFilter::disc_point(big, int(k), r.clone()).unwrap();
            match canonicalize_trivial(&f, 8).unwrap() {
                TrivialCanonicalForm::RadiusOnly(v) => {
                    prop_assert!(r >= int(1));
                    prop_assert_eq!(v.as_exact(), Some(&r));
                }
                TrivialCanonicalForm::RadiusAndCenter(v, c) => {
                    prop_assert!(r < int(1));
                    prop_assert_eq!(v.as_exact(), Some(&r));
                    prop_assert_eq!(c, int(k));
                }
                TrivialCanonicalForm::Undetermined { .. } => prop_assert!(false, "disc points are decided"),
            }
        }
    }
}

fn lawful_chain(amb: &Ambient<PAdicQ>, seed: u64, len: usize) -> RGoodFilter<PAdicQ> {
    let mut r = rng(seed);
    let mut c = Rational::from_integer(0.into());
    let mut balls = Vec::new();
    for i in 0..len {
        if i > 0 {
            c += rpow(&int(2), i as i64) * amb.field().sample_integral(&mut r);
        }
        balls.push(FormalBall::new(amb, c.clone(), rpow(&rat(1, 2), i as i64)).unwrap());
    }
    RGoodFilter::chain_prefix(amb.clone(), balls).unwrap()
}

#[test]
fn law_suite() {
    let amb = Ambient::new(PAdicQ::new(2).unwrap(), int(1)).unwrap();
    for seed in 0..10 {
        let f = lawful_chain(&amb, seed, 32);
        let rep = check_r_good(&f, 64, 24);
        assert!(rep.passed(), "{:?}", rep.failures);
    }
    let ball = |k: i64, q: Rational| FormalBall::new(&amb, int(k), q).unwrap();
    let corrupted = [
        (vec![ball(0, int(1)), ball(1, rat(1, 2))], Clause::Descending),
        (vec![ball(0, int(1)), ball(0, rat(1, 2)), ball(0, rat(1, 2))], Clause::StrictRefinement),
        (vec![ball(0, rat(1, 2)), ball(0, int(1)), ball(0, rat(1, 4))], Clause::Descending),
        (vec![ball(0, int(1)), ball(2, rat(1, 2)), ball(4, rat(1, 4)), ball(3, rat(1, 8))], Clause::TotalOrder),
    ];
    for (balls, clause) in corrupted {
        let f = RGoodFilter::chain_prefix(amb.clone(), balls).unwrap();
        let rep = check_r_good(&f, 64, 8);
        assert!(rep.failures.iter().any(|x| x.clause == clause), "{clause}: {:?}", rep.failures);
    }
    let bad_center = RGoodFilter::chain_prefix(amb.clone(), vec![FormalBall::unchecked(rat(1, 2), int(1))]).unwrap();
    assert!(check_r_good(&bad_center, 8, 4).failures.iter().any(|x| x.clause == Clause::CenterInKR));
}

#[test]
fn chain_membership_and_radius() {
    let amb = Ambient::new(PAdicQ::new(2).unwrap(), int(1)).unwrap();
    let f = lawful_chain(&amb, 3, 10);
    let last = rpow(&rat(1, 2), 9);
    assert_eq!(filter_radius(&f).bound(64), berkfilter::exactnum::ExtRational::Finite(last.clone()));
    let big = FormalBall::new(&amb, int(1), int(2)).unwrap();
    assert_eq!(filter_member(&f, &big, 0), Member::Yes);
    let disc = RGoodFilter::disc_point(amb.clone(), int(0), rat(1, 4)).unwrap();
    assert_eq!(filter_member(&disc, &FormalBall::new(&amb, int(4), rat(1, 4)).unwrap(), 0), Member::No);
    assert_eq!(filter_member(&disc, &FormalBall::new(&amb, int(4), rat(1, 2)).unwrap(), 0), Member::Yes);
}
