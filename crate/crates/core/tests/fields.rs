mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use berkfilter::exactnum::{int, rat, rmax, Rational};
use berkfilter::field::{Ambient, PAdicQ, TAdicField, TrivialQ, ValueGroup, ValuedField};

use common::{naive_padic_norm, rng};

fn rational() -> impl Strategy<Value = Rational> {
    (-5000i64..5000, 1i64..5000).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn norm_laws<F: ValuedField>(field: &F, seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    for _ in 0..8 {
        let (x, y) = (field.sample(&mut r), field.sample(&mut r));
        prop_assert_eq!(field.norm(&field.mul(&x, &y)), field.norm(&x) * field.norm(&y));
        prop_assert!(field.norm(&field.add(&x, &y)) <= rmax(&field.norm(&x), &field.norm(&y)));
        prop_assert_eq!(field.norm(&x) == int(0), field.is_zero(&x));
        prop_assert_eq!(field.norm(&field.neg(&x)), field.norm(&x));
        if let Some(inv) = field.inv(&x) {
            prop_assert_eq!(field.mul(&x, &inv), field.one());
        }
        let n = field.norm(&x);
        prop_assert!(n == int(0) || field.value_group().contains(&n));
        let u = field.sample_integral(&mut r);
        prop_assert!(field.norm(&u) <= int(1));
    }
    Ok(())
}

proptest! {
    #[test]
    fn padic_norm_matches_division_count(q in rational(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 97])) {
        let f = PAdicQ::new(p).unwrap();
        prop_assert_eq!(f.norm(&q), naive_padic_norm(&q, p));
    }

    #[test]
    fn trivial_norm_is_indicator(q in rational()) {
        prop_assert_eq!(TrivialQ.norm(&q), if q == int(0) { int(0) } else { int(1) });
    }

    #[test]
    fn norm_laws_hold(seed in any::<u64>()) {
        norm_laws(&TrivialQ, seed)?;
        norm_laws(&PAdicQ::new(2).unwrap(), seed)?;
        norm_laws(&PAdicQ::new(3).unwrap(), seed)?;
        norm_laws(&TAdicField::new(rat(1, 2)).unwrap(), seed)?;
        norm_laws(&TAdicField::new(rat(2, 3)).unwrap(), seed)?;
    }

    #[test]
    fn disc_scale_is_largest_group_element(num in 1i64..200, den in 1i64..200) {
        let r = rat(num, den);
        let q2 = PAdicQ::new(2).unwrap();
        let s = q2.disc_scale(&r).unwrap();
        prop_assert!(q2.norm(&s) <= r);
        prop_assert!(q2.norm(&s) * int(2) > r);
    }

    #[test]
    fn k_r_samples_stay_inside(seed in any::<u64>(), num in 1i64..8, den in 1i64..8) {
        let amb = Ambient::new(PAdicQ::new(3).unwrap(), rat(num, den)).unwrap();
        let mut g = rng(seed);
        for _ in 0..8 {
            prop_assert!(amb.in_k_r(&amb.sample_k_r(&mut g)));
        }
    }
}

#[test]
fn tadic_enumeration_and_sampling_are_total() {
    let f = TAdicField::new(rat(1, 2)).unwrap();
    for i in 0..500 {
        let k = f.enumerate(i);
        assert!(f.norm(&k) == int(0) || f.value_group().contains(&f.norm(&k)));
    }
    let mut g = rng(7);
    for _ in 0..2000 {
        f.sample(&mut g);
    }
    assert_eq!(f.enumerate(0), f.zero());
}

#[test]
fn field_examples() {
    let q2 = PAdicQ::new(2).unwrap();
    assert_eq!(q2.norm(&rat(12, 5)), rat(1, 4));
    assert_eq!(q2.value_group(), ValueGroup::Cyclic { generator: rat(1, 2) });
    assert!(PAdicQ::new(9).is_err());
    assert!(TAdicField::new(int(1)).is_err());
    assert!(Ambient::new(TrivialQ, int(0)).is_err());
    let t = TAdicField::new(rat(1, 3)).unwrap();
    let x = t.variable().unwrap();
    assert_eq!(t.norm(&t.pow(&x, 3)), rat(1, 27));
    assert_eq!(t.norm(&t.inv(&x).unwrap()), int(3));
}
