#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use berkfilter::ball::FormalBall;
use berkfilter::exactnum::{int, Rational};
use berkfilter::field::{Ambient, ValueGroup, ValuedField};
use berkfilter::seminorm::Poly;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `v_p` of a non-zero rational by repeated division.
pub fn naive_valuation(q: &Rational, p: u64) -> i64 {
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            v += 1;
        }
        v
    };
    count(q.numer()) - count(q.denom())
}

pub fn naive_padic_norm(q: &Rational, p: u64) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let v = naive_valuation(q, p);
    let base = Rational::from_integer(BigInt::from(p));
    if v >= 0 {
        (0..v).fold(Rational::one(), |a, _| a / &base)
    } else {
        (0..-v).fold(Rational::one(), |a, _| a * &base)
    }
}

fn binom(n: usize, k: usize) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * int((n - i) as i64) / int((i + 1) as i64);
    }
    r
}

/// `max_i |f^{(i)}(k)/i!| r^i` with the Taylor coefficients expanded by the binomial theorem.
pub fn taylor_oracle<F: ValuedField>(field: &F, k: &F::Elem, r: &Rational, f: &Poly<F::Elem>) -> Rational {
    let c = f.coeffs();
    let mut best = Rational::zero();
    let mut rp = Rational::one();
    for i in 0..c.len() {
        let mut a = field.zero();
        for (j, cj) in c.iter().enumerate().skip(i) {
            let term = field.mul(&field.mul(cj, &field.pow(k, (j - i) as u32)), &field.from_rational(&binom(j, i)));
            a = field.add(&a, &term);
        }
        let v = field.norm(&a) * &rp;
        if v > best {
            best = v;
        }
        rp *= r;
    }
    best
}

pub fn random_poly<F: ValuedField>(field: &F, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly<F::Elem> {
    let d = rng.gen_range(0..=max_deg);
    let coeffs = (0..=d).map(|_| field.sample(rng)).collect();
    Poly::new(field, coeffs)
}

pub fn random_factored<F: ValuedField>(field: &F, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly<F::Elem> {
    let lead = loop {
        let c = field.sample(rng);
        if !field.is_zero(&c) {
            break c;
        }
    };
    let roots = (0..rng.gen_range(0..=max_deg)).map(|_| field.sample(rng)).collect();
    Poly::from_factors(field, lead, roots)
}

/// A radius in `(0, R]`, from the value group half of the time when it is non-trivial.
pub fn random_radius<F: ValuedField>(amb: &Ambient<F>, rng: &mut ChaCha8Rng) -> Rational {
    let big_r = amb.radius().clone();
    if let ValueGroup::Cyclic { generator } = amb.field().value_group() {
        if rng.gen_bool(0.5) {
            let mut q = Rational::one();
            while q > big_r {
                q *= &generator;
            }
            for _ in 0..rng.gen_range(0..4) {
                q *= &generator;
            }
            return q;
        }
    }
    big_r * Rational::new(BigInt::from(rng.gen_range(1..=16)), BigInt::from(16))
}

pub fn random_ball<F: ValuedField>(amb: &Ambient<F>, rng: &mut ChaCha8Rng) -> FormalBall<F::Elem> {
    let k = amb.sample_k_r(rng);
    FormalBall::new(amb, k, random_radius(amb, rng)).expect("center sampled in K_R")
}
