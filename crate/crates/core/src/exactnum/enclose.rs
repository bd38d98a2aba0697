//! Rigorous rational enclosures of roots and logarithms.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use super::{fmt_rat, int, rat, rpow, Rational};
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn point(v: Rational) -> Self {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

/// Largest multiple of `2^-bits` that is `<= q`.
pub fn round_down(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let n = (q * Rational::from_integer(scale.clone())).floor().to_integer();
    Rational::new(n, scale)
}

/// Smallest multiple of `2^-bits` that is `>= q`.
pub fn round_up(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let n = (q * Rational::from_integer(scale.clone())).ceil().to_integer();
    Rational::new(n, scale)
}

fn exact_root(q: &Rational, t: u32) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude().nth_root(t);
    let d = q.denom().magnitude().nth_root(t);
    if n.pow(t) == *q.numer().magnitude() && d.pow(t) == *q.denom().magnitude() {
        Some(Rational::new(
            BigInt::from_biguint(Sign::Plus, n),
            BigInt::from_biguint(Sign::Plus, d),
        ))
    } else {
        None
    }
}

/// Encloses `c^(s/t)` for `c >= 0` in an interval of width `<= precision`.
/// Perfect powers come back as degenerate intervals.
pub fn nth_root_enclosure(c: &Rational, s: u32, t: u32, precision: &Rational) -> Result<RatInterval> {
    if !precision.is_positive() {
        return Err(Error::NonPositivePrecision(fmt_rat(precision)));
    }
    if c.is_negative() || t == 0 {
        return Err(Error::InvalidParameter(format!(
            "root of {} with exponent {s}/{t}",
            fmt_rat(c)
        )));
    }
    let target = rpow(c, s as i64);
    if let Some(r) = exact_root(&target, t) {
        return Ok(RatInterval::point(r));
    }
    let mut lo = Rational::zero();
    let mut hi = if target > int(1) { target.clone() } else { int(1) };
    let two = int(2);
    while &hi - &lo > *precision {
        let mid = (&lo + &hi) / &two;
        if rpow(&mid, t as i64) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RatInterval { lo, hi })
}

/// `atanh(z)` for `0 <= z < 1`, as an interval of width `<= eps`.
fn atanh_enclosure(z: &Rational, eps: &Rational) -> RatInterval {
    debug_assert!(!z.is_negative() && *z < int(1));
    if z.is_zero() {
        return RatInterval::point(Rational::zero());
    }
    let z2 = z * z;
    let one_minus = int(1) - &z2;
    let mut sum = Rational::zero();
    let mut power = z.clone();
    let mut k: i64 = 0;
    loop {
        sum += &power / int(2 * k + 1);
        power *= &z2;
        k += 1;
        // remaining terms are bounded by the geometric tail
        let tail = &power / (int(2 * k + 1) * &one_minus);
        if tail <= *eps {
            return RatInterval {
                lo: sum.clone(),
                hi: sum + tail,
            };
        }
    }
}

/// Natural logarithm of `x > 0`, enclosed with width `<= precision`.
pub fn ln_enclosure(x: &Rational, precision: &Rational) -> Result<RatInterval> {
    if !x.is_positive() {
        return Err(Error::InvalidParameter(format!("ln of {}", fmt_rat(x))));
    }
    if !precision.is_positive() {
        return Err(Error::NonPositivePrecision(fmt_rat(precision)));
    }
    // x = 2^k * y with y in [2/3, 4/3]
    let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut y = x / rpow(&int(2), k);
    while y > rat(4, 3) {
        y /= int(2);
        k += 1;
    }
    while y < rat(2, 3) {
        y *= int(2);
        k -= 1;
    }
    let eps = precision / int(8 * (k.abs() + 1));
    let z = (&y - int(1)) / (&y + int(1));
    let a = atanh_enclosure(&z.abs(), &eps);
    let (ln_y_lo, ln_y_hi) = if z.is_negative() {
        (-&a.hi * int(2), -&a.lo * int(2))
    } else {
        (&a.lo * int(2), &a.hi * int(2))
    };
    let l2 = atanh_enclosure(&rat(1, 3), &eps);
    let (l2_lo, l2_hi) = (&l2.lo * int(2), &l2.hi * int(2));
    let kq = int(k);
    let (k_lo, k_hi) = if k >= 0 {
        (&kq * &l2_lo, &kq * &l2_hi)
    } else {
        (&kq * &l2_hi, &kq * &l2_lo)
    };
    Ok(RatInterval {
        lo: ln_y_lo + k_lo,
        hi: ln_y_hi + k_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(q: &Rational) -> f64 {
        use num_traits::ToPrimitive;
        q.to_f64().unwrap()
    }

    #[test]
    fn perfect_roots_are_points() {
        let r = nth_root_enclosure(&rat(1, 4), 1, 2, &rat(1, 1000)).unwrap();
        assert_eq!(r, RatInterval::point(rat(1, 2)));
        let r = nth_root_enclosure(&rat(1, 4), 1, 1, &rat(1, 1000)).unwrap();
        assert_eq!(r, RatInterval::point(rat(1, 4)));
    }

    #[test]
    fn sqrt_two_enclosure() {
        let p = rat(1, 1_000_000);
        let r = nth_root_enclosure(&int(2), 1, 2, &p).unwrap();
        assert!(r.width() <= p);
        assert!(rpow(&r.lo, 2) <= int(2) && rpow(&r.hi, 2) > int(2));
    }

    #[test]
    fn ln_two_contains_float_value() {
        let p = rat(1, 1_000_000_000);
        let r = ln_enclosure(&int(2), &p).unwrap();
        assert!(r.width() <= p);
        let v = std::f64::consts::LN_2;
        assert!(approx(&r.lo) <= v + 1e-15 && v - 1e-15 <= approx(&r.hi));
    }

    #[test]
    fn ln_small_and_large() {
        let p = rat(1, 1_000_000);
        for (x, v) in [(rat(1, 1000), (0.001f64).ln()), (int(12345), 12345f64.ln()), (int(1), 0.0)] {
            let r = ln_enclosure(&x, &p).unwrap();
            assert!(r.width() <= p, "width for {x}");
            assert!(approx(&r.lo) <= v + 1e-12 && v - 1e-12 <= approx(&r.hi), "{x}: {r}");
        }
    }

    #[test]
    fn directed_rounding() {
        let q = rat(1, 3);
        assert!(round_down(&q, 10) <= q && q <= round_up(&q, 10));
        assert_eq!(round_down(&rat(1, 2), 4), rat(1, 2));
    }
}
