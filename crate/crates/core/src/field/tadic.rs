use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use super::{enumerate_rational, small_rational, ValueGroup, ValuedField};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, int, rat, rpow, Rational};

type QPoly = Vec<Rational>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn padd(a: &[Rational], b: &[Rational]) -> QPoly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn pmul(a: &[Rational], b: &[Rational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn pscale(a: &[Rational], c: &Rational) -> QPoly {
    trim(a.iter().map(|x| x * c).collect())
}

/// Euclidean division `a = q·b + r` over ℚ; `b` non-zero.
fn pdivrem(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly) {
    let mut r: QPoly = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().expect("non-empty") / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: QPoly) -> QPoly {
    match p.last() {
        Some(l) if !l.is_one() => {
            let inv = l.recip();
            pscale(&p, &inv)
        }
        _ => p,
    }
}

fn pgcd(a: &[Rational], b: &[Rational]) -> QPoly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = pdivrem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

fn ord(p: &[Rational]) -> Option<usize> {
    p.iter().position(|c| !c.is_zero())
}

/// Rational function `num/den` in `t` over ℚ, kept reduced with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: Vec<Rational>, den: Vec<Rational>) -> Result<Self> {
        let den = trim(den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(trim(num), den))
    }

    pub fn constant(q: Rational) -> Self {
        Self::reduce(vec![q], vec![int(1)])
    }

    pub fn monomial(c: Rational, e: usize) -> Self {
        let mut num = vec![Rational::zero(); e];
        num.push(c);
        Self::reduce(num, vec![int(1)])
    }

    fn reduce(num: QPoly, den: QPoly) -> Self {
        let num = trim(num);
        let den = trim(den);
        if num.is_empty() {
            return RatFunc {
                num: Vec::new(),
                den: vec![int(1)],
            };
        }
        let (num, den) = if den.len() == 1 {
            (num, den)
        } else {
            let g = pgcd(&num, &den);
            if g.len() > 1 {
                (pdivrem(&num, &g).0, pdivrem(&den, &g).0)
            } else {
                (num, den)
            }
        };
        let lead = den.last().expect("non-zero denominator").clone();
        RatFunc {
            num: pscale(&num, &lead.recip()),
            den: pscale(&den, &lead.recip()),
        }
    }

    pub fn numerator(&self) -> &[Rational] {
        &self.num
    }

    pub fn denominator(&self) -> &[Rational] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// `ord_t`, or `None` for zero.
    pub fn order(&self) -> Option<i64> {
        let n = ord(&self.num)? as i64;
        let d = ord(&self.den).expect("non-zero denominator") as i64;
        Some(n - d)
    }
}

fn fmt_qpoly(p: &[Rational]) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "-" } else { "+" });
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&fmt_rat(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{mono}", fmt_rat(&a)));
        }
    }
    out
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 {
            let s = fmt_qpoly(&self.num);
            if self.num.iter().filter(|c| !c.is_zero()).count() > 1 {
                write!(f, "({s})")
            } else {
                f.write_str(&s)
            }
        } else {
            write!(f, "({})/({})", fmt_qpoly(&self.num), fmt_qpoly(&self.den))
        }
    }
}

/// The rational function field ℚ(t) with `|f/g| = b^(ord_t f - ord_t g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TAdicField {
    base: Rational,
}

impl TAdicField {
    pub fn new(base: Rational) -> Result<Self> {
        if base.is_positive() && base < int(1) {
            Ok(TAdicField { base })
        } else {
            Err(Error::InvalidBase(fmt_rat(&base)))
        }
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }
}

impl Default for TAdicField {
    fn default() -> Self {
        TAdicField { base: rat(1, 2) }
    }
}

impl ValuedField for TAdicField {
    type Elem = RatFunc;

    fn name(&self) -> String {
        format!("tadic:{}", fmt_rat(&self.base))
    }

    fn zero(&self) -> RatFunc {
        RatFunc::constant(Rational::zero())
    }

    fn from_rational(&self, q: &Rational) -> RatFunc {
        RatFunc::constant(q.clone())
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.den == b.den {
            return RatFunc::reduce(padd(&a.num, &b.num), a.den.clone());
        }
        // p + n/d with gcd(n, d) = 1 is already reduced
        let (poly, frac) = match (a.den.len(), b.den.len()) {
            (1, _) => (a, b),
            (_, 1) => (b, a),
            _ => {
                return RatFunc::reduce(
                    padd(&pmul(&a.num, &b.den), &pmul(&b.num, &a.den)),
                    pmul(&a.den, &b.den),
                )
            }
        };
        let num = padd(&pmul(&poly.num, &frac.den), &frac.num);
        if num.is_empty() {
            return self.zero();
        }
        RatFunc {
            num,
            den: frac.den.clone(),
        }
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let cancel = |n: &[Rational], d: &[Rational]| {
            if d.len() == 1 {
                return (n.to_vec(), d.to_vec());
            }
            let g = pgcd(n, d);
            if g.len() > 1 {
                (pdivrem(n, &g).0, pdivrem(d, &g).0)
            } else {
                (n.to_vec(), d.to_vec())
            }
        };
        let (an, bd) = cancel(&a.num, &b.den);
        let (bn, ad) = cancel(&b.num, &a.den);
        let num = pmul(&an, &bn);
        let den = pmul(&ad, &bd);
        let lead = den.last().expect("non-zero denominator").recip();
        RatFunc {
            num: pscale(&num, &lead),
            den: pscale(&den, &lead),
        }
    }

    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        (!a.is_zero()).then(|| RatFunc::reduce(a.den.clone(), a.num.clone()))
    }

    fn norm(&self, a: &RatFunc) -> Rational {
        match a.order() {
            None => Rational::zero(),
            Some(o) => rpow(&self.base, o),
        }
    }

    fn value_group(&self) -> ValueGroup {
        ValueGroup::Cyclic {
            generator: self.base.clone(),
        }
    }

    fn uniformizer(&self) -> Option<RatFunc> {
        Some(RatFunc::monomial(int(1), 1))
    }

    fn variable(&self) -> Option<RatFunc> {
        self.uniformizer()
    }

    fn enumerate(&self, index: usize) -> RatFunc {
        const SHIFTS: [i64; 5] = [0, 1, -1, 2, -2];
        let q = enumerate_rational(index / SHIFTS.len());
        let e = SHIFTS[index % SHIFTS.len()];
        let mono = RatFunc::monomial(q, e.unsigned_abs() as usize);
        if e >= 0 || mono.is_zero() {
            mono
        } else {
            RatFunc::reduce(mono.den, mono.num)
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> RatFunc {
        if rng.gen_ratio(1, 8) {
            return self.zero();
        }
        let unit = self.sample_unit(rng);
        let e: i64 = rng.gen_range(-2..=3);
        let shift = if e >= 0 {
            RatFunc::monomial(int(1), e as usize)
        } else {
            RatFunc::reduce(vec![int(1)], RatFunc::monomial(int(1), (-e) as usize).num)
        };
        self.mul(&unit, &shift)
    }

    fn sample_integral(&self, rng: &mut dyn RngCore) -> RatFunc {
        let deg = rng.gen_range(0..=2);
        let num = (0..=deg)
            .map(|_| {
                if rng.gen_ratio(1, 3) {
                    Rational::zero()
                } else {
                    small_rational(rng, None)
                }
            })
            .collect();
        RatFunc::reduce(num, vec![int(1)])
    }
}

impl TAdicField {
    /// Random element of norm exactly 1 with a small numerator and denominator.
    fn sample_unit(&self, rng: &mut dyn RngCore) -> RatFunc {
        let num = vec![small_rational(rng, None), self.maybe_coeff(rng)];
        let den = if rng.gen_bool(0.5) {
            vec![int(1)]
        } else {
            vec![small_rational(rng, None), self.maybe_coeff(rng)]
        };
        RatFunc::reduce(num, den)
    }

    fn maybe_coeff(&self, rng: &mut dyn RngCore) -> Rational {
        if rng.gen_bool(0.5) {
            Rational::zero()
        } else {
            small_rational(rng, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> TAdicField {
        TAdicField::default()
    }

    #[test]
    fn norm_of_t_squared_over_one_plus_t() {
        let f = field();
        let x = RatFunc::new(vec![int(0), int(0), int(1)], vec![int(1), int(1)]).unwrap();
        assert_eq!(f.norm(&x), rat(1, 4));
        let y = f.inv(&x).unwrap();
        assert_eq!(f.norm(&y), int(4));
    }

    #[test]
    fn reduction_is_canonical() {
        // (t^2 - 1)/(2t - 2) = (t + 1)/2
        let x = RatFunc::new(vec![int(-1), int(0), int(1)], vec![int(-2), int(2)]).unwrap();
        let y = RatFunc::new(vec![rat(1, 2), rat(1, 2)], vec![int(1)]).unwrap();
        assert_eq!(x, y);
        let f = field();
        assert!(f.is_zero(&f.sub(&x, &y)));
    }

    #[test]
    fn field_arithmetic() {
        let f = field();
        let t = f.variable().unwrap();
        let one = f.one();
        let a = f.div(&one, &f.add(&one, &t)).unwrap();
        let b = f.mul(&a, &f.add(&one, &t));
        assert_eq!(b, one);
        assert!(RatFunc::new(vec![int(1)], vec![]).is_err());
    }

    #[test]
    fn display() {
        let x = RatFunc::new(vec![int(1), int(0), int(1)], vec![int(0), int(2)]).unwrap();
        assert_eq!(x.to_string(), "(1/2*t^2+1/2)/(t)");
        assert_eq!(RatFunc::monomial(rat(-3, 2), 2).to_string(), "-3/2*t^2");
        assert_eq!(RatFunc::constant(int(0)).to_string(), "0");
    }

    #[test]
    fn base_must_be_sub_unit() {
        assert!(TAdicField::new(int(1)).is_err());
        assert!(TAdicField::new(int(0)).is_err());
        assert!(TAdicField::new(rat(1, 3)).is_ok());
    }
}
