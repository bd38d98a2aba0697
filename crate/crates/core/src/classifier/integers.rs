use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{
    fmt_rat, int, ln_enclosure, nth_root_enclosure, rat, round_down, round_up, rpow, RatInterval,
    Rational,
};
use crate::field::{int_valuation, is_prime};

/// Largest numerator or denominator accepted for an exponent `α`.
pub const MAX_ALPHA_PART: u32 = 1000;

/// One of the four shapes of a bounded multiplicative seminorm on ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntegerSeminormSpec {
    Trivial,
    /// `|n|_∞^α`, `0 < α <= 1`.
    ArchPower(Rational),
    /// `|n|_p^α`, `α > 0`.
    PAdicPower(u64, Rational),
    /// `0` on `pℤ`, `1` elsewhere.
    ResidueTrivial(u64),
}

fn alpha_parts(alpha: &Rational) -> Result<(u32, u32)> {
    let s = alpha.numer().to_u32().filter(|&s| s > 0 && s <= MAX_ALPHA_PART);
    let t = alpha.denom().to_u32().filter(|&t| t <= MAX_ALPHA_PART);
    match (s, t) {
        (Some(s), Some(t)) => Ok((s, t)),
        _ => Err(Error::InvalidParameter(format!(
            "exponent {} must be positive with numerator and denominator <= {MAX_ALPHA_PART}",
            fmt_rat(alpha)
        ))),
    }
}

impl IntegerSeminormSpec {
    /// Checks the parameter ranges.
    pub fn validate(&self) -> Result<()> {
        match self {
            IntegerSeminormSpec::Trivial => Ok(()),
            IntegerSeminormSpec::ArchPower(a) => {
                alpha_parts(a)?;
                if *a > int(1) {
                    return Err(Error::InvalidParameter(format!(
                        "archimedean exponent {} exceeds 1",
                        fmt_rat(a)
                    )));
                }
                Ok(())
            }
            IntegerSeminormSpec::PAdicPower(p, a) => {
                if !is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                alpha_parts(a).map(|_| ())
            }
            IntegerSeminormSpec::ResidueTrivial(p) => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(Error::NotPrime(*p))
                }
            }
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            IntegerSeminormSpec::Trivial => "Trivial",
            IntegerSeminormSpec::ArchPower(_) => "ArchPower",
            IntegerSeminormSpec::PAdicPower(..) => "PAdicPower",
            IntegerSeminormSpec::ResidueTrivial(_) => "ResidueTrivial",
        }
    }

    /// `(c, s, t)` with `|n| = c^(s/t)`.
    fn base_and_exponent(&self, n: &BigInt) -> Result<(Rational, u32, u32)> {
        if n.is_zero() {
            return Ok((Rational::zero(), 1, 1));
        }
        Ok(match self {
            IntegerSeminormSpec::Trivial => (int(1), 1, 1),
            IntegerSeminormSpec::ResidueTrivial(p) => {
                let divisible = (n % BigInt::from(*p)).is_zero();
                (if divisible { int(0) } else { int(1) }, 1, 1)
            }
            IntegerSeminormSpec::ArchPower(a) => {
                let (s, t) = alpha_parts(a)?;
                (Rational::from_integer(n.abs()), s, t)
            }
            IntegerSeminormSpec::PAdicPower(p, a) => {
                let (s, t) = alpha_parts(a)?;
                let v = int_valuation(n, *p);
                (rpow(&int(*p as i64), -v), s, t)
            }
        })
    }
}

impl fmt::Display for IntegerSeminormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegerSeminormSpec::Trivial => f.write_str("Trivial"),
            IntegerSeminormSpec::ArchPower(a) => write!(f, "ArchPower({})", fmt_rat(a)),
            IntegerSeminormSpec::PAdicPower(p, a) => write!(f, "PAdicPower({p}, {})", fmt_rat(a)),
            IntegerSeminormSpec::ResidueTrivial(p) => write!(f, "ResidueTrivial({p})"),
        }
    }
}

/// `|n|_x` enclosed in an interval of width `<= precision`.
pub fn eval_integer_spec(spec: &IntegerSeminormSpec, n: &BigInt, precision: &Rational) -> Result<RatInterval> {
    if !precision.is_positive() {
        return Err(Error::NonPositivePrecision(fmt_rat(precision)));
    }
    let (c, s, t) = spec.base_and_exponent(n)?;
    nth_root_enclosure(&c, s, t, precision)
}

/// Finite access to an unknown seminorm on ℤ: `less_than(n, q)` means `|n| < q`.
pub trait SeminormOracle {
    fn less_than(&self, n: &BigInt, q: &Rational) -> Result<bool>;
}

/// Exact answers synthesized from a spec: `c^(s/t) < q  iff  c^s < q^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecOracle {
    spec: IntegerSeminormSpec,
}

impl SpecOracle {
    pub fn new(spec: IntegerSeminormSpec) -> Result<Self> {
        spec.validate()?;
        Ok(SpecOracle { spec })
    }

    pub fn spec(&self) -> &IntegerSeminormSpec {
        &self.spec
    }
}

impl SeminormOracle for SpecOracle {
    fn less_than(&self, n: &BigInt, q: &Rational) -> Result<bool> {
        if !q.is_positive() {
            return Ok(false);
        }
        let (c, s, t) = self.spec.base_and_exponent(n)?;
        Ok(rpow(&c, s as i64) < rpow(q, t as i64))
    }
}

/// Recorded `(n, q, answer)` triples, optionally backed by a spec for queries
/// the table cannot settle by monotonicity.
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    table: BTreeMap<BigInt, Vec<(Rational, bool)>>,
    fallback: Option<SpecOracle>,
}

impl TableOracle {
    /// Fails when two triples for the same `n` contradict monotonicity in `q`.
    pub fn new(triples: Vec<(BigInt, Rational, bool)>, fallback: Option<SpecOracle>) -> Result<Self> {
        let mut table: BTreeMap<BigInt, Vec<(Rational, bool)>> = BTreeMap::new();
        for (n, q, b) in triples {
            let rows = table.entry(n.clone()).or_default();
            for (r, c) in rows.iter() {
                let clash = (r == &q && *c != b) || (*c && !b && r <= &q) || (!*c && b && r >= &q);
                if clash {
                    return Err(Error::OracleNotSeminorm(format!(
                        "|{n}| < {} is {c} but |{n}| < {} is {b}",
                        fmt_rat(r),
                        fmt_rat(&q)
                    )));
                }
            }
            rows.push((q, b));
        }
        Ok(TableOracle { table, fallback })
    }

    fn lookup(&self, n: &BigInt, q: &Rational) -> Option<bool> {
        let rows = self.table.get(n)?;
        if let Some((_, b)) = rows.iter().find(|(r, _)| r == q) {
            return Some(*b);
        }
        if rows.iter().any(|(r, b)| *b && r <= q) {
            return Some(true);
        }
        if rows.iter().any(|(r, b)| !*b && r >= q) {
            return Some(false);
        }
        None
    }
}

impl SeminormOracle for TableOracle {
    fn less_than(&self, n: &BigInt, q: &Rational) -> Result<bool> {
        if let Some(b) = self.lookup(n, q) {
            return Ok(b);
        }
        match &self.fallback {
            Some(o) => o.less_than(n, q),
            None => Err(Error::Unclassifiable(format!(
                "no recorded answer for |{n}| < {}",
                fmt_rat(q)
            ))),
        }
    }
}

/// Wraps an oracle, rejecting answers that are not monotone in `q`.
struct Checked<'a> {
    inner: &'a dyn SeminormOracle,
    seen: RefCell<BTreeMap<BigInt, Vec<(Rational, bool)>>>,
    queries: Cell<usize>,
}

impl<'a> Checked<'a> {
    fn new(inner: &'a dyn SeminormOracle) -> Self {
        Checked {
            inner,
            seen: RefCell::new(BTreeMap::new()),
            queries: Cell::new(0),
        }
    }

    fn ask(&self, n: u64, q: &Rational) -> Result<bool> {
        let n = BigInt::from(n);
        self.queries.set(self.queries.get() + 1);
        let answer = self.inner.less_than(&n, q)?;
        let mut seen = self.seen.borrow_mut();
        let rows = seen.entry(n.clone()).or_default();
        for (r, b) in rows.iter() {
            let clash = (*b && r <= q && !answer) || (!*b && r >= q && answer);
            if clash {
                return Err(Error::OracleNotSeminorm(format!(
                    "|{n}| < {} is {b} but |{n}| < {} is {answer}",
                    fmt_rat(r),
                    fmt_rat(q)
                )));
            }
        }
        rows.push((q.clone(), answer));
        Ok(answer)
    }
}

/// A classification with the recovered exponent enclosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classified {
    Trivial,
    ArchPower { alpha: RatInterval },
    PAdicPower { p: u64, alpha: RatInterval },
    ResidueTrivial { p: u64 },
}

impl Classified {
    pub fn tag(&self) -> &'static str {
        match self {
            Classified::Trivial => "Trivial",
            Classified::ArchPower { .. } => "ArchPower",
            Classified::PAdicPower { .. } => "PAdicPower",
            Classified::ResidueTrivial { .. } => "ResidueTrivial",
        }
    }

    pub fn alpha(&self) -> Option<&RatInterval> {
        match self {
            Classified::ArchPower { alpha } | Classified::PAdicPower { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    /// Same variant and prime, and the enclosure contains the exponent.
    pub fn agrees_with(&self, spec: &IntegerSeminormSpec) -> bool {
        match (self, spec) {
            (Classified::Trivial, IntegerSeminormSpec::Trivial) => true,
            (Classified::ArchPower { alpha }, IntegerSeminormSpec::ArchPower(a)) => alpha.contains(a),
            (Classified::PAdicPower { p, alpha }, IntegerSeminormSpec::PAdicPower(q, a)) => {
                p == q && alpha.contains(a)
            }
            (Classified::ResidueTrivial { p }, IntegerSeminormSpec::ResidueTrivial(q)) => p == q,
            _ => false,
        }
    }
}

impl fmt::Display for Classified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classified::Trivial => f.write_str("Trivial"),
            Classified::ArchPower { alpha } => write!(f, "ArchPower({alpha})"),
            Classified::PAdicPower { p, alpha } => write!(f, "PAdicPower({p}, {alpha})"),
            Classified::ResidueTrivial { p } => write!(f, "ResidueTrivial({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub result: Classified,
    pub queries: usize,
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

const MAX_BISECTIONS: usize = 400;
const GRID_BITS: u32 = 48;

fn div_lower(n: &Rational, d: &RatInterval) -> Rational {
    if n.is_negative() {
        n / &d.lo
    } else {
        n / &d.hi
    }
}

fn div_upper(n: &Rational, d: &RatInterval) -> Rational {
    if n.is_negative() {
        n / &d.hi
    } else {
        n / &d.lo
    }
}

fn outward(lo: Rational, hi: Rational) -> RatInterval {
    RatInterval {
        lo: round_down(&lo, GRID_BITS),
        hi: round_up(&hi, GRID_BITS),
    }
}

/// Bisects `|n|` inside `[lo, hi)` until `alpha_of(lo, hi)` has width `<= precision`.
fn bisect_alpha<A>(
    oracle: &Checked<'_>,
    n: u64,
    mut lo: Rational,
    mut hi: Rational,
    precision: &Rational,
    alpha_of: A,
) -> Result<RatInterval>
where
    A: Fn(&Rational, &Rational) -> Result<RatInterval>,
{
    for _ in 0..MAX_BISECTIONS {
        let alpha = alpha_of(&lo, &hi)?;
        if alpha.width() <= *precision {
            return Ok(alpha);
        }
        let mid = (&lo + &hi) / int(2);
        if oracle.ask(n, &mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::Unclassifiable(format!(
        "exponent of |{n}| not resolved after {MAX_BISECTIONS} bisections"
    )))
}

/// Decides the shape of the oracle's seminorm from the primes `<= prime_bound`.
///
/// Residue detection: some `|p| < precision`. Archimedean: some `|p| >= 1 + precision`.
/// Otherwise the primes with `|p| < 1` decide between trivial and `p`-adic.
pub fn classify_integer_seminorm(
    oracle: &dyn SeminormOracle,
    prime_bound: u64,
    precision: &Rational,
) -> Result<Classification> {
    if prime_bound < 3 {
        return Err(Error::InvalidParameter(format!("prime bound {prime_bound} < 3")));
    }
    if !precision.is_positive() || *precision >= int(1) {
        return Err(Error::NonPositivePrecision(fmt_rat(precision)));
    }
    let o = Checked::new(oracle);
    let one_plus = int(1) + precision;
    if o.ask(1, &int(1))? || !o.ask(1, &one_plus)? {
        return Err(Error::OracleNotSeminorm("|1| is not 1".to_string()));
    }
    let primes = primes_up_to(prime_bound);
    let ln_eps = precision / int(64);

    let mut zero = Vec::new();
    for &p in &primes {
        if o.ask(p, precision)? {
            zero.push(p);
        }
    }
    match zero.as_slice() {
        [] => {}
        [p] => {
            for &l in primes.iter().filter(|&&l| l != *p) {
                if o.ask(l, &int(1))? || !o.ask(l, &one_plus)? {
                    return Err(Error::Unclassifiable(format!(
                        "|{p}| vanishes but |{l}| is not 1"
                    )));
                }
            }
            return Ok(Classification {
                result: Classified::ResidueTrivial { p: *p },
                queries: o.queries.get(),
            });
        }
        [p, l, ..] => {
            return Err(Error::OracleNotSeminorm(format!("both |{p}| and |{l}| vanish")));
        }
    }

    let mut small = Vec::new();
    let mut big = Vec::new();
    for &p in &primes {
        if o.ask(p, &int(1))? {
            small.push(p);
        } else if !o.ask(p, &one_plus)? {
            big.push(p);
        }
    }

    let result = if !big.is_empty() {
        if !small.is_empty() || big.len() != primes.len() {
            return Err(Error::Unclassifiable(format!(
                "primes above 1: {big:?}, below 1: {small:?}"
            )));
        }
        if !o.ask(2, &int(3))? {
            return Err(Error::Unclassifiable("|2| >= 3".to_string()));
        }
        let ln2 = ln_enclosure(&int(2), &ln_eps)?;
        let alpha = bisect_alpha(&o, 2, int(1), int(3), precision, |lo, hi| {
            let a = ln_enclosure(lo, &ln_eps)?;
            let b = ln_enclosure(hi, &ln_eps)?;
            Ok(outward(div_lower(&a.lo, &ln2), div_upper(&b.hi, &ln2)))
        })?;
        Classified::ArchPower { alpha }
    } else {
        match small.as_slice() {
            [] => Classified::Trivial,
            [p] => {
                let p = *p;
                let lnp = ln_enclosure(&int(p as i64), &ln_eps)?;
                let alpha = bisect_alpha(&o, p, precision.clone(), int(1), precision, |lo, hi| {
                    let a = ln_enclosure(hi, &ln_eps)?;
                    let b = ln_enclosure(lo, &ln_eps)?;
                    let low = div_lower(&-&a.hi, &lnp);
                    let low = if low.is_negative() { Rational::zero() } else { low };
                    Ok(outward(low, div_upper(&-&b.lo, &lnp)))
                })?;
                Classified::PAdicPower { p, alpha }
            }
            many => {
                return Err(Error::Unclassifiable(format!(
                    "several primes below 1: {many:?}"
                )))
            }
        }
    };
    Ok(Classification {
        result,
        queries: o.queries.get(),
    })
}

/// A small list of specs spanning all four shapes, used by fixtures.
pub fn sample_specs() -> Vec<IntegerSeminormSpec> {
    use IntegerSeminormSpec::*;
    let mut v = vec![Trivial];
    for a in [rat(1, 1), rat(1, 2), rat(1, 3), rat(2, 3), rat(3, 4), rat(1, 10)] {
        v.push(ArchPower(a));
    }
    for (p, a) in [(2, rat(1, 1)), (3, rat(1, 1)), (5, rat(2, 1)), (7, rat(1, 2)), (2, rat(5, 2)), (47, rat(3, 7))] {
        v.push(PAdicPower(p, a));
    }
    for p in [2, 3, 5, 11, 13, 47] {
        v.push(ResidueTrivial(p));
    }
    v.push(PAdicPower(13, rat(7, 5)));
    v
}
