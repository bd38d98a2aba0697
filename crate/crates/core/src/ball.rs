//! Formal balls `B_q(k)`, their inclusion order, and `R`-good filters.
//!
//! A formal ball is a pair `(k, q)` with `k ∈ K_R` and `q > 0`; inclusion is the
//! syntactic relation `B_q'(k') ⊆ B_q(k)  iff  |k − k'| < q and q' <= q`, never a
//! comparison of point sets. Filters are presented by generators:
//!
//! * `DiscPoint(k, r)` denotes `{B_q(a) : max(|k − a|, r) < q}`;
//! * `Chain` denotes the upward closure of a ⊆-descending sequence of balls,
//!   together with every ball of radius `> R`.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, int, rat, rmax, rmin, ExtRational, Rational, UpperReal};
use crate::field::{Ambient, ValuedField};

/// The pair `(center, radius)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalBall<E> {
    center: E,
    radius: Rational,
}

impl<E: Clone + fmt::Display> FormalBall<E> {
    /// Checked constructor: `radius > 0` and `center ∈ K_R`.
    pub fn new<F>(ambient: &Ambient<F>, center: E, radius: Rational) -> Result<Self>
    where
        F: ValuedField<Elem = E>,
    {
        if !radius.is_positive() {
            return Err(Error::NonPositiveBallRadius(fmt_rat(&radius)));
        }
        ambient.check_center(&center)?;
        Ok(FormalBall { center, radius })
    }

    /// Skips validation; only for building deliberately broken fixtures.
    pub fn unchecked(center: E, radius: Rational) -> Self {
        FormalBall { center, radius }
    }

    pub fn center(&self) -> &E {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }
}

impl<E: fmt::Display> fmt::Display for FormalBall<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}; {})", fmt_rat(&self.radius), self.center)
    }
}

/// `inner ⊆ outer`.
pub fn ball_included<F: ValuedField>(
    field: &F,
    inner: &FormalBall<F::Elem>,
    outer: &FormalBall<F::Elem>,
) -> bool {
    inner.radius <= outer.radius
        && field.norm(&field.sub(&outer.center, &inner.center)) < outer.radius
}

/// Mutual inclusion. Equal balls always have equal radii.
pub fn ball_equal<F: ValuedField>(field: &F, a: &FormalBall<F::Elem>, b: &FormalBall<F::Elem>) -> bool {
    ball_included(field, a, b) && ball_included(field, b, a)
}

/// Three-valued membership answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Member {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Member::Yes => "yes",
            Member::No => "no",
            Member::Unknown => "unknown",
        })
    }
}

type LazyChain<E> = Arc<dyn Fn(usize) -> FormalBall<E> + Send + Sync>;

/// A ⊆-descending sequence of generators: either a finite fixture prefix or a
/// productive depth-indexed function.
#[derive(Clone)]
pub enum Chain<E> {
    Prefix(Arc<[FormalBall<E>]>),
    Lazy(LazyChain<E>),
}

impl<E: Clone> Chain<E> {
    pub fn len(&self) -> Option<usize> {
        match self {
            Chain::Prefix(p) => Some(p.len()),
            Chain::Lazy(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn get(&self, index: usize) -> Option<FormalBall<E>> {
        match self {
            Chain::Prefix(p) => p.get(index).cloned(),
            Chain::Lazy(f) => Some(f(index)),
        }
    }

    /// Generators with index `<= depth`.
    pub fn prefix(&self, depth: usize) -> Vec<FormalBall<E>> {
        match self {
            Chain::Prefix(p) => p.iter().take(depth + 1).cloned().collect(),
            Chain::Lazy(f) => (0..=depth).map(|i| f(i)).collect(),
        }
    }

    /// Number of generators visible at `depth`.
    pub fn visible(&self, depth: usize) -> usize {
        match self {
            Chain::Prefix(p) => p.len().min(depth + 1),
            Chain::Lazy(_) => depth + 1,
        }
    }
}

impl<E: fmt::Debug> fmt::Debug for Chain<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chain::Prefix(p) => f.debug_tuple("Prefix").field(&p).finish(),
            Chain::Lazy(_) => f.write_str("Lazy(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FilterGenerator<E> {
    DiscPoint { center: E, limit_radius: Rational },
    Chain(Chain<E>),
}

/// An `R`-good filter of formal balls, presented by its generator.
#[derive(Clone, Debug)]
pub struct RGoodFilter<F: ValuedField> {
    ambient: Ambient<F>,
    generator: FilterGenerator<F::Elem>,
}

impl<F: ValuedField> RGoodFilter<F> {
    /// Nested discs shrinking onto the closed disc of radius `limit_radius`
    /// around `center`; `limit_radius = 0` is the evaluation point.
    pub fn disc_point(ambient: Ambient<F>, center: F::Elem, limit_radius: Rational) -> Result<Self> {
        ambient.check_center(&center)?;
        if limit_radius.is_negative() || limit_radius > *ambient.radius() {
            return Err(Error::LimitRadiusOutOfRange {
                radius: fmt_rat(&limit_radius),
                bound: fmt_rat(ambient.radius()),
            });
        }
        Ok(RGoodFilter {
            ambient,
            generator: FilterGenerator::DiscPoint {
                center,
                limit_radius,
            },
        })
    }

    /// Finite chain prefix. Laws are not checked here; see [`check_r_good`].
    pub fn chain_prefix(ambient: Ambient<F>, balls: Vec<FormalBall<F::Elem>>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::EmptyChain);
        }
        Ok(RGoodFilter {
            ambient,
            generator: FilterGenerator::Chain(Chain::Prefix(balls.into())),
        })
    }

    pub fn chain_fn<G>(ambient: Ambient<F>, generator: G) -> Self
    where
        G: Fn(usize) -> FormalBall<F::Elem> + Send + Sync + 'static,
    {
        RGoodFilter {
            ambient,
            generator: FilterGenerator::Chain(Chain::Lazy(Arc::new(generator))),
        }
    }

    pub fn ambient(&self) -> &Ambient<F> {
        &self.ambient
    }

    pub fn field(&self) -> &F {
        self.ambient.field()
    }

    pub fn generator(&self) -> &FilterGenerator<F::Elem> {
        &self.generator
    }
}

/// Membership of `ball` in `filter`. Disc points decide; chains semi-decide
/// from the generators with index `<= depth` and the large-ball clause.
///
/// A chain member must contain a generator of strictly smaller radius, so a
/// finite prefix is read as the rounded filter it generates.
pub fn filter_member<F: ValuedField>(
    filter: &RGoodFilter<F>,
    ball: &FormalBall<F::Elem>,
    depth: usize,
) -> Member {
    let field = filter.field();
    match &filter.generator {
        FilterGenerator::DiscPoint {
            center,
            limit_radius,
        } => {
            let d = field.norm(&field.sub(center, &ball.center));
            if rmax(&d, limit_radius) < ball.radius {
                Member::Yes
            } else {
                Member::No
            }
        }
        FilterGenerator::Chain(chain) => {
            if ball.radius > *filter.ambient.radius() && filter.ambient.in_k_r(&ball.center) {
                return Member::Yes;
            }
            let hit = chain
                .prefix(depth)
                .iter()
                .any(|g| g.radius < ball.radius && ball_included(field, g, ball));
            if hit {
                Member::Yes
            } else {
                Member::Unknown
            }
        }
    }
}

/// `rad_F = {q : some B_q(·) ∈ F}` as an upper real in `[0, R]`.
pub fn filter_radius<F: ValuedField>(filter: &RGoodFilter<F>) -> UpperReal {
    match &filter.generator {
        FilterGenerator::DiscPoint { limit_radius, .. } => UpperReal::Exact(limit_radius.clone()),
        FilterGenerator::Chain(chain) => {
            let r = filter.ambient.radius().clone();
            let len = chain.len();
            let chain = chain.clone();
            let bounds = move |d: usize| {
                let rd = match chain.get(d.min(len.map_or(d, |n| n - 1))) {
                    Some(b) => rmin(&r, b.radius()),
                    None => r.clone(),
                };
                ExtRational::Finite(rd)
            };
            match len {
                Some(n) => UpperReal::certified(bounds, n - 1),
                None => UpperReal::from_bounds(bounds),
            }
        }
    }
}

/// Which filter law a verifier found broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    CenterInKR,
    LimitRadius,
    Descending,
    TotalOrder,
    StrictRefinement,
    UpwardClosure,
    PairwiseIntersection,
    LargeBalls,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::CenterInKR => "center in K_R",
            Clause::LimitRadius => "limit radius in [0, R]",
            Clause::Descending => "descending chain",
            Clause::TotalOrder => "totally ordered by inclusion",
            Clause::StrictRefinement => "strictly smaller radius",
            Clause::UpwardClosure => "upward closure",
            Clause::PairwiseIntersection => "pairwise intersection",
            Clause::LargeBalls => "balls of radius > R",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawFailure<E> {
    pub clause: Clause,
    pub witness: FormalBall<E>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport<E> {
    pub checks: usize,
    pub failures: Vec<LawFailure<E>>,
}

impl<E> LawReport<E> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Checker<E> {
    checks: usize,
    failures: Vec<LawFailure<E>>,
}

impl<E: Clone> Checker<E> {
    fn check(&mut self, ok: bool, clause: Clause, witness: &FormalBall<E>, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(LawFailure {
                clause,
                witness: witness.clone(),
                detail: detail(),
            });
        }
    }
}

const VERIFIER_SEED: u64 = 0x0b5e_55ed;

fn positive_offset(rng: &mut dyn RngCore, scale: &Rational) -> Rational {
    let n: i64 = rng.gen_range(1..=16);
    scale * rat(n, 16)
}

/// Bounded verifier for the filter laws on the generators visible at `depth`
/// plus `samples` randomly drawn member balls. A pass certifies the prefix only.
pub fn check_r_good<F: ValuedField>(
    filter: &RGoodFilter<F>,
    depth: usize,
    samples: usize,
) -> LawReport<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFIER_SEED);
    let mut ck = Checker {
        checks: 0,
        failures: Vec::new(),
    };
    let amb = &filter.ambient;
    let field = amb.field();
    let big_r = amb.radius().clone();

    for _ in 0..samples {
        let k = amb.sample_k_r(&mut rng);
        let q = &big_r + positive_offset(&mut rng, &big_r);
        let b = FormalBall::unchecked(k, q);
        ck.check(
            filter_member(filter, &b, depth) == Member::Yes,
            Clause::LargeBalls,
            &b,
            || "ball of radius > R is not a member".to_string(),
        );
    }

    match &filter.generator {
        FilterGenerator::DiscPoint {
            center,
            limit_radius,
        } => {
            let point = FormalBall::unchecked(center.clone(), limit_radius.clone());
            ck.check(amb.in_k_r(center), Clause::CenterInKR, &point, || {
                "disc center outside K_R".to_string()
            });
            ck.check(
                !limit_radius.is_negative() && *limit_radius <= big_r,
                Clause::LimitRadius,
                &point,
                || "limit radius outside [0, R]".to_string(),
            );
            let mut members = Vec::new();
            for _ in 0..samples.max(2) {
                let a = amb.sample_k_r(&mut rng);
                let floor = rmax(&field.norm(&field.sub(center, &a)), limit_radius);
                let q = &floor + positive_offset(&mut rng, &big_r);
                members.push((FormalBall::unchecked(a, q), floor));
            }
            for (b, floor) in &members {
                ck.check(
                    filter_member(filter, b, depth) == Member::Yes,
                    Clause::UpwardClosure,
                    b,
                    || "sampled member rejected".to_string(),
                );
                let smaller = FormalBall::unchecked(b.center.clone(), (floor + &b.radius) / int(2));
                ck.check(
                    smaller.radius < b.radius && filter_member(filter, &smaller, depth) == Member::Yes,
                    Clause::StrictRefinement,
                    b,
                    || format!("no member of radius < {}", fmt_rat(&b.radius)),
                );
                let bigger = superset(field, b, false, &mut rng);
                ck.check(
                    !ball_included(field, b, &bigger)
                        || filter_member(filter, &bigger, depth) == Member::Yes,
                    Clause::UpwardClosure,
                    &bigger,
                    || format!("superset of member {b} rejected"),
                );
            }
            for pair in members.windows(2) {
                let (b1, b2) = (&pair[0].0, &pair[1].0);
                let meet = FormalBall::unchecked(center.clone(), rmin(&b1.radius, &b2.radius));
                let ok = filter_member(filter, &meet, depth) == Member::Yes
                    && ball_included(field, &meet, b1)
                    && ball_included(field, &meet, b2);
                ck.check(ok, Clause::PairwiseIntersection, &meet, || {
                    format!("no common member below {b1} and {b2}")
                });
            }
        }
        FilterGenerator::Chain(chain) => {
            let gens = chain.prefix(depth);
            for g in &gens {
                ck.check(amb.in_k_r(&g.center), Clause::CenterInKR, g, || {
                    "generator center outside K_R".to_string()
                });
                ck.check(g.radius.is_positive(), Clause::StrictRefinement, g, || {
                    "non-positive radius".to_string()
                });
            }
            for (i, w) in gens.windows(2).enumerate() {
                ck.check(ball_included(field, &w[1], &w[0]), Clause::Descending, &w[1], || {
                    format!("generator {} is not contained in generator {i}", i + 1)
                });
            }
            for i in 0..gens.len() {
                for j in i + 1..gens.len() {
                    ck.check(
                        ball_included(field, &gens[j], &gens[i]),
                        Clause::TotalOrder,
                        &gens[j],
                        || format!("generators {i} and {j} are not comparable"),
                    );
                }
            }
            // the last visible generator has no visible successor; it is not judged
            for i in 0..gens.len().saturating_sub(1) {
                let refined = gens[i + 1..].iter().any(|g| g.radius < gens[i].radius);
                ck.check(refined, Clause::StrictRefinement, &gens[i], || {
                    format!("no later generator has radius < {}", fmt_rat(&gens[i].radius))
                });
            }
            if !gens.is_empty() {
                let mut members = Vec::new();
                for _ in 0..samples {
                    let last = gens.len() - 1;
                    let i = rng.gen_range(0..last.max(1));
                    let b = superset(field, &gens[i], i == last, &mut rng);
                    if amb.in_k_r(&b.center) {
                        members.push((i, b));
                    }
                }
                for (i, b) in &members {
                    ck.check(
                        filter_member(filter, b, depth) == Member::Yes,
                        Clause::UpwardClosure,
                        b,
                        || format!("superset of generator {i} rejected"),
                    );
                }
                for pair in members.windows(2) {
                    let (i, b1) = &pair[0];
                    let (j, b2) = &pair[1];
                    let g = &gens[(*i).max(*j)];
                    ck.check(
                        ball_included(field, g, b1) && ball_included(field, g, b2),
                        Clause::PairwiseIntersection,
                        g,
                        || format!("generator does not refine both {b1} and {b2}"),
                    );
                }
            }
        }
    }
    LawReport {
        checks: ck.checks,
        failures: ck.failures,
    }
}

/// A ball containing `b`: same radius (unless `strict`) or larger, center moved within the disc.
fn superset<F: ValuedField>(
    field: &F,
    b: &FormalBall<F::Elem>,
    strict: bool,
    rng: &mut dyn RngCore,
) -> FormalBall<F::Elem> {
    let grow = if !strict && rng.gen_bool(0.5) {
        b.radius.clone()
    } else {
        &b.radius + positive_offset(rng, &b.radius)
    };
    // |s·u| <= |s| <= radius/2 < grow
    let shift = field
        .disc_scale(&(&b.radius / int(2)))
        .map(|s| field.mul(&s, &field.sample_integral(rng)))
        .unwrap_or_else(|| field.zero());
    let center = if field.is_zero(&shift) {
        b.center.clone()
    } else {
        field.add(&b.center, &shift)
    };
    FormalBall::unchecked(center, grow)
}
