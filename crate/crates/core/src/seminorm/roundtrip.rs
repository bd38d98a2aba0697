use std::fmt;
use std::sync::Arc;

use crate::ball::{filter_member, FormalBall, Member, RGoodFilter};
use crate::exactnum::{rmax, rmin, upper_lt, ExtRational, Rational, Semi, UpperReal};
use crate::field::{Ambient, ValuedField};

use super::{filter_seminorm_lin, gauss_norm_lin, FilterSeminorm, KSeminorm, LinPoly};

/// `F_x = {B_q(k) : k ∈ K_R, |T − k|_x < q}` as a membership view.
#[derive(Clone)]
pub struct SeminormFilter<F: ValuedField> {
    x: Arc<dyn KSeminorm<F>>,
}

impl<F: ValuedField> fmt::Debug for SeminormFilter<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeminormFilter").finish_non_exhaustive()
    }
}

pub fn seminorm_to_filter<F: ValuedField>(x: Arc<dyn KSeminorm<F>>) -> SeminormFilter<F> {
    SeminormFilter { x }
}

impl<F: ValuedField> SeminormFilter<F> {
    pub fn ambient(&self) -> &Ambient<F> {
        self.x.ambient()
    }

    pub fn member(&self, ball: &FormalBall<F::Elem>, depth: usize) -> Semi {
        if !self.ambient().in_k_r(ball.center()) {
            return Semi::Unknown;
        }
        let field = self.ambient().field();
        upper_lt(&self.x.eval_lin(&LinPoly::monic(field, ball.center())), ball.radius(), depth)
    }

    /// `|f|_{F_x}`. The bound at depth `d` is the least of the Gauss bound and
    /// `max(|ak − b|, |a|·β)` over candidate centers `k` (the root `b/a` when it
    /// lies in `K_R`, then the first `d + 1` enumerated elements of `K_R`), where
    /// `β` is the depth-`d` bound of `|T − k|_x`.
    pub fn seminorm_lin(&self, f: &LinPoly<F::Elem>) -> UpperReal {
        let amb = self.ambient().clone();
        let field = amb.field().clone();
        if field.is_zero(&f.a) {
            return UpperReal::Exact(field.norm(&f.b));
        }
        let cap = gauss_norm_lin(&field, f, amb.radius());
        let root = field
            .div(&f.b, &f.a)
            .filter(|r| amb.in_k_r(r));
        let x = self.x.clone();
        let f = f.clone();
        let na = field.norm(&f.a);
        // candidates and their bounds only improve with d, so the stream is monotone
        UpperReal::monotone(move |d| {
            let mut best = cap.clone();
            let enumerated = (0..=d).map(|i| field.enumerate(i)).filter(|k| amb.in_k_r(k));
            for k in root.clone().into_iter().chain(enumerated) {
                let beta = x.eval_lin(&LinPoly::monic(&field, &k)).bound(d);
                let ExtRational::Finite(beta) = beta else {
                    continue;
                };
                let ak_b = field.norm(&field.sub(&field.mul(&f.a, &k), &f.b));
                best = rmin(&best, &rmax(&ak_b, &(&na * beta)));
            }
            ExtRational::Finite(best)
        }, None)
    }
}

impl<F: ValuedField> KSeminorm<F> for SeminormFilter<F> {
    fn ambient(&self) -> &Ambient<F> {
        self.x.ambient()
    }

    fn eval_lin(&self, f: &LinPoly<F::Elem>) -> UpperReal {
        self.seminorm_lin(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub index: usize,
    pub probe: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub probes: usize,
    pub disagreements: Vec<Disagreement>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares `x(f) < q` against `|f|_{F_x} < q` for each probe; a disagreement
/// is any probe where exactly one side answers `Yes`.
pub fn verify_roundtrip_x<F: ValuedField>(
    x: Arc<dyn KSeminorm<F>>,
    probes: &[(LinPoly<F::Elem>, Rational)],
    depth: usize,
) -> RoundtripReport {
    let view = seminorm_to_filter(x.clone());
    let disagreements = probes
        .iter()
        .enumerate()
        .filter_map(|(index, (f, q))| {
            let left = upper_lt(&x.eval_lin(f), q, depth);
            let right = upper_lt(&view.seminorm_lin(f), q, depth);
            (left != right).then(|| Disagreement {
                index,
                probe: format!("{f} < {}", crate::exactnum::fmt_rat(q)),
                left: left.to_string(),
                right: right.to_string(),
            })
        })
        .collect();
    RoundtripReport {
        probes: probes.len(),
        disagreements,
    }
}

/// Compares `B ∈ F` against `|T − center|_F < radius` for each probe ball.
pub fn verify_roundtrip_f<F: ValuedField>(
    filter: &RGoodFilter<F>,
    probe_balls: &[FormalBall<F::Elem>],
    depth: usize,
) -> RoundtripReport {
    let x = FilterSeminorm::new(filter.clone());
    let view = seminorm_to_filter(Arc::new(x) as Arc<dyn KSeminorm<F>>);
    let field = filter.field();
    let disagreements = probe_balls
        .iter()
        .enumerate()
        .filter_map(|(index, b)| {
            let left = filter_member(filter, b, depth) == Member::Yes;
            let via = view.member(b, depth).is_yes();
            let direct = upper_lt(
                &filter_seminorm_lin(filter, &LinPoly::monic(field, b.center())),
                b.radius(),
                depth,
            )
            .is_yes();
            (left != via || left != direct).then(|| Disagreement {
                index,
                probe: b.to_string(),
                left: filter_member(filter, b, depth).to_string(),
                right: Semi::from(direct).to_string(),
            })
        })
        .collect();
    RoundtripReport {
        probes: probe_balls.len(),
        disagreements,
    }
}
