use std::fmt;

use crate::ball::{filter_radius, FilterGenerator, RGoodFilter};
use crate::error::{Error, Result};
use crate::exactnum::{int, to_exact, upper_lt, Semi, UpperReal, DEFAULT_DEPTH};
use crate::field::{ValueGroup, ValuedField};

/// Canonical description of an `R`-good filter over a trivially valued field.
#[derive(Clone, Debug)]
pub enum TrivialCanonicalForm<E> {
    /// Determined by the radius alone.
    RadiusOnly(UpperReal),
    /// Radius below 1 together with the unique center.
    RadiusAndCenter(UpperReal, E),
    /// Neither case could be proved from the generators up to `depth`.
    Undetermined { depth: usize },
}

impl<E> TrivialCanonicalForm<E> {
    pub fn tag(&self) -> &'static str {
        match self {
            TrivialCanonicalForm::RadiusOnly(_) => "RadiusOnly",
            TrivialCanonicalForm::RadiusAndCenter(..) => "RadiusAndCenter",
            TrivialCanonicalForm::Undetermined { .. } => "Undetermined",
        }
    }
}

impl<E: fmt::Display> fmt::Display for TrivialCanonicalForm<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrivialCanonicalForm::RadiusOnly(r) => write!(f, "RadiusOnly({})", r.describe(DEFAULT_DEPTH)),
            TrivialCanonicalForm::RadiusAndCenter(r, k) => {
                write!(f, "RadiusAndCenter({}, {k})", r.describe(DEFAULT_DEPTH))
            }
            TrivialCanonicalForm::Undetermined { depth } => write!(f, "undetermined at depth {depth}"),
        }
    }
}

/// Over a trivially valued field, balls of radius `<= 1` contain only their
/// center, so a filter whose radius drops below 1 pins a unique center. With
/// `R < 1` every center is `0` and the radius is everything.
pub fn canonicalize_trivial<F: ValuedField>(
    filter: &RGoodFilter<F>,
    depth: usize,
) -> Result<TrivialCanonicalForm<F::Elem>> {
    let field = filter.field();
    if field.value_group() != ValueGroup::Trivial {
        return Err(Error::NotTriviallyValued);
    }
    let rad = filter_radius(filter);
    if *filter.ambient().radius() < int(1) {
        return Ok(TrivialCanonicalForm::RadiusOnly(rad));
    }
    match filter.generator() {
        FilterGenerator::DiscPoint {
            center,
            limit_radius,
        } => Ok(if *limit_radius < int(1) {
            TrivialCanonicalForm::RadiusAndCenter(rad, center.clone())
        } else {
            TrivialCanonicalForm::RadiusOnly(rad)
        }),
        FilterGenerator::Chain(chain) => {
            let gens = chain.prefix(depth);
            let mut unit = gens.iter().filter(|g| *g.radius() <= int(1));
            let first = unit.next().map(|g| g.center().clone());
            if let Some(k) = &first {
                if let Some(other) = unit.find(|g| g.center() != k) {
                    return Err(Error::NotAFilter(k.to_string(), other.center().to_string()));
                }
            }
            match first {
                Some(k) if upper_lt(&rad, &int(1), depth) == Semi::Yes => {
                    Ok(TrivialCanonicalForm::RadiusAndCenter(rad, k))
                }
                _ => match to_exact(&rad, depth) {
                    Some(v) if v >= int(1) => Ok(TrivialCanonicalForm::RadiusOnly(rad)),
                    _ => Ok(TrivialCanonicalForm::Undetermined { depth }),
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::FormalBall;
    use crate::exactnum::{rat, Rational};
    use crate::field::{Ambient, PAdicQ, TrivialQ};

    fn amb(r: Rational) -> Ambient<TrivialQ> {
        Ambient::new(TrivialQ, r).unwrap()
    }

    #[test]
    fn examples() {
        let f = RGoodFilter::disc_point(amb(rat(1, 2)), int(0), rat(1, 4)).unwrap();
        assert_eq!(canonicalize_trivial(&f, 8).unwrap().tag(), "RadiusOnly");

        let f = RGoodFilter::disc_point(amb(int(2)), int(5), rat(3, 2)).unwrap();
        match canonicalize_trivial(&f, 8).unwrap() {
            TrivialCanonicalForm::RadiusOnly(r) => assert_eq!(r.as_exact(), Some(&rat(3, 2))),
            other => panic!("{other}"),
        }

        let f = RGoodFilter::disc_point(amb(int(2)), int(5), rat(1, 2)).unwrap();
        match canonicalize_trivial(&f, 8).unwrap() {
            TrivialCanonicalForm::RadiusAndCenter(r, k) => {
                assert_eq!(r.as_exact(), Some(&rat(1, 2)));
                assert_eq!(k, int(5));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn chains() {
        let a = amb(int(2));
        let a2 = a.clone();
        let f = RGoodFilter::chain_fn(a.clone(), move |i| {
            let q = rat(3, 2) / int(1 << i.min(40));
            FormalBall::new(&a2, if i == 0 { int(9) } else { int(4) }, q).unwrap()
        });
        match canonicalize_trivial(&f, 8).unwrap() {
            TrivialCanonicalForm::RadiusAndCenter(_, k) => assert_eq!(k, int(4)),
            other => panic!("{other}"),
        }

        let corrupt = vec![
            FormalBall::new(&a, int(0), int(1)).unwrap(),
            FormalBall::new(&a, int(3), rat(1, 2)).unwrap(),
        ];
        let f = RGoodFilter::chain_prefix(a.clone(), corrupt).unwrap();
        assert_eq!(canonicalize_trivial(&f, 8).unwrap_err().code(), "not_a_filter");

        let wide = vec![
            FormalBall::new(&a, int(0), int(2)).unwrap(),
            FormalBall::new(&a, int(0), rat(5, 4)).unwrap(),
        ];
        let f = RGoodFilter::chain_prefix(a.clone(), wide).unwrap();
        match canonicalize_trivial(&f, 8).unwrap() {
            TrivialCanonicalForm::RadiusOnly(r) => assert_eq!(to_exact(&r, 8), Some(rat(5, 4))),
            other => panic!("{other}"),
        }

        let a3 = a.clone();
        let f = RGoodFilter::chain_fn(a, move |i| {
            FormalBall::new(&a3, int(0), int(1) + rat(1, 1 << (i + 1).min(40))).unwrap()
        });
        assert_eq!(canonicalize_trivial(&f, 8).unwrap().tag(), "Undetermined");
    }

    #[test]
    fn rejects_nontrivial_fields() {
        let a = Ambient::new(PAdicQ::new(2).unwrap(), int(1)).unwrap();
        let f = RGoodFilter::disc_point(a, int(0), rat(1, 2)).unwrap();
        assert_eq!(canonicalize_trivial(&f, 8).unwrap_err(), Error::NotTriviallyValued);
    }
}
