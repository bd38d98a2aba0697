//! Classification of seminorms on ℤ from a finite oracle, and canonical forms
//! of filters over trivially valued fields.

mod integers;
mod trivial;

pub use integers::{
    classify_integer_seminorm, eval_integer_spec, sample_specs, Classification, Classified,
    IntegerSeminormSpec, SeminormOracle, SpecOracle, TableOracle, MAX_ALPHA_PART,
};
pub use trivial::{canonicalize_trivial, TrivialCanonicalForm};
