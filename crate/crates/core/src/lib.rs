//! Exact arithmetic for non-Archimedean seminorms on polynomial rings,
//! formal balls, `R`-good filters, and the correspondence between them.

pub mod ball;
pub mod classifier;
pub mod error;
pub mod exactnum;
pub mod field;
pub mod seminorm;

pub use error::{Error, Result};
