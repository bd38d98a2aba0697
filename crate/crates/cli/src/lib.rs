//! Command-line front end: parsing, printing and command dispatch.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod lower;
pub mod parse;
pub mod tree;
