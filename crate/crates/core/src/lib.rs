//! Exact exterior calculus on a coordinate chart, graded differential
//! operators on forms, and verification tooling for Nambu-Poisson structures
//! and their Filippov (n-Lie) algebroids.

pub mod error;
pub mod acceptance;
pub mod cli;
pub mod dynamics;
pub mod exterior;
pub mod nambu;
pub mod operator;
pub mod parse;
pub mod random;
pub mod symbolic;

pub use error::{Error, Result};
