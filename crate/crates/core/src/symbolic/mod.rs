//! Exact multivariate rational functions over a coordinate chart.

mod chart;
mod gcd;
mod polynomial;
mod rational;

pub use chart::{Chart, MAX_DIMENSION};
pub use gcd::gcd;
pub use polynomial::{rat, ratio, Monomial, Polynomial, Rational};
pub use rational::RationalFunction;
