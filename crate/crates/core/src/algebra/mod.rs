//! Exact coefficient rings and dense matrices.

mod dual;
mod gaussian;
mod matrix;
pub mod parse;
mod poly;
mod rational;
mod scalar;

pub use dual::Dual;
pub use gaussian::GaussianRational;
pub use matrix::{Matrix, ShapeTag};
pub use poly::{Monomial, MultiPoly};
pub use rational::Rational;
pub use scalar::Scalar;
