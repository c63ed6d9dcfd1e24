//! Exact factorization of symplectic matrices into unitriangular factors.

pub mod algebra;
pub mod bounds;
pub mod error;
pub mod factor;
pub mod fiber;
pub mod io;
pub mod symplectic;

pub use error::{Error, Result};
