//! Symplectic forms, elementary matrices, standard factors and the chain
//! maps `psi` (ordered product) and `phi` (its last row).

pub(crate) mod chain;
mod elementary;
mod form;

pub use chain::{phi, psi, ElementaryChain, FactorChain, LastRowState};
pub use elementary::{ElementarySymplectic, Side, Sign, StandardFactor};
pub use form::{basis_change, is_symplectic, omega_matrix, skew_basis_conjugate, skew_identity, FormKind, SymplecticForm};
