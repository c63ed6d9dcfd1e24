//! Diagonalization, the seven-factor decomposition of elementary matrices,
//! the k-factor search and random test inputs.

mod diag;
mod numeric;
mod random;
mod search;
mod seven;

pub use diag::{diagonalize_triangular, DiagonalizationResult, Orientation, Spectrum};
pub use numeric::{numeric_multistart, NumericConfig};
pub use random::{random_chain, random_elementary, random_scalar, random_symmetric, random_symplectic, random_unitriangular, rng_from_seed};
pub use search::{search_k_factor, ResidualReport, SearchOutcome, SearchStatus, SearchStrategy};
pub use seven::{
    factor_block_diag_constant, factor_block_diag_p1p2, factor_elementary_7, factor_elementary_7_with, merge_adjacent,
    nine_factor_sequence, SevenFactorResult,
};
