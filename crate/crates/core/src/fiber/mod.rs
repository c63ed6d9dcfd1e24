//! Geometry of the last-row map `phi`: singular set, Jacobian, strata of
//! the target space, fiber reductions and shear fields.

mod layout;
mod reduce;
mod shear;
mod singular;
mod strata;

pub use layout::{chain_values, LevelCoords, VarLayout};
pub use reduce::{reduce_fiber, verify_reduction, EliminationPlan, ReductionReport, Residual, Substitution, TrialResult};
pub use shear::{check_multilinearity, check_tangency, shear_fields, spanning_check, ShearField, SpanningReport};
pub use singular::{in_singular_set, jacobian_phi, sparse_random_chain, surjectivity_sample};
pub use strata::{classify_stratum, Family, Parity, StratumLabel};
