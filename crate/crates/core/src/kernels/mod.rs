//! Kernel, bump and phase formulas of the reduction chain.

mod bump;
mod matrix;
mod phase;
mod split;
mod taylor;

pub use bump::{bump_partition_defect, bump_psi0, h_majorizer, h_value, SqrtBranch};
pub use matrix::matrix_lower_bound_check;
pub use phase::{q_factorization, q_factorization_defect, q_lower_bound_constant, q_vector, PhaseSpec, PhaseVariant};
pub use split::{comparison_integrals, kernel_k1, kernel_k2, kernel_split_rhs, ComparisonIntegrals};
pub use taylor::{remainder_ratio, taylor_p5, TaylorPoly, TaylorSource};
