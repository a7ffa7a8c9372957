//! Discretized truncated maximally modulated operator, its dyadic blocks and TT* kernels.

mod block;
mod chirp;
mod linearization;
mod maximal;
mod rows;
mod sampled;
mod truncated;

pub use block::{assemble_block, block_matrix, ttstar_kernel, BlockFamily, BlockOperator, BlockOutput, GridTemplate};
pub use linearization::LinearizationChoice;
pub use maximal::discrete_hl_maximal;
pub use rows::{assemble_matrix, RowKernel};
pub use sampled::SampledFunction;
pub use truncated::{
    apply_truncated, apply_truncated_estimate, apply_truncated_with, max_modulation, max_modulation_with, MaxModOptions,
    MaxModResult, MaxModRoute, TruncatedSpec,
};
