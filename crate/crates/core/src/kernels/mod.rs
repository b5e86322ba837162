//! The four benchmark kernels, each as a serial oracle plus its parallel
//! variant.
//!
//! * [`smvp`]: symmetric block-sparse matrix-vector product whose scatter
//!   is a sparse reduction.
//! * [`argmax`]: a guarded max-update keyed by a data-dependent index.
//! * [`givens`]: complex Givens elimination, run as skewed and tiled
//!   wavefronts.
//! * [`gaussj`]: Gauss-Jordan forward elimination that speculates no row
//!   swaps are needed and recovers when one is.

pub mod argmax;
pub mod gaussj;
pub mod givens;
pub mod smvp;

pub use argmax::{argmax_update_parallel, argmax_update_serial, ArgmaxInput, ArgmaxStrategy};
pub use gaussj::{gaussj_serial, gaussj_speculative, gaussj_speculative_traced, GaussjResult, SpecTrace, TraceEvent};
pub use givens::{givens_serial, givens_tiled, BranchCounts};
pub use smvp::{max_scaled_error, smvp_error_scale, smvp_parallel, smvp_serial, SmvpInput, MAX_BLOCK};

use crate::numerics::NumericsError;
use crate::runtime::RuntimeError;
use crate::schedule::ScheduleError;

#[derive(Debug, thiserror::Error)]
pub enum KernelError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular matrix: no nonzero pivot at step {step}")]
    Singular { step: usize },
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
