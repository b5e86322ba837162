//! Scoped worker pools for parallel loops and wavefront plans, reduction
//! slots with selectable conflict handling, and the speculation controller.

mod pool;
mod rows;
mod slots;
mod spec;

use thiserror::Error;

pub use pool::{execute_wavefronts, parallel_for, ExecConfig, ExecStatus, TileTask, THREADS_ENV};
pub use rows::{RowMut, RowRef, SharedRows};
pub use slots::{ReductionSlots, Strategy, LOCK_STRIPES};
pub use spec::{Misspeculation, SpecController};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuntimeError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("contract violation: {0}")]
    Contract(String),
}
