//! Dependence distance vectors with speculative assumption tags, legality
//! of skewed and tiled schedules, and wavefront enumeration of tiles.
//!
//! The model is two-dimensional: a statement instance is a pair `(k, i)` of
//! outer and middle loop indices, and the innermost loop is folded into the
//! instance. A schedule first skews `(k, i)` by a unimodular matrix and then
//! cuts the skewed space into rectangular tiles. It is legal when every
//! dependence has a componentwise nonnegative image under the skew; tiles
//! with equal coordinate sum then form a wavefront of independent work.

mod dependence;
mod depfile;
mod interval;
mod legality;
mod wavefront;

use thiserror::Error;

pub use dependence::{gaussj_dependences, givens_dependences, DepTag, DistanceVector, NO_PIVOT, PIVOT_WEIGHT};
pub use depfile::{format_dependences, parse_dependences};
pub use interval::{Bound, IntervalInt};
pub use legality::{
    apply_skew, check_schedule, is_satisfied, speculative_partition, SkewTileSchedule, Tile, Verdict, DEFAULT_TILE,
};
pub use wavefront::{assert_wavefront_independence, wavefronts, AffineBound, IterationDomain, WavefrontPlan};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("dimension mismatch: schedule is {expected}-D, dependence is {found}-D")]
    Dimension { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
