//! Parallel execution of loop nests whose dependences depend on the data.
//!
//! The crate combines static loop transformation with run-time techniques:
//!
//! - [`schedule`] models dependences as distance vectors, optionally tagged
//!   with the speculative assumption that removes them, and checks skewed
//!   and tiled schedules for legality.
//! - [`runtime`] executes wavefront plans and parallel loops on scoped
//!   worker pools, and provides reduction slots (locked, atomic or
//!   privatized) and a speculation controller.
//! - [`kernels`] holds the computations: a symmetric block-sparse
//!   matrix-vector product with a scattered reduction, a guarded argmax
//!   update, a complex Givens rotation sweep, and Gauss-Jordan forward
//!   elimination that speculates on nonzero pivots.
//! - [`adaptive`] picks a reduction strategy from the workload footprint.
//! - [`bench`] runs kernel/strategy/thread grids against serial oracles.

pub mod adaptive;
pub mod bench;
pub mod kernels;
pub mod numerics;
pub mod runtime;
pub mod schedule;

/// The guide's chapters, compiled as doc-tests so their snippets stay in
/// sync with the code.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dependences.md")]
    mod dependences {}
    #[doc = include_str!("../../../book/src/wavefronts.md")]
    mod wavefronts {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/speculation.md")]
    mod speculation {}
    #[doc = include_str!("../../../book/src/bench.md")]
    mod bench {}
}
