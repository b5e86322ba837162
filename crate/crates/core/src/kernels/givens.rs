//! Complex Givens elimination on split real/imaginary storage.
//!
//! Iteration `(k, i)` rotates rows `i` and `i + 1` over columns `k..N`,
//! taking one of three branches depending on which of the two pivots in
//! column `k` are zero. The tiled variant executes the same iterations in
//! skewed wavefront order; every scalar operation sees the same operands,
//! so the result is bitwise identical to the serial loop.

use std::sync::atomic::{AtomicU64, Ordering};

use super::KernelError;
use crate::numerics::ComplexSplitMatrix;
use crate::runtime::{execute_wavefronts, ExecConfig, SharedRows};
use crate::schedule::{wavefronts, IterationDomain, SkewTileSchedule};

/// How many times each branch of the rotation body ran.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchCounts {
    /// Row `i + 1` was zero at column `k`: plain row swap.
    pub swap: u64,
    /// Row `i` was zero at column `k`: half rotation.
    pub half: u64,
    /// General case.
    pub full: u64,
}

impl BranchCounts {
    pub fn total(&self) -> u64 {
        self.swap + self.half + self.full
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    Swap,
    Half,
    Full,
}

impl BranchCounts {
    fn record(&mut self, b: Branch) {
        match b {
            Branch::Swap => self.swap += 1,
            Branch::Half => self.half += 1,
            Branch::Full => self.full += 1,
        }
    }
}

/// Rotation body for one `(k, i)`: `r0`/`i0` are row `i`, `r1`/`i1` row `i + 1`.
#[inline]
fn rotate(k: usize, r0: &mut [f64], i0: &mut [f64], r1: &mut [f64], i1: &mut [f64]) -> Branch {
    let n = r0.len();
    if r1[k] == 0.0 && i1[k] == 0.0 {
        for j in k..n {
            let (t1_r, t1_i) = (r1[j], i1[j]);
            let (t2_r, t2_i) = (r0[j], i0[j]);
            r0[j] = t1_r;
            i0[j] = t1_i;
            r1[j] = t2_r;
            i1[j] = t2_i;
        }
        Branch::Swap
    } else if r0[k] == 0.0 && i0[k] == 0.0 {
        let ng = (r1[k] * r1[k] + i1[k] * i1[k]).sqrt();
        let s_r = r1[k] / ng;
        let s_i = -i1[k] / ng;
        for j in k..n {
            let t1_r = -s_r * r0[j] - s_i * i0[j];
            let t1_i = -s_r * i0[j] + s_i * r0[j];
            let t2_r = s_r * r1[j] - s_i * i1[j];
            let t2_i = s_r * i1[j] + s_i * r1[j];
            r0[j] = t1_r;
            i0[j] = t1_i;
            r1[j] = t2_r;
            i1[j] = t2_i;
        }
        Branch::Half
    } else {
        let nm = (r0[k] * r0[k] + i0[k] * i0[k] + r1[k] * r1[k] + i1[k] * i1[k]).sqrt();
        let nf = (r0[k] * r0[k] + i0[k] * i0[k]).sqrt();
        let sig_r = r0[k] / nf;
        let sig_i = i0[k] / nf;
        let c_r = nf / nm;
        let s_r = (sig_r * r1[k] + sig_i * i1[k]) / nm;
        let s_i = (sig_i * r1[k] - sig_r * -i1[k]) / nm;
        for j in k..n {
            let t1_r = -s_r * r0[j] - s_i * i0[j] + c_r * r1[j];
            let t1_i = -s_r * i0[j] + s_i * r0[j] + c_r * i1[j];
            let t2_r = c_r * r0[j] + s_r * r1[j] - s_i * i1[j];
            let t2_i = c_r * i0[j] + s_r * i1[j] + s_i * r1[j];
            r0[j] = t1_r;
            i0[j] = t1_i;
            r1[j] = t2_r;
            i1[j] = t2_i;
        }
        Branch::Full
    }
}

fn check_shape(a: &ComplexSplitMatrix) -> Result<(), KernelError> {
    if a.rows() < 2 {
        return Err(KernelError::Shape(format!("need at least 2 rows, got {}", a.rows())));
    }
    Ok(())
}

pub fn givens_serial(a: &mut ComplexSplitMatrix) -> Result<BranchCounts, KernelError> {
    check_shape(a)?;
    let (m, n) = (a.rows(), a.cols());
    let mut counts = BranchCounts::default();
    for k in 0..n {
        for i in 0..(m - 1).saturating_sub(k) {
            let (r0, r1) = a.re.two_rows_mut(i, i + 1);
            let (i0, i1) = a.im.two_rows_mut(i, i + 1);
            counts.record(rotate(k, r0, i0, r1, i1));
        }
    }
    Ok(counts)
}

/// Skewed and tiled execution with square `tile × tile` blocks.
pub fn givens_tiled(a: &mut ComplexSplitMatrix, tile: i64, cfg: &ExecConfig) -> Result<BranchCounts, KernelError> {
    check_shape(a)?;
    let schedule = SkewTileSchedule::wavefront(tile)?;
    let plan = wavefronts(&IterationDomain::givens(a.rows(), a.cols()), &schedule);
    let totals = [AtomicU64::new(0), AtomicU64::new(0), AtomicU64::new(0)];
    let re = SharedRows::new(&mut a.re);
    let im = SharedRows::new(&mut a.im);
    execute_wavefronts(&plan, cfg, None, |task| {
        let mut counts = BranchCounts::default();
        plan.for_each_point(task.tile, |k, i| {
            let (k, i) = (k as usize, i as usize);
            // SAFETY: tiles of one wavefront touch disjoint row pairs because
            // the skewed schedule satisfies every rotation dependence.
            let b = unsafe {
                let (mut r0, mut r1) = (re.row_mut(i), re.row_mut(i + 1));
                let (mut i0, mut i1) = (im.row_mut(i), im.row_mut(i + 1));
                rotate(k, &mut r0, &mut i0, &mut r1, &mut i1)
            };
            counts.record(b);
        });
        totals[0].fetch_add(counts.swap, Ordering::Relaxed);
        totals[1].fetch_add(counts.half, Ordering::Relaxed);
        totals[2].fetch_add(counts.full, Ordering::Relaxed);
    });
    Ok(BranchCounts {
        swap: totals[0].load(Ordering::Relaxed),
        half: totals[1].load(Ordering::Relaxed),
        full: totals[2].load(Ordering::Relaxed),
    })
}
