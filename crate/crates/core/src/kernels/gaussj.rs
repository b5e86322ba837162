//! Gauss-Jordan forward elimination with pivoting on demand.
//!
//! The speculative variant assumes every diagonal element is nonzero, which
//! lets the update iterations `U(k, i)` run as skewed wavefronts. The
//! first update of each step checks its pivot. On a zero pivot, later
//! steps stop, the unfinished updates of earlier steps are completed
//! serially, the row swap is performed, and elimination restarts at the
//! offending step. No update of a step `>= k` can have run before step
//! `k`'s check, so nothing has to be rolled back.

use std::sync::Mutex;

use super::KernelError;
use crate::numerics::DenseMatrix;
use crate::runtime::{execute_wavefronts, ExecConfig, ExecStatus, SharedRows, SpecController};
use crate::schedule::{wavefronts, IterationDomain, SkewTileSchedule};

#[derive(Clone, Debug, PartialEq)]
pub struct GaussjResult {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    /// `(step, row)` for every row exchange, in step order.
    pub swaps: Vec<(usize, usize)>,
    /// Recovery rounds; always 0 for the serial kernel.
    pub misspeculations: usize,
}

impl GaussjResult {
    /// Same matrices bit for bit and the same swap list.
    pub fn same_output(&self, other: &GaussjResult) -> bool {
        self.a.bitwise_eq(&other.a) && self.b.bitwise_eq(&other.b) && self.swaps == other.swaps
    }
}

fn check_shape(a: &DenseMatrix, b: &DenseMatrix) -> Result<usize, KernelError> {
    let n = a.rows();
    if !a.is_square() || n < 2 {
        return Err(KernelError::Shape(format!(
            "need a square matrix with n >= 2, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != n || b.cols() != 1 {
        return Err(KernelError::Shape(format!(
            "right-hand side is {}x{}, expected {n}x1",
            b.rows(),
            b.cols()
        )));
    }
    Ok(n)
}

pub fn gaussj_serial(mut a: DenseMatrix, mut b: DenseMatrix) -> Result<GaussjResult, KernelError> {
    let n = check_shape(&a, &b)?;
    let mut swaps = Vec::new();
    for k in 0..n - 1 {
        if a[(k, k)] == 0.0 {
            let mut amax = a[(k, k)].abs();
            let mut m = k;
            for i in k + 1..n {
                let aabs = a[(i, k)].abs();
                if aabs > amax {
                    amax = aabs;
                    m = i;
                }
            }
            if amax == 0.0 {
                return Err(KernelError::Singular { step: k });
            }
            if m != k {
                b.swap_rows(m, k);
                for j in k..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(m, j)];
                    a[(m, j)] = t;
                }
                swaps.push((k, m));
            }
        }
        for i in k + 1..n {
            let xfac = a[(i, k)] / a[(k, k)];
            for j in k + 1..n {
                a[(i, j)] -= xfac * a[(k, j)];
            }
            b[(i, 0)] -= xfac * b[(k, 0)];
        }
    }
    Ok(GaussjResult {
        a,
        b,
        swaps,
        misspeculations: 0,
    })
}

/// Events logged by [`gaussj_speculative_traced`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// `U(k, i)` is about to run.
    Update { k: usize, i: usize },
    /// The pivot check of step `k` found a zero.
    Detect { k: usize },
    /// Serial pivot search and swap for step `k` during recovery.
    Pivot { k: usize },
}

/// Totally ordered event log; an event's position is its timestamp.
#[derive(Debug, Default)]
pub struct SpecTrace {
    log: Mutex<Vec<TraceEvent>>,
}

impl SpecTrace {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&self, e: TraceEvent) {
        self.log.lock().unwrap_or_else(|p| p.into_inner()).push(e);
    }

    pub fn events(&self) -> Vec<TraceEvent> {
        self.log.lock().unwrap_or_else(|p| p.into_inner()).clone()
    }
}

/// `U(k, i)`: eliminate column `k` from row `i` using row `k`.
#[inline]
fn update(k: usize, row_k: &[f64], row_i: &mut [f64], b_k: f64, b_i: &mut f64) {
    let xfac = row_i[k] / row_k[k];
    for j in k + 1..row_k.len() {
        row_i[j] -= xfac * row_k[j];
    }
    *b_i -= xfac * b_k;
}

fn update_owned(a: &mut DenseMatrix, b: &mut DenseMatrix, k: usize, i: usize) {
    let (row_k, row_i) = a.two_rows_mut(k, i);
    let b_k = b[(k, 0)];
    update(k, row_k, row_i, b_k, &mut b[(i, 0)]);
}

pub fn gaussj_speculative(
    a: DenseMatrix,
    b: DenseMatrix,
    tile: i64,
    cfg: &ExecConfig,
) -> Result<GaussjResult, KernelError> {
    speculate(a, b, tile, cfg, None)
}

/// [`gaussj_speculative`] that also logs every update, detection and pivot.
pub fn gaussj_speculative_traced(
    a: DenseMatrix,
    b: DenseMatrix,
    tile: i64,
    cfg: &ExecConfig,
    trace: &SpecTrace,
) -> Result<GaussjResult, KernelError> {
    speculate(a, b, tile, cfg, Some(trace))
}

fn speculate(
    mut a: DenseMatrix,
    mut b: DenseMatrix,
    tile: i64,
    cfg: &ExecConfig,
    trace: Option<&SpecTrace>,
) -> Result<GaussjResult, KernelError> {
    let n = check_shape(&a, &b)?;
    let schedule = SkewTileSchedule::wavefront(tile)?;
    let log = |e| {
        if let Some(t) = trace {
            t.push(e);
        }
    };
    let mut swaps = Vec::new();
    let mut misspeculations = 0;
    let mut k0 = 0;
    while k0 < n - 1 {
        let plan = wavefronts(&IterationDomain::gaussj(n, k0), &schedule);
        let ctl = SpecController::new((0..n).map(|k| k + 1).collect());
        let status = {
            let rows = SharedRows::new(&mut a);
            let rhs = SharedRows::new(&mut b);
            execute_wavefronts(&plan, cfg, Some(&ctl), |task| {
                plan.for_each_point(task.tile, |k, i| {
                    let (k, i) = (k as usize, i as usize);
                    if ctl.blocks(k) {
                        return;
                    }
                    // SAFETY: within a wavefront, row k is only read and row i
                    // only written by this iteration; the schedule orders
                    // every other access to them.
                    unsafe {
                        let row_k = rows.row(k);
                        if i == k + 1 && row_k[k] == 0.0 {
                            log(TraceEvent::Detect { k });
                            ctl.report_misspeculation(k, task.wavefront);
                            return;
                        }
                        log(TraceEvent::Update { k, i });
                        let b_k = rhs.row(k)[0];
                        update(k, &row_k, &mut rows.row_mut(i), b_k, &mut rhs.row_mut(i)[0]);
                    }
                    ctl.set_progress(k, i + 1);
                });
            })
        };
        let kf = match status {
            ExecStatus::Completed => break,
            ExecStatus::Failed { failed_at, .. } => failed_at,
        };
        for k in k0..kf {
            for i in ctl.progress(k)..n {
                log(TraceEvent::Update { k, i });
                update_owned(&mut a, &mut b, k, i);
            }
        }
        log(TraceEvent::Pivot { k: kf });
        let mut amax = a[(kf, kf)].abs();
        let mut m = kf;
        for i in kf + 1..n {
            if a[(i, kf)].abs() > amax {
                amax = a[(i, kf)].abs();
                m = i;
            }
        }
        if amax == 0.0 {
            return Err(KernelError::Singular { step: kf });
        }
        b.swap_rows(m, kf);
        for j in kf..n {
            let t = a[(kf, j)];
            a[(kf, j)] = a[(m, j)];
            a[(m, j)] = t;
        }
        swaps.push((kf, m));
        misspeculations += 1;
        k0 = kf;
    }
    Ok(GaussjResult {
        a,
        b,
        swaps,
        misspeculations,
    })
}
