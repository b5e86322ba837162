use std::any::Any;
use std::ops::Range;
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Barrier, Mutex};
use std::thread;

use super::{RuntimeError, SpecController};
use crate::schedule::{Tile, WavefrontPlan};

/// Environment variable that overrides the configured thread count.
pub const THREADS_ENV: &str = "BENCH_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecConfig {
    threads: usize,
    deterministic: bool,
}

impl ExecConfig {
    pub fn new(threads: usize, deterministic: bool) -> Result<Self, RuntimeError> {
        if threads == 0 {
            return Err(RuntimeError::Config("thread count must be at least 1".into()));
        }
        Ok(ExecConfig { threads, deterministic })
    }

    pub fn serial() -> Self {
        ExecConfig {
            threads: 1,
            deterministic: true,
        }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// Static contiguous partitioning and ordered merges.
    pub fn deterministic(&self) -> bool {
        self.deterministic
    }

    /// Applies the [`THREADS_ENV`] override, if set.
    pub fn with_env_override(self) -> Result<Self, RuntimeError> {
        match std::env::var(THREADS_ENV) {
            Ok(v) => {
                let threads = v
                    .trim()
                    .parse()
                    .map_err(|_| RuntimeError::Config(format!("{THREADS_ENV}={v} is not a thread count")))?;
                Self::new(threads, self.deterministic)
            }
            Err(_) => Ok(self),
        }
    }
}

/// Block `w` of `n` near-equal contiguous blocks of `0..len`.
fn block(len: usize, n: usize, w: usize) -> Range<usize> {
    (w * len / n)..((w + 1) * len / n)
}

type Payload = Box<dyn Any + Send>;

/// Keeps the first panic payload so it can be rethrown on the caller.
#[derive(Default)]
struct PanicSlot(Mutex<Option<Payload>>);

impl PanicSlot {
    fn store(&self, p: Payload) {
        let mut slot = self.0.lock().unwrap_or_else(|e| e.into_inner());
        slot.get_or_insert(p);
    }

    fn rethrow(self) {
        if let Some(p) = self.0.into_inner().unwrap_or_else(|e| e.into_inner()) {
            panic::resume_unwind(p);
        }
    }
}

/// Runs `body(worker, index)` once for every index in `range`.
///
/// Deterministic configs give worker `w` the `w`-th contiguous block;
/// otherwise workers pull chunks from a shared counter. With one thread the
/// indices run in ascending order on the calling thread. A panic in `body`
/// is rethrown after all workers have stopped.
pub fn parallel_for<F>(range: Range<usize>, cfg: &ExecConfig, body: F)
where
    F: Fn(usize, usize) + Sync,
{
    let len = range.len();
    if len == 0 {
        return;
    }
    let workers = cfg.threads.min(len);
    if workers == 1 {
        range.for_each(|i| body(0, i));
        return;
    }
    let start = range.start;
    let next = AtomicUsize::new(0);
    let chunk = (len / (workers * 16)).max(1);
    let stop = AtomicBool::new(false);
    let panics = PanicSlot::default();

    let run = |w: usize| {
        let result = panic::catch_unwind(AssertUnwindSafe(|| {
            if cfg.deterministic {
                for i in block(len, workers, w) {
                    body(w, start + i);
                }
            } else {
                while !stop.load(Ordering::Relaxed) {
                    let lo = next.fetch_add(chunk, Ordering::Relaxed);
                    if lo >= len {
                        break;
                    }
                    for i in lo..(lo + chunk).min(len) {
                        body(w, start + i);
                    }
                }
            }
        }));
        if let Err(p) = result {
            stop.store(true, Ordering::Relaxed);
            panics.store(p);
        }
    };
    thread::scope(|s| {
        for w in 1..workers {
            let run = &run;
            s.spawn(move || run(w));
        }
        run(0);
    });
    panics.rethrow();
}

/// Context handed to a tile body.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TileTask {
    pub worker: usize,
    pub wavefront: usize,
    pub tile: Tile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecStatus {
    Completed,
    /// A misspeculation was raised; `wavefront` was the last one executed.
    Failed {
        failed_at: usize,
        wavefront: usize,
    },
}

fn status_after(ctl: Option<&SpecController>, wave: usize) -> Option<ExecStatus> {
    let ctl = ctl?;
    match (ctl.failed_wave(), ctl.failed_at()) {
        (Some(w), Some(step)) if w <= wave => Some(ExecStatus::Failed {
            failed_at: step,
            wavefront: wave,
        }),
        _ => None,
    }
}

/// Executes a wavefront plan: wavefronts in order with a barrier between
/// consecutive ones, tiles of one wavefront concurrently.
///
/// Once a tile reports a misspeculation through `ctl`, the remaining tiles
/// of that wavefront still run (they must consult `ctl` themselves) and no
/// later wavefront is started. Tile bodies report through
/// [`SpecController::report_misspeculation`] with the wavefront index from
/// their [`TileTask`].
pub fn execute_wavefronts<F>(
    plan: &WavefrontPlan,
    cfg: &ExecConfig,
    ctl: Option<&SpecController>,
    tile_body: F,
) -> ExecStatus
where
    F: Fn(&TileTask) + Sync,
{
    let widest = plan.wavefronts().iter().map(Vec::len).max().unwrap_or(0);
    let workers = cfg.threads.min(widest).max(1);
    if workers == 1 {
        for (w, wave) in plan.wavefronts().iter().enumerate() {
            for &tile in wave {
                tile_body(&TileTask {
                    worker: 0,
                    wavefront: w,
                    tile,
                });
            }
            if let Some(status) = status_after(ctl, w) {
                return status;
            }
        }
        return ExecStatus::Completed;
    }

    let barrier = Barrier::new(workers);
    let counters: Vec<AtomicUsize> = plan.wavefronts().iter().map(|_| AtomicUsize::new(0)).collect();
    // Lowest wavefront in which a tile panicked.
    let panicked_wave = AtomicUsize::new(usize::MAX);
    let panics = PanicSlot::default();
    let outcome = Mutex::new(ExecStatus::Completed);

    let run = |worker: usize| {
        for (w, wave) in plan.wavefronts().iter().enumerate() {
            let exec = |tile: Tile| {
                let task = TileTask {
                    worker,
                    wavefront: w,
                    tile,
                };
                if let Err(p) = panic::catch_unwind(AssertUnwindSafe(|| tile_body(&task))) {
                    panicked_wave.fetch_min(w, Ordering::AcqRel);
                    panics.store(p);
                }
            };
            if cfg.deterministic {
                for &tile in &wave[block(wave.len(), workers, worker)] {
                    exec(tile);
                }
            } else {
                loop {
                    let t = counters[w].fetch_add(1, Ordering::Relaxed);
                    if t >= wave.len() {
                        break;
                    }
                    exec(wave[t]);
                }
            }
            barrier.wait();
            // Only events tagged with a wavefront <= w count here; a faster
            // worker may already be reporting from wavefront w + 1.
            if panicked_wave.load(Ordering::Acquire) <= w {
                return;
            }
            if let Some(status) = status_after(ctl, w) {
                *outcome.lock().unwrap_or_else(|e| e.into_inner()) = status;
                return;
            }
        }
    };
    thread::scope(|s| {
        for w in 1..workers {
            let run = &run;
            s.spawn(move || run(w));
        }
        run(0);
    });
    panics.rethrow();
    outcome.into_inner().unwrap_or_else(|e| e.into_inner())
}
