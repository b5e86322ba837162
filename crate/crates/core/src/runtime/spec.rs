use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

const NONE: usize = usize::MAX;

/// One detected violation of a speculative assumption.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Misspeculation {
    pub step: usize,
    pub wavefront: usize,
}

/// Shared state of one speculative execution round.
///
/// `failed_at` only ever decreases. `progress[k]` holds the next inner
/// index to execute for step `k`; the worker that owns step `k` in a
/// wavefront is its only writer.
#[derive(Debug)]
pub struct SpecController {
    failed_at: AtomicUsize,
    failed_wave: AtomicUsize,
    events: Mutex<Vec<Misspeculation>>,
    progress: Vec<AtomicUsize>,
}

impl SpecController {
    pub fn new(progress: Vec<usize>) -> Self {
        SpecController {
            failed_at: AtomicUsize::new(NONE),
            failed_wave: AtomicUsize::new(NONE),
            events: Mutex::new(Vec::new()),
            progress: progress.into_iter().map(AtomicUsize::new).collect(),
        }
    }

    /// Lowers `failed_at` to `step` if smaller and logs the event.
    pub fn report_misspeculation(&self, step: usize, wavefront: usize) {
        self.failed_at.fetch_min(step, Ordering::AcqRel);
        self.failed_wave.fetch_min(wavefront, Ordering::AcqRel);
        self.events
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .push(Misspeculation { step, wavefront });
    }

    pub fn failed_at(&self) -> Option<usize> {
        match self.failed_at.load(Ordering::Acquire) {
            NONE => None,
            s => Some(s),
        }
    }

    /// Earliest wavefront that reported a misspeculation.
    pub fn failed_wave(&self) -> Option<usize> {
        match self.failed_wave.load(Ordering::Acquire) {
            NONE => None,
            w => Some(w),
        }
    }

    /// True when step `k` must not run because an earlier or equal step failed.
    #[inline]
    pub fn blocks(&self, k: usize) -> bool {
        self.failed_at.load(Ordering::Acquire) <= k
    }

    pub fn events(&self) -> Vec<Misspeculation> {
        self.events.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    #[inline]
    pub fn progress(&self, k: usize) -> usize {
        self.progress[k].load(Ordering::Acquire)
    }

    #[inline]
    pub fn set_progress(&self, k: usize, next: usize) {
        debug_assert!(next >= self.progress(k), "progress of step {k} moved backwards");
        self.progress[k].store(next, Ordering::Release);
    }
}
