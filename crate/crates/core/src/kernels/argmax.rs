//! Guarded max-update: for every trial, compute a confidence and keep it
//! if it beats the current best for that trial's winner.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use super::KernelError;
use crate::numerics::{DenseMatrix, Rng};
use crate::runtime::{parallel_for, ExecConfig, LOCK_STRIPES};

#[derive(Clone, Debug, PartialEq)]
pub struct ArgmaxInput {
    /// Winner index of each trial.
    pub winners: Vec<usize>,
    /// One feature row per trial.
    pub features: DenseMatrix,
    pub weights: Vec<f64>,
    pub highest_confidence: Vec<f64>,
    pub set_high: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgmaxStrategy {
    CriticalSection,
    Privatized,
}

impl ArgmaxInput {
    pub fn new(
        winners: Vec<usize>,
        features: DenseMatrix,
        weights: Vec<f64>,
        highest_confidence: Vec<f64>,
    ) -> Result<Self, KernelError> {
        if features.rows() != winners.len() {
            return Err(KernelError::Shape(format!(
                "{} feature rows for {} trials",
                features.rows(),
                winners.len()
            )));
        }
        if features.cols() != weights.len() {
            return Err(KernelError::Shape(format!(
                "features have {} columns, weights {}",
                features.cols(),
                weights.len()
            )));
        }
        if let Some(&w) = winners.iter().find(|&&w| w >= highest_confidence.len()) {
            return Err(KernelError::Shape(format!(
                "winner {w} out of range for {} entries",
                highest_confidence.len()
            )));
        }
        let set_high = vec![false; highest_confidence.len()];
        Ok(ArgmaxInput {
            winners,
            features,
            weights,
            highest_confidence,
            set_high,
        })
    }

    /// Random trials over `categories` winners with `dim` features in
    /// [-1, 1); initial highest confidences are uniform in [0, 1).
    pub fn random(trials: usize, categories: usize, dim: usize, rng: &mut Rng) -> Result<Self, KernelError> {
        if categories == 0 && trials > 0 {
            return Err(KernelError::InvalidArgument("trials need at least one category".into()));
        }
        let winners = (0..trials).map(|_| rng.below(categories)).collect();
        let features = DenseMatrix::from_vec(trials, dim, (0..trials * dim).map(|_| rng.uniform(-1.0, 1.0)).collect())?;
        let weights = (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let highest = (0..categories).map(|_| rng.unit()).collect();
        Self::new(winners, features, weights, highest)
    }

    pub fn trials(&self) -> usize {
        self.winners.len()
    }

    #[inline]
    fn confidence(&self, t: usize) -> f64 {
        let f = self.features.row(t);
        let mut c = 0.0;
        for (x, w) in f.iter().zip(&self.weights) {
            c += x * w;
        }
        c
    }
}

pub fn argmax_update_serial(input: &mut ArgmaxInput) {
    for t in 0..input.trials() {
        let conf = input.confidence(t);
        let w = input.winners[t];
        if conf > input.highest_confidence[w] {
            input.highest_confidence[w] = conf;
            input.set_high[w] = true;
        }
    }
}

pub fn argmax_update_parallel(input: &mut ArgmaxInput, strategy: ArgmaxStrategy, cfg: &ExecConfig) {
    match strategy {
        ArgmaxStrategy::CriticalSection => critical_section(input, cfg),
        ArgmaxStrategy::Privatized => privatized(input, cfg),
    }
}

fn critical_section(input: &mut ArgmaxInput, cfg: &ExecConfig) {
    let highest: Vec<AtomicU64> = input
        .highest_confidence
        .iter()
        .map(|x| AtomicU64::new(x.to_bits()))
        .collect();
    let flags: Vec<AtomicBool> = input.set_high.iter().map(|&f| AtomicBool::new(f)).collect();
    let stripes: Vec<Mutex<()>> = (0..LOCK_STRIPES.min(highest.len().max(1)))
        .map(|_| Mutex::new(()))
        .collect();
    let shared = &*input;
    parallel_for(0..shared.trials(), cfg, |_, t| {
        let conf = shared.confidence(t);
        let w = shared.winners[t];
        let _guard = stripes[w % stripes.len()].lock().unwrap_or_else(|e| e.into_inner());
        if conf > f64::from_bits(highest[w].load(Ordering::Relaxed)) {
            highest[w].store(conf.to_bits(), Ordering::Relaxed);
            flags[w].store(true, Ordering::Relaxed);
        }
    });
    for (dst, src) in input.highest_confidence.iter_mut().zip(&highest) {
        *dst = f64::from_bits(src.load(Ordering::Relaxed));
    }
    for (dst, src) in input.set_high.iter_mut().zip(&flags) {
        *dst = src.load(Ordering::Relaxed);
    }
}

fn privatized(input: &mut ArgmaxInput, cfg: &ExecConfig) {
    let cats = input.highest_confidence.len();
    // Each worker writes only its own row, so relaxed loads and stores suffice.
    let local: Vec<Vec<AtomicU64>> = (0..cfg.threads())
        .map(|_| (0..cats).map(|_| AtomicU64::new(f64::NEG_INFINITY.to_bits())).collect())
        .collect();
    let shared = &*input;
    parallel_for(0..shared.trials(), cfg, |worker, t| {
        let conf = shared.confidence(t);
        let slot = &local[worker][shared.winners[t]];
        if conf > f64::from_bits(slot.load(Ordering::Relaxed)) {
            slot.store(conf.to_bits(), Ordering::Relaxed);
        }
    });
    for x in 0..cats {
        for buf in &local {
            let m = f64::from_bits(buf[x].load(Ordering::Relaxed));
            if m > input.highest_confidence[x] {
                input.highest_confidence[x] = m;
                input.set_high[x] = true;
            }
        }
    }
}
