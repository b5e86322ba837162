use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use super::RuntimeError;

/// How concurrent accumulations into a shared array are made safe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Plain adds; single-threaded use only.
    Serial,
    /// Adds under a striped mutex.
    Locked,
    /// Compare-exchange retry loop on the 64-bit cell.
    Atomic,
    /// Per-worker private copies merged after the parallel region.
    Privatized,
}

impl Strategy {
    pub const PARALLEL: [Strategy; 3] = [Strategy::Locked, Strategy::Atomic, Strategy::Privatized];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Serial => "serial",
            Strategy::Locked => "locked",
            Strategy::Atomic => "atomic",
            Strategy::Privatized => "privatized",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = RuntimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "serial" => Ok(Strategy::Serial),
            "locked" | "locks" => Ok(Strategy::Locked),
            "atomic" => Ok(Strategy::Atomic),
            "privatized" | "private" => Ok(Strategy::Privatized),
            _ => Err(RuntimeError::Config(format!("unknown reduction strategy `{s}`"))),
        }
    }
}

/// Default number of lock stripes for [`Strategy::Locked`].
pub const LOCK_STRIPES: usize = 1024;

#[inline]
fn load(c: &AtomicU64) -> f64 {
    f64::from_bits(c.load(Ordering::Relaxed))
}

#[inline]
fn store(c: &AtomicU64, v: f64) {
    c.store(v.to_bits(), Ordering::Relaxed)
}

/// Non-atomic read-modify-write; callers guarantee exclusive access.
#[inline]
fn plain_add(c: &AtomicU64, v: f64) {
    store(c, load(c) + v)
}

#[inline]
fn atomic_add(c: &AtomicU64, v: f64) {
    let mut cur = c.load(Ordering::Relaxed);
    loop {
        let new = (f64::from_bits(cur) + v).to_bits();
        match c.compare_exchange_weak(cur, new, Ordering::AcqRel, Ordering::Relaxed) {
            Ok(_) => return,
            Err(seen) => cur = seen,
        }
    }
}

fn cells(values: impl Iterator<Item = f64>) -> Vec<AtomicU64> {
    values.map(|v| AtomicU64::new(v.to_bits())).collect()
}

/// Accumulation array of `len` slots with `components` values each.
///
/// The array starts from the `base` values passed to [`new`](Self::new);
/// [`finalize`](Self::finalize) writes the accumulated result back.
pub struct ReductionSlots {
    strategy: Strategy,
    len: usize,
    components: usize,
    shared: Vec<AtomicU64>,
    stripes: Vec<Mutex<()>>,
    private: Vec<Vec<AtomicU64>>,
}

impl ReductionSlots {
    pub fn new(strategy: Strategy, base: &[f64], components: usize, workers: usize) -> Result<Self, RuntimeError> {
        if components == 0 || !base.len().is_multiple_of(components) {
            return Err(RuntimeError::Contract(format!(
                "base of length {} is not a whole number of {components}-component slots",
                base.len()
            )));
        }
        if workers == 0 {
            return Err(RuntimeError::Contract(
                "reduction slots need at least one worker".into(),
            ));
        }
        let len = base.len() / components;
        let stripes = match strategy {
            Strategy::Locked => (0..LOCK_STRIPES.min(len).max(1)).map(|_| Mutex::new(())).collect(),
            _ => Vec::new(),
        };
        let private = match strategy {
            Strategy::Privatized => (0..workers)
                .map(|_| cells(std::iter::repeat_n(0.0, base.len())))
                .collect(),
            _ => Vec::new(),
        };
        Ok(ReductionSlots {
            strategy,
            len,
            components,
            shared: cells(base.iter().copied()),
            stripes,
            private,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn components(&self) -> usize {
        self.components
    }

    fn check(&self, worker: usize, slot: usize, component: usize) -> Result<usize, RuntimeError> {
        if slot >= self.len || component >= self.components {
            return Err(RuntimeError::Contract(format!(
                "slot ({slot}, {component}) outside {}x{}",
                self.len, self.components
            )));
        }
        if self.strategy == Strategy::Privatized && worker >= self.private.len() {
            return Err(RuntimeError::Contract(format!(
                "worker {worker} has no private buffer ({} workers)",
                self.private.len()
            )));
        }
        Ok(slot * self.components + component)
    }

    /// Adds `value` to `(slot, component)` using the configured strategy.
    pub fn try_add(&self, worker: usize, slot: usize, component: usize, value: f64) -> Result<(), RuntimeError> {
        let at = self.check(worker, slot, component)?;
        match self.strategy {
            Strategy::Serial => plain_add(&self.shared[at], value),
            Strategy::Locked => {
                let _guard = self.stripes[slot % self.stripes.len()]
                    .lock()
                    .unwrap_or_else(|e| e.into_inner());
                plain_add(&self.shared[at], value);
            }
            Strategy::Atomic => atomic_add(&self.shared[at], value),
            Strategy::Privatized => plain_add(&self.private[worker][at], value),
        }
        Ok(())
    }

    /// [`try_add`](Self::try_add), panicking on out-of-range indices.
    #[inline]
    pub fn add(&self, worker: usize, slot: usize, component: usize, value: f64) {
        if let Err(e) = self.try_add(worker, slot, component, value) {
            panic!("{e}");
        }
    }

    /// Adds to a slot that only the calling work item updates outside of
    /// [`add`](Self::add). Privatized slots write the shared array directly,
    /// since no other worker touches it before the merge; other strategies
    /// fall back to `add` to stay coherent with concurrent adds.
    pub fn add_owned(&self, worker: usize, slot: usize, component: usize, value: f64) {
        match self.strategy {
            Strategy::Privatized => {
                let at = self.check(worker, slot, component).unwrap_or_else(|e| panic!("{e}"));
                plain_add(&self.shared[at], value);
            }
            _ => self.add(worker, slot, component, value),
        }
    }

    /// Current shared values, without pending private contributions.
    pub fn snapshot(&self) -> Vec<f64> {
        self.shared.iter().map(load).collect()
    }

    /// Writes the accumulated values to `base`. Privatized buffers are
    /// merged in ascending worker order and then cleared, so repeating
    /// `finalize` without new adds leaves `base` unchanged.
    pub fn finalize(&mut self, base: &mut [f64]) -> Result<(), RuntimeError> {
        if base.len() != self.shared.len() {
            return Err(RuntimeError::Contract(format!(
                "finalize into {} values, slots hold {}",
                base.len(),
                self.shared.len()
            )));
        }
        for (x, out) in base.iter_mut().enumerate() {
            let mut v = load(&self.shared[x]);
            for buf in &self.private {
                v += load(&buf[x]);
                store(&buf[x], 0.0);
            }
            store(&self.shared[x], v);
            *out = v;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::{parallel_for, ExecConfig};

    fn run_adds(strategy: Strategy, base: &[f64], adds: &[(usize, usize, f64)], workers: usize) -> Vec<f64> {
        let mut slots = ReductionSlots::new(strategy, base, 1, workers).unwrap();
        for &(w, s, v) in adds {
            slots.add(w, s, 0, v);
        }
        let mut out = base.to_vec();
        slots.finalize(&mut out).unwrap();
        out
    }

    #[test]
    fn privatized_merge_order() {
        assert_eq!(
            run_adds(Strategy::Privatized, &[0.0], &[(0, 0, 1.0), (1, 0, 1.0)], 2),
            vec![2.0]
        );
        let mut slots = ReductionSlots::new(Strategy::Privatized, &[0.5], 1, 2).unwrap();
        slots.add(0, 0, 0, 1.0);
        slots.add(1, 0, 0, 2.0);
        let mut base = [0.5];
        slots.finalize(&mut base).unwrap();
        assert_eq!(base, [3.5]);
        slots.finalize(&mut base).unwrap();
        assert_eq!(base, [3.5]);
    }

    #[test]
    fn no_adds_leave_base_unchanged() {
        for s in [
            Strategy::Serial,
            Strategy::Locked,
            Strategy::Atomic,
            Strategy::Privatized,
        ] {
            assert_eq!(run_adds(s, &[1.25, -3.0], &[], 3), vec![1.25, -3.0]);
        }
    }

    #[test]
    fn locked_matches_serial_bitwise() {
        let adds: Vec<(usize, usize, f64)> = (0..500).map(|i| (0, i % 7, 1.0 / (i as f64 + 1.0))).collect();
        let base = [0.1; 7];
        let a = run_adds(Strategy::Serial, &base, &adds, 1);
        for s in [Strategy::Locked, Strategy::Atomic, Strategy::Privatized] {
            let b = run_adds(s, &base, &adds, 1);
            if s == Strategy::Privatized {
                // base + (sum of adds) regroups the additions
                assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
            } else {
                assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
            }
        }
    }

    #[test]
    fn contract_violations() {
        let slots = ReductionSlots::new(Strategy::Privatized, &[0.0; 6], 3, 2).unwrap();
        assert!(slots.try_add(0, 2, 0, 1.0).is_err());
        assert!(slots.try_add(0, 0, 3, 1.0).is_err());
        assert!(slots.try_add(2, 0, 0, 1.0).is_err());
        assert!(ReductionSlots::new(Strategy::Atomic, &[0.0; 5], 3, 1).is_err());
        let mut slots = ReductionSlots::new(Strategy::Atomic, &[0.0; 6], 3, 1).unwrap();
        assert!(slots.finalize(&mut [0.0; 5]).is_err());
    }

    #[test]
    fn atomic_loses_no_updates() {
        let cfg = ExecConfig::new(8, false).unwrap();
        let mut slots = ReductionSlots::new(Strategy::Atomic, &[0.0], 1, 8).unwrap();
        parallel_for(0..8000, &cfg, |w, _| slots.add(w, 0, 0, 1.0));
        let mut out = [0.0];
        slots.finalize(&mut out).unwrap();
        assert_eq!(out, [8000.0]);

        // Distinct powers of two: any lost update leaves a missing bit.
        let mut slots = ReductionSlots::new(Strategy::Atomic, &[0.0], 1, 8).unwrap();
        parallel_for(0..48, &cfg, |w, i| {
            for _ in 0..1000 {
                slots.add(w, 0, 0, 0.0);
            }
            slots.add(w, 0, 0, (i as f64).exp2());
        });
        slots.finalize(&mut out).unwrap();
        assert_eq!(out[0], (48f64).exp2() - 1.0);
    }

    #[test]
    fn strategy_names() {
        for s in [
            Strategy::Serial,
            Strategy::Locked,
            Strategy::Atomic,
            Strategy::Privatized,
        ] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("stm".parse::<Strategy>().is_err());
    }
}
