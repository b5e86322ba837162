//! Picks a reduction strategy from the size of the reduction target.
//!
//! Private copies pay off while all of them fit in cache together; past
//! that point contention-free atomics are cheaper than the extra memory
//! traffic. Locking is never selected automatically.

use crate::kernels::SmvpInput;
use crate::runtime::{ExecConfig, Strategy};

/// Default cache budget: 8 MiB.
pub const DEFAULT_CACHE_BUDGET: u64 = 8 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkloadFeatures {
    /// Bytes of one copy of the reduction target.
    pub reduction_slot_bytes: u64,
    pub threads: usize,
    pub cache_budget_bytes: u64,
}

pub fn choose_strategy(f: &WorkloadFeatures) -> Strategy {
    if f.threads <= 1 {
        return Strategy::Serial;
    }
    match (f.threads as u64).checked_mul(f.reduction_slot_bytes) {
        Some(total) if total <= f.cache_budget_bytes => Strategy::Privatized,
        _ => Strategy::Atomic,
    }
}

pub fn measure_features(input: &SmvpInput, cfg: &ExecConfig, budget: u64) -> WorkloadFeatures {
    WorkloadFeatures {
        reduction_slot_bytes: (input.matrix.n() * input.matrix.block() * 8) as u64,
        threads: cfg.threads(),
        cache_budget_bytes: budget,
    }
}
