//! Benchmark harness behind the `bench` binary.
//!
//! [`run`] executes a kernel under every requested strategy and thread
//! count, checks each output against the serial kernel on an identical
//! input, and returns a [`RunReport`]; [`emit`] renders it as CSV or a
//! markdown table. [`legality`] checks a skew against a dependence set.

mod legality;
mod report;
mod run;

pub use legality::{legality, parse_skew, parse_tile, verdict_exit_code, DepSource, Preset};
pub use report::{emit, Format, RunReport, RunRow, Verified, CSV_HEADER};
pub use run::{run, threads_from_env};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::kernels::KernelError;
use crate::numerics::MarketError;
use crate::schedule::ScheduleError;

/// Largest dense matrix accepted from a file (20000 x 20000).
pub const MAX_DENSE_ELEMENTS: usize = 20_000 * 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    Smvp,
    Argmax,
    Givens,
    Gaussj,
}

impl Kernel {
    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Smvp => "smvp",
            Kernel::Argmax => "argmax",
            Kernel::Givens => "givens",
            Kernel::Gaussj => "gaussj",
        }
    }

    /// Problem size used when none is given.
    pub fn default_size(&self) -> usize {
        match self {
            Kernel::Smvp => 2000,
            Kernel::Argmax => 100_000,
            Kernel::Givens => 300,
            Kernel::Gaussj => 500,
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smvp" => Ok(Kernel::Smvp),
            "argmax" => Ok(Kernel::Argmax),
            "givens" => Ok(Kernel::Givens),
            "gaussj" => Ok(Kernel::Gaussj),
            _ => Err(BenchError::Usage(format!("unknown kernel `{s}`"))),
        }
    }
}

/// Right-hand side of the elimination kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rhs {
    #[default]
    Ones,
    /// Uniform in [0.5, 1.5), drawn after the matrix.
    Random,
}

impl FromStr for Rhs {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ones" => Ok(Rhs::Ones),
            "random" => Ok(Rhs::Random),
            _ => Err(BenchError::Usage(format!("unknown right-hand side `{s}`"))),
        }
    }
}

/// Generated dense matrix family for the elimination kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MatrixKind {
    #[default]
    Random,
    Spd,
}

impl FromStr for MatrixKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(MatrixKind::Random),
            "spd" => Ok(MatrixKind::Spd),
            _ => Err(BenchError::Usage(format!("unknown matrix kind `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub kernel: Kernel,
    /// A variant name, `auto`, or `all`.
    pub strategy: String,
    pub threads: Vec<usize>,
    /// Generated problem size; `None` means the kernel default.
    pub size: Option<usize>,
    /// Matrix Market input for the elimination kernel.
    pub input: Option<PathBuf>,
    pub tile: i64,
    pub seed: u64,
    pub repetitions: usize,
    pub tolerance: f64,
    pub cache_budget: u64,
    pub matrix: MatrixKind,
    pub rhs: Rhs,
    /// Zero pivots to plant (elimination) or cold rows (rotation).
    pub plant: Vec<usize>,
}

impl RunSpec {
    pub fn new(kernel: Kernel) -> Self {
        RunSpec {
            kernel,
            strategy: "all".into(),
            threads: vec![1, 2, 4, 8],
            size: None,
            input: None,
            tile: crate::schedule::DEFAULT_TILE,
            seed: 42,
            repetitions: 3,
            tolerance: 1e-12,
            cache_budget: crate::adaptive::DEFAULT_CACHE_BUDGET,
            matrix: MatrixKind::Random,
            rhs: Rhs::Ones,
            plant: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.repetitions == 0 {
            return Err(BenchError::Usage("repetitions must be at least 1".into()));
        }
        if self.threads.is_empty() || self.threads.contains(&0) {
            return Err(BenchError::Usage("thread counts must be at least 1".into()));
        }
        if self.tile < 1 {
            return Err(BenchError::Usage("tile must be at least 1".into()));
        }
        if self.input.is_some() && self.kernel != Kernel::Gaussj {
            return Err(BenchError::Usage(
                "--input is only supported for the gaussj kernel".into(),
            ));
        }
        if self.input.is_some() && self.size.is_some() {
            return Err(BenchError::Usage("--size and --input are mutually exclusive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Market {
        path: PathBuf,
        #[source]
        source: MarketError,
    },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

impl BenchError {
    /// Process exit code: 2 for bad input or usage, 1 for kernel failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Kernel(_) => 1,
            _ => 2,
        }
    }
}
