use std::fs::File;
use std::io::BufReader;
use std::time::Instant;

use super::{BenchError, Kernel, MatrixKind, Rhs, RunReport, RunRow, RunSpec, Verified, MAX_DENSE_ELEMENTS};
use crate::adaptive::{choose_strategy, measure_features, WorkloadFeatures};
use crate::kernels::{
    argmax_update_parallel, argmax_update_serial, gaussj_serial, gaussj_speculative, givens_serial, givens_tiled,
    max_scaled_error, smvp_error_scale, smvp_parallel, smvp_serial, ArgmaxInput, ArgmaxStrategy, KernelError,
    SmvpInput,
};
use crate::numerics::{
    gen_block_sparse, gen_complex_random, gen_random_dense, gen_spd, parse_matrix_market_limited, plant_zero_pivot,
    DenseMatrix, Rng, SAFE_HI, SAFE_LO,
};
use crate::runtime::{ExecConfig, Strategy, THREADS_ENV};

const SMVP_DEGREE: f64 = 8.0;
const SMVP_BLOCK: usize = 3;
const ARGMAX_CATEGORIES: usize = 1000;
const ARGMAX_DIM: usize = 8;

/// Thread count from [`THREADS_ENV`], if set.
pub fn threads_from_env() -> Result<Option<usize>, BenchError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(BenchError::Usage(format!("{THREADS_ENV}={v} is not a thread count"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `exec` on `reps` fresh inputs; returns the last output and the
/// median wall time in milliseconds. Input preparation is not timed.
fn measure<I, O>(
    reps: usize,
    mut prepare: impl FnMut() -> I,
    mut exec: impl FnMut(I) -> Result<O, KernelError>,
) -> Result<(O, f64), KernelError> {
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let input = prepare();
        let start = Instant::now();
        let out = exec(input)?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
        last = Some(out);
    }
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    let median = if times.len() % 2 == 1 {
        times[mid]
    } else {
        (times[mid - 1] + times[mid]) / 2.0
    };
    Ok((last.expect("at least one repetition"), median))
}

fn config(threads: usize) -> Result<ExecConfig, BenchError> {
    ExecConfig::new(threads, true).map_err(|e| BenchError::Kernel(e.into()))
}

struct Variant<S> {
    label: String,
    strategy: S,
}

/// Expands the requested strategy name for one thread count.
fn resolve<S: Copy>(
    requested: &str,
    all: &[(&str, S)],
    auto: impl Fn() -> (&'static str, S),
) -> Result<Vec<Variant<S>>, BenchError> {
    match requested {
        "all" => Ok(all
            .iter()
            .map(|&(name, strategy)| Variant {
                label: name.to_string(),
                strategy,
            })
            .collect()),
        "auto" => {
            let (name, strategy) = auto();
            Ok(vec![Variant {
                label: format!("auto→{name}"),
                strategy,
            }])
        }
        other => all
            .iter()
            .find(|(name, _)| *name == other)
            .map(|&(name, strategy)| {
                vec![Variant {
                    label: name.to_string(),
                    strategy,
                }]
            })
            .ok_or_else(|| BenchError::Usage(format!("unknown strategy `{other}` for this kernel"))),
    }
}

fn baseline(spec: &RunSpec, size: usize, time: f64, swaps: usize) -> RunRow {
    RunRow {
        kernel: spec.kernel.to_string(),
        strategy: "serial".into(),
        threads: 1,
        size,
        median_time_ms: time,
        speedup: 1.0,
        verified: Verified::Exact,
        misspeculations: 0,
        swaps,
    }
}

fn row(spec: &RunSpec, size: usize, label: String, threads: usize, time: f64, serial_time: f64) -> RunRow {
    RunRow {
        kernel: spec.kernel.to_string(),
        strategy: label,
        threads,
        size,
        median_time_ms: time,
        speedup: if time > 0.0 { serial_time / time } else { 0.0 },
        verified: Verified::Failed,
        misspeculations: 0,
        swaps: 0,
    }
}

/// Runs the grid described by `spec`. The first row is the serial baseline.
pub fn run(spec: &RunSpec) -> Result<RunReport, BenchError> {
    spec.validate()?;
    let size = spec.size.unwrap_or(spec.kernel.default_size());
    let mut rng = Rng::new(spec.seed);
    let rows = match spec.kernel {
        Kernel::Smvp => run_smvp(spec, size, &mut rng)?,
        Kernel::Argmax => run_argmax(spec, size, &mut rng)?,
        Kernel::Givens => run_givens(spec, size, &mut rng)?,
        Kernel::Gaussj => run_gaussj(spec, size, &mut rng)?,
    };
    Ok(RunReport { rows })
}

fn run_smvp(spec: &RunSpec, size: usize, rng: &mut Rng) -> Result<Vec<RunRow>, BenchError> {
    let (matrix, v) = gen_block_sparse(size, SMVP_DEGREE, SMVP_BLOCK, rng);
    let input = SmvpInput::with_zero_w(matrix, v)?;
    let scale = smvp_error_scale(&input);
    let (reference, serial_time) = measure(
        spec.repetitions,
        || input.clone(),
        |mut i| {
            smvp_serial(&mut i);
            Ok(i.w)
        },
    )?;
    let mut rows = vec![baseline(spec, size, serial_time, 0)];
    let all: Vec<(&str, Strategy)> = Strategy::PARALLEL.iter().map(|s| (s.name(), *s)).collect();
    for &threads in &spec.threads {
        let cfg = config(threads)?;
        let variants = resolve(&spec.strategy, &all, || {
            let s = choose_strategy(&measure_features(&input, &cfg, spec.cache_budget));
            (s.name(), s)
        })?;
        for var in variants {
            let (w, time) = measure(
                spec.repetitions,
                || input.clone(),
                |mut i| {
                    smvp_parallel(&mut i, var.strategy, &cfg)?;
                    Ok(i.w)
                },
            )?;
            let mut r = row(spec, size, var.label, threads, time, serial_time);
            r.verified = if w.bitwise_eq(&reference) {
                Verified::Exact
            } else {
                let err = max_scaled_error(&reference, &w, &scale);
                if err <= spec.tolerance {
                    Verified::WithinTol(err)
                } else {
                    Verified::Failed
                }
            };
            rows.push(r);
        }
    }
    Ok(rows)
}

fn run_argmax(spec: &RunSpec, size: usize, rng: &mut Rng) -> Result<Vec<RunRow>, BenchError> {
    let input = ArgmaxInput::random(size, ARGMAX_CATEGORIES, ARGMAX_DIM, rng)?;
    let (reference, serial_time) = measure(
        spec.repetitions,
        || input.clone(),
        |mut i| {
            argmax_update_serial(&mut i);
            Ok(i)
        },
    )?;
    let mut rows = vec![baseline(spec, size, serial_time, 0)];
    let all = [
        ("critical", ArgmaxStrategy::CriticalSection),
        ("privatized", ArgmaxStrategy::Privatized),
    ];
    for &threads in &spec.threads {
        let cfg = config(threads)?;
        let variants = resolve(&spec.strategy, &all, || {
            let f = WorkloadFeatures {
                reduction_slot_bytes: (ARGMAX_CATEGORIES * 8) as u64,
                threads,
                cache_budget_bytes: spec.cache_budget,
            };
            match choose_strategy(&f) {
                Strategy::Privatized => ("privatized", ArgmaxStrategy::Privatized),
                _ => ("critical", ArgmaxStrategy::CriticalSection),
            }
        })?;
        for var in variants {
            let (out, time) = measure(
                spec.repetitions,
                || input.clone(),
                |mut i| {
                    argmax_update_parallel(&mut i, var.strategy, &cfg);
                    Ok(i)
                },
            )?;
            let mut r = row(spec, size, var.label, threads, time, serial_time);
            r.verified = if out == reference {
                Verified::Exact
            } else {
                Verified::Failed
            };
            rows.push(r);
        }
    }
    Ok(rows)
}

fn run_givens(spec: &RunSpec, size: usize, rng: &mut Rng) -> Result<Vec<RunRow>, BenchError> {
    if size < 2 {
        return Err(BenchError::Usage("givens needs size >= 2".into()));
    }
    let a = gen_complex_random(size, size, rng, &spec.plant).map_err(|e| BenchError::Usage(e.to_string()))?;
    let (reference, serial_time) = measure(
        spec.repetitions,
        || a.clone(),
        |mut m| {
            givens_serial(&mut m)?;
            Ok(m)
        },
    )?;
    let mut rows = vec![baseline(spec, size, serial_time, 0)];
    let all = [("tiled", ())];
    for &threads in &spec.threads {
        let cfg = config(threads)?;
        for var in resolve(&spec.strategy, &all, || ("tiled", ()))? {
            let (out, time) = measure(
                spec.repetitions,
                || a.clone(),
                |mut m| {
                    givens_tiled(&mut m, spec.tile, &cfg)?;
                    Ok(m)
                },
            )?;
            let mut r = row(spec, size, var.label, threads, time, serial_time);
            r.verified = if out.bitwise_eq(&reference) {
                Verified::Exact
            } else {
                Verified::Failed
            };
            rows.push(r);
        }
    }
    Ok(rows)
}

fn load_dense(path: &std::path::Path) -> Result<DenseMatrix, BenchError> {
    let file = File::open(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix_market_limited(BufReader::new(file), MAX_DENSE_ELEMENTS).map_err(|source| BenchError::Market {
        path: path.to_path_buf(),
        source,
    })
}

fn run_gaussj(spec: &RunSpec, size: usize, rng: &mut Rng) -> Result<Vec<RunRow>, BenchError> {
    let mut a = match &spec.input {
        Some(path) => load_dense(path)?,
        None => match spec.matrix {
            MatrixKind::Random => gen_random_dense(size, rng),
            MatrixKind::Spd => gen_spd(size, rng),
        },
    };
    if !a.is_square() || a.rows() < 2 {
        return Err(BenchError::Usage(format!(
            "gaussj needs a square matrix with n >= 2, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    for &k in &spec.plant {
        plant_zero_pivot(&mut a, k, rng).map_err(|e| BenchError::Usage(e.to_string()))?;
    }
    let n = a.rows();
    let b = match spec.rhs {
        Rhs::Ones => DenseMatrix::column(vec![1.0; n]),
        Rhs::Random => DenseMatrix::column((0..n).map(|_| rng.uniform(SAFE_LO, SAFE_HI)).collect()),
    };
    let (reference, serial_time) = measure(
        spec.repetitions,
        || (a.clone(), b.clone()),
        |(a, b)| gaussj_serial(a, b),
    )?;
    let mut rows = vec![baseline(spec, n, serial_time, reference.swaps.len())];
    let all = [("speculative", ())];
    for &threads in &spec.threads {
        let cfg = config(threads)?;
        for var in resolve(&spec.strategy, &all, || ("speculative", ()))? {
            let (out, time) = measure(
                spec.repetitions,
                || (a.clone(), b.clone()),
                |(a, b)| gaussj_speculative(a, b, spec.tile, &cfg),
            )?;
            let mut r = row(spec, n, var.label, threads, time, serial_time);
            r.verified = if out.same_output(&reference) {
                Verified::Exact
            } else {
                Verified::Failed
            };
            r.misspeculations = out.misspeculations;
            r.swaps = out.swaps.len();
            rows.push(r);
        }
    }
    Ok(rows)
}
