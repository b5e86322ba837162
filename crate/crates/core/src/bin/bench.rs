use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavespec::bench::{
    emit, legality, parse_skew, parse_tile, run, threads_from_env, verdict_exit_code, BenchError, DepSource, Format,
    Kernel, MatrixKind, Preset, Rhs, RunSpec,
};

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Run kernels against their serial oracles and check schedules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time kernel variants and verify their output.
    Run(RunArgs),
    /// Check a skew against a dependence set.
    Legality(LegalityArgs),
}

#[derive(Args)]
struct RunArgs {
    /// smvp, argmax, givens or gaussj.
    #[arg(long, default_value = "gaussj")]
    kernel: Kernel,
    /// Variant name, `auto` or `all`.
    #[arg(long, default_value = "all")]
    strategy: String,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    threads: Vec<usize>,
    #[arg(long, conflicts_with = "input")]
    size: Option<usize>,
    /// Matrix Market file (gaussj only).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 32)]
    tile: i64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// csv or md.
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long, default_value_t = wavespec::adaptive::DEFAULT_CACHE_BUDGET)]
    cache_budget: u64,
    /// Generated matrix family for gaussj: random or spd.
    #[arg(long, default_value = "random")]
    matrix: MatrixKind,
    /// Right-hand side for gaussj: ones or random.
    #[arg(long, default_value = "ones")]
    rhs: Rhs,
    /// Zero pivots to plant (gaussj) or cold rows (givens).
    #[arg(long, value_delimiter = ',')]
    plant: Vec<usize>,
}

#[derive(Args)]
struct LegalityArgs {
    /// Built-in dependence set: givens or gaussj.
    #[arg(long, conflicts_with = "deps", required_unless_present = "deps")]
    preset: Option<Preset>,
    /// Dependence file.
    #[arg(long)]
    deps: Option<PathBuf>,
    /// `a,b,c,d`, `identity` or `wavefront`.
    #[arg(long, default_value = "1,0,1,1")]
    skew: String,
    #[arg(long, default_value = "32,32")]
    tile: String,
}

fn run_command(args: RunArgs) -> Result<ExitCode, BenchError> {
    let threads = match threads_from_env()? {
        Some(t) => vec![t],
        None => args.threads,
    };
    let spec = RunSpec {
        kernel: args.kernel,
        strategy: args.strategy,
        threads,
        size: args.size,
        input: args.input,
        tile: args.tile,
        seed: args.seed,
        repetitions: args.reps,
        tolerance: args.tol,
        cache_budget: args.cache_budget,
        matrix: args.matrix,
        rhs: args.rhs,
        plant: args.plant,
    };
    let report = run(&spec)?;
    print!("{}", emit(&report, args.format));
    Ok(if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn legality_command(args: LegalityArgs) -> Result<ExitCode, BenchError> {
    let source = match (args.preset, args.deps) {
        (Some(p), _) => DepSource::Preset(p),
        (None, Some(path)) => DepSource::File(path),
        (None, None) => return Err(BenchError::Usage("one of --preset or --deps is required".into())),
    };
    let verdict = legality(&source, parse_skew(&args.skew)?, parse_tile(&args.tile)?)?;
    println!("{verdict}");
    Ok(ExitCode::from(verdict_exit_code(&verdict) as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Legality(args) => legality_command(args),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    })
}
