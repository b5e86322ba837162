//! Acceptance checks, one line per criterion: PASS, FAIL, or WARN when the
//! host cannot run a machine-dependent check.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use wavespec::adaptive::{choose_strategy, WorkloadFeatures};
use wavespec::kernels::{
    argmax_update_parallel, argmax_update_serial, gaussj_serial, gaussj_speculative, givens_serial, givens_tiled,
    max_scaled_error, smvp_error_scale, smvp_parallel, smvp_serial, ArgmaxInput, ArgmaxStrategy, GaussjResult,
    SmvpInput,
};
use wavespec::numerics::{
    ceild, floord, gen_block_sparse, gen_complex_random, gen_random_dense, gen_spd, gen_zero_pivot, plant_zero_pivot,
    DenseMatrix, Rng,
};
use wavespec::runtime::{ExecConfig, Strategy};
use wavespec::schedule::{
    assert_wavefront_independence, check_schedule, gaussj_dependences, givens_dependences, wavefronts, DepTag,
    IterationDomain, SkewTileSchedule, Verdict,
};

enum Outcome {
    Pass(String),
    Warn(String),
}

type Check = fn() -> Outcome;

fn cfg(threads: usize) -> ExecConfig {
    ExecConfig::new(threads, false).unwrap()
}

fn ones(n: usize) -> DenseMatrix {
    DenseMatrix::column(vec![1.0; n])
}

fn givens_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = Rng::new(1);
    let mut totals = [0u64; 3];
    for case in 0..20 {
        let m = 50 + rng.below(251);
        let n = 50 + rng.below(251);
        let cold: Vec<usize> = if case % 2 == 0 { vec![0, rng.below(m)] } else { vec![] };
        let a0 = gen_complex_random(m, n, &mut rng, &cold).unwrap();
        let mut serial = a0.clone();
        let c = givens_serial(&mut serial).unwrap();
        totals[0] += c.swap;
        totals[1] += c.half;
        totals[2] += c.full;
        for threads in [1, 2, 4, 8] {
            for tile in [4, 32] {
                let mut t = a0.clone();
                givens_tiled(&mut t, tile, &cfg(threads)).unwrap();
                assert!(
                    t.bitwise_eq(&serial),
                    "case {case} ({m}x{n}) threads {threads} tile {tile}"
                );
            }
        }
    }
    assert!(totals.iter().all(|&c| c >= 1), "branch counts {totals:?}");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Outcome::Pass(format!(
        "20 inputs x 8 configs bitwise equal, branches {totals:?}, {elapsed:.1?}"
    ))
}

fn gaussj_case(a: &DenseMatrix, threads: &[usize], expect: Option<usize>) -> GaussjResult {
    let n = a.rows();
    let serial = gaussj_serial(a.clone(), ones(n)).unwrap();
    let mut last = None;
    for &t in threads {
        for tile in [4, 32] {
            let spec = gaussj_speculative(a.clone(), ones(n), tile, &cfg(t)).unwrap();
            assert!(spec.same_output(&serial), "n={n} threads {t} tile {tile}");
            match expect {
                Some(m) => assert_eq!(spec.misspeculations, m, "n={n} threads {t}"),
                None => assert!(spec.misspeculations >= 1),
            }
            last = Some(spec);
        }
    }
    last.unwrap()
}

fn gaussj_exactness() -> Outcome {
    let start = Instant::now();
    gaussj_case(&gen_random_dense(500, &mut Rng::new(42)), &[1, 2, 4, 8], Some(0));
    gaussj_case(&gen_spd(300, &mut Rng::new(7)), &[1, 8], Some(0));
    for k in [0, 1, 37, 98] {
        let r = gaussj_case(
            &gen_zero_pivot(100, k, &mut Rng::new(3)).unwrap(),
            &[1, 2, 4, 8],
            Some(1),
        );
        assert_eq!(r.swaps.len(), 1);
    }
    let mut rng = Rng::new(5);
    let mut a = gen_random_dense(200, &mut rng);
    for k in [20, 90, 150] {
        plant_zero_pivot(&mut a, k, &mut rng).unwrap();
    }
    let r = gaussj_case(&a, &[1, 4, 8], None);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Outcome::Pass(format!(
        "all cases bitwise equal; 3-plant input: {} misspeculations; {elapsed:.1?}",
        r.misspeculations
    ))
}

fn reductions() -> Outcome {
    let (a, v) = gen_block_sparse(2000, 8.0, 3, &mut Rng::new(2000));
    let input = SmvpInput::with_zero_w(a, v).unwrap();
    let scale = smvp_error_scale(&input);
    let mut serial = input.clone();
    smvp_serial(&mut serial);
    let mut worst: f64 = 0.0;
    for threads in [1, 2, 4, 8] {
        for s in Strategy::PARALLEL {
            let mut par = input.clone();
            smvp_parallel(&mut par, s, &cfg(threads)).unwrap();
            let err = max_scaled_error(&serial.w, &par.w, &scale);
            assert!(err <= 1e-12, "{s} threads {threads}: {err}");
            worst = worst.max(err);
        }
    }
    let det = ExecConfig::new(8, true).unwrap();
    let mut first = input.clone();
    smvp_parallel(&mut first, Strategy::Privatized, &det).unwrap();
    for _ in 1..5 {
        let mut again = input.clone();
        smvp_parallel(&mut again, Strategy::Privatized, &det).unwrap();
        assert!(again.w.bitwise_eq(&first.w), "privatized run not reproducible");
    }
    let am = ArgmaxInput::random(1_000_000, 1000, 8, &mut Rng::new(9)).unwrap();
    let mut am_serial = am.clone();
    argmax_update_serial(&mut am_serial);
    for s in [ArgmaxStrategy::CriticalSection, ArgmaxStrategy::Privatized] {
        let mut par = am.clone();
        argmax_update_parallel(&mut par, s, &cfg(8));
        assert!(par == am_serial, "argmax {s:?} differs");
    }
    Outcome::Pass(format!(
        "smvp max scaled error {worst:.2e}; privatized reproducible; argmax exact"
    ))
}

fn legality_checker() -> Outcome {
    let skew = SkewTileSchedule::wavefront(32).unwrap();
    let identity = SkewTileSchedule::identity(32).unwrap();
    assert_eq!(check_schedule(&givens_dependences(), &skew).unwrap(), Verdict::Legal);
    assert_eq!(
        check_schedule(&givens_dependences(), &identity).unwrap().to_string(),
        "Illegal (1,-1)"
    );
    match check_schedule(&gaussj_dependences(), &skew).unwrap() {
        Verdict::LegalUnderAssumptions(ids) => assert_eq!(ids.into_iter().collect::<Vec<_>>(), vec!["no-pivot"]),
        v => panic!("unexpected verdict {v}"),
    }
    let gj: Vec<_> = gaussj_dependences()
        .into_iter()
        .filter(|d| *d.tag() == DepTag::Always)
        .collect();
    let mut domains = 0;
    for tile in [1, 2, 3, 4, 5, 8] {
        let s = SkewTileSchedule::wavefront(tile).unwrap();
        for a in 1..=20usize {
            for b in 1..=20usize {
                let mut cases = vec![(IterationDomain::rect(0..a as i64, 0..b as i64), true)];
                if a >= 2 {
                    cases.push((IterationDomain::givens(a, b), true));
                }
                if a >= 2 && b < a - 1 {
                    cases.push((IterationDomain::gaussj(a, b), false));
                }
                for (d, rot) in cases {
                    let plan = wavefronts(&d, &s);
                    let deps = if rot { givens_dependences() } else { gj.clone() };
                    assert!(assert_wavefront_independence(&deps, &plan, &s), "{d:?} tile {tile}");
                    if rot {
                        assert!(assert_wavefront_independence(&gj, &plan, &s), "{d:?} tile {tile}");
                    }
                    domains += 1;
                }
            }
        }
    }
    Outcome::Pass(format!("preset verdicts hold; {domains} domains wavefront-independent"))
}

fn division() -> Outcome {
    assert_eq!(floord(-1, 32).unwrap(), -1);
    assert_eq!(ceild(33, 32).unwrap(), 2);
    for d in 1..=64i64 {
        for n in -10_000..=10_000i64 {
            let q = floord(n, d).unwrap();
            assert!(q * d <= n && n < (q + 1) * d, "floord({n},{d}) = {q}");
            let c = ceild(n, d).unwrap();
            assert!((c - 1) * d < n && n <= c * d, "ceild({n},{d}) = {c}");
        }
    }
    Outcome::Pass("Euclidean property over 1,280,064 pairs; spot values hold".into())
}

fn adaptive_rule() -> Outcome {
    const MIB4: u64 = 4 << 20;
    let f = |b, t, c| WorkloadFeatures {
        reduction_slot_bytes: b,
        threads: t,
        cache_budget_bytes: c,
    };
    assert_eq!(choose_strategy(&f(8_000, 1, MIB4)), Strategy::Serial);
    assert_eq!(choose_strategy(&f(8_000, 8, MIB4)), Strategy::Privatized);
    assert_eq!(choose_strategy(&f(8_000_000, 8, MIB4)), Strategy::Atomic);
    let mut rng = Rng::new(6);
    for _ in 0..1000 {
        let bytes = rng.below(1 << 24) as u64;
        let budget = rng.below(1 << 28) as u64;
        let threads = 2 + rng.below(63);
        let base = choose_strategy(&f(bytes, threads, budget));
        let more = bytes + rng.below(1 << 24) as u64;
        if base == Strategy::Atomic {
            assert_eq!(choose_strategy(&f(more, threads, budget)), Strategy::Atomic);
        }
        let fewer = 2 + rng.below(threads - 1);
        if base == Strategy::Privatized {
            assert_eq!(choose_strategy(&f(bytes, fewer, budget)), Strategy::Privatized);
        }
    }
    Outcome::Pass("rule examples exact; monotone over 1000 random feature vectors".into())
}

fn median_ms(reps: usize, mut f: impl FnMut() -> Duration) -> f64 {
    let mut t: Vec<f64> = (0..reps).map(|_| f().as_secs_f64() * 1e3).collect();
    t.sort_by(f64::total_cmp);
    t[reps / 2]
}

fn soft_scaling() -> Outcome {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    if cores < 4 {
        return Outcome::Warn(format!("host has {cores} core(s), need 4; scaling checks skipped"));
    }
    let a = gen_random_dense(2000, &mut Rng::new(1));
    let timed = |f: &mut dyn FnMut()| {
        let s = Instant::now();
        f();
        s.elapsed()
    };
    let gs = median_ms(3, || {
        let (a, b) = (a.clone(), ones(2000));
        timed(&mut || {
            let _ = gaussj_serial(a.clone(), b.clone()).unwrap();
        })
    });
    let gp = median_ms(3, || {
        let (a, b) = (a.clone(), ones(2000));
        timed(&mut || {
            let _ = gaussj_speculative(a.clone(), b.clone(), 32, &cfg(4)).unwrap();
        })
    });
    let c = gen_complex_random(2000, 2000, &mut Rng::new(2), &[]).unwrap();
    let rs = median_ms(3, || {
        let mut m = c.clone();
        timed(&mut || {
            let _ = givens_serial(&mut m).unwrap();
        })
    });
    let rp = median_ms(3, || {
        let mut m = c.clone();
        timed(&mut || {
            let _ = givens_tiled(&mut m, 32, &cfg(4)).unwrap();
        })
    });
    let (sa, sv) = gen_block_sparse(100_000, 8.0, 3, &mut Rng::new(3));
    let input = SmvpInput::with_zero_w(sa, sv).unwrap();
    let strat = |s: Strategy| {
        median_ms(3, || {
            let mut i = input.clone();
            timed(&mut || smvp_parallel(&mut i, s, &cfg(8)).unwrap())
        })
    };
    let (locked, atomic) = (strat(Strategy::Locked), strat(Strategy::Atomic));
    let (g_up, r_up) = (gs / gp, rs / rp);
    assert!(g_up >= 2.0, "gaussj speedup {g_up:.2}");
    assert!(r_up >= 2.0, "givens speedup {r_up:.2}");
    assert!(locked > atomic, "locked {locked:.1} ms vs atomic {atomic:.1} ms");
    Outcome::Pass(format!(
        "gaussj {g_up:.2}x, givens {r_up:.2}x at 4 threads; smvp locked {locked:.1} ms > atomic {atomic:.1} ms"
    ))
}

fn cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bench");
    let o = Command::new(bin)
        .args(["legality", "--preset", "gaussj", "--skew", "1,0,1,1"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stdout).contains("no-pivot"));
    let path = std::env::temp_dir().join(format!("wavespec-acceptance-{}.mtx", std::process::id()));
    std::fs::write(&path, "%%MatrixMarket matrix array real general\n2 2\n2\n4\n1\n1\n").unwrap();
    let o = Command::new(bin)
        .args(["run", "--input", path.to_str().unwrap(), "--reps", "1"])
        .env_remove("BENCH_THREADS")
        .output()
        .unwrap();
    let _ = std::fs::remove_file(&path);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(
        out.lines().next(),
        Some("kernel,strategy,threads,size,median_time_ms,speedup,verified,misspeculations,swaps")
    );
    Outcome::Pass("legality exits 3 naming no-pivot; run on a 2x2 file prints the exact header".into())
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 8] = [
        ("Givens exactness", givens_exactness),
        ("Gauss-J exactness", gaussj_exactness),
        ("reductions", reductions),
        ("legality checker", legality_checker),
        ("floord/ceild", division),
        ("adaptive rule", adaptive_rule),
        ("soft scaling", soft_scaling),
        ("CLI", cli),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(Outcome::Pass(detail)) => println!("PASS {} {name}: {detail}", i + 1),
            Ok(Outcome::Warn(detail)) => println!("WARN {} {name}: {detail}", i + 1),
            Err(p) => {
                failed += 1;
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
