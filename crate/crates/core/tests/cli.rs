use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bench");
const HEADER: &str = "kernel,strategy,threads,size,median_time_ms,speedup,verified,misspeculations,swaps";

fn bench(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("BENCH_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn legality_presets() {
    for (args, code, text) in [
        (["--preset", "givens", "--skew", "1,0,1,1"], 0, "Legal"),
        (
            ["--preset", "gaussj", "--skew", "1,0,1,1"],
            3,
            "LegalUnderAssumptions {no-pivot}",
        ),
        (["--preset", "givens", "--skew", "identity"], 4, "Illegal (1,-1)"),
    ] {
        let mut full = vec!["legality"];
        full.extend(args);
        let o = bench(&full);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert_eq!(stdout(&o).trim(), text);
    }
}

#[test]
fn legality_from_file() {
    let dir = std::env::temp_dir().join(format!("wavespec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("deps.txt");
    std::fs::write(&good, "[1,1] [0,0] always 1\n[1,1] [-inf,inf] no-pivot 0.01\n").unwrap();
    let o = bench(&["legality", "--deps", good.to_str().unwrap(), "--skew", "1,0,1,1"]);
    assert_eq!(o.status.code(), Some(3));
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "[1,1] oops always 1\n").unwrap();
    let o = bench(&["legality", "--deps", bad.to_str().unwrap(), "--skew", "1,0,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bench(&["legality", "--deps", dir.join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_on_market_file() {
    let path = std::env::temp_dir().join(format!("wavespec-cli-{}.mtx", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 2\n1 2 1\n2 1 4\n2 2 1"
    )
    .unwrap();
    let o = bench(&[
        "run",
        "--input",
        path.to_str().unwrap(),
        "--threads",
        "1,2",
        "--reps",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("gaussj,serial,1,2,"));
    assert!(lines[2..].iter().all(|l| l.contains(",exact,0,0")));
}

#[test]
fn run_errors() {
    assert_eq!(bench(&["run", "--input", "/nonexistent/x.mtx"]).status.code(), Some(2));
    assert_eq!(bench(&["run", "--kernel", "nope"]).status.code(), Some(2));
    assert_eq!(
        bench(&["run", "--kernel", "givens", "--strategy", "locked", "--size", "8"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn env_overrides_threads() {
    let o = Command::new(BIN)
        .args([
            "run",
            "--kernel",
            "smvp",
            "--strategy",
            "auto",
            "--size",
            "300",
            "--threads",
            "1,2,4",
            "--reps",
            "1",
        ])
        .env("BENCH_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("smvp,auto→privatized,2,300,"));
}

#[test]
fn csv_stable_except_timings() {
    let args = [
        "run",
        "--kernel",
        "gaussj",
        "--size",
        "60",
        "--plant",
        "20",
        "--threads",
        "1,3",
        "--reps",
        "1",
    ];
    let strip = |s: String| -> Vec<String> {
        s.lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                if f[4] != "median_time_ms" {
                    f[4] = "";
                    f[5] = "";
                }
                f.join(",")
            })
            .collect()
    };
    let a = strip(stdout(&bench(&args)));
    let b = strip(stdout(&bench(&args)));
    assert_eq!(a, b);
    assert!(a[2].ends_with("exact,1,1"));
}
