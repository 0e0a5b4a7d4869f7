use std::process::{Command, Output};

fn dowling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dowling"))
        .args(args)
        .env_remove("DOWLING_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let out = dowling(&[
        "mobius", "--family", "pi-rj", "--m", "4", "--r", "2", "--j", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "2");

    let out = dowling(&["series", "--name", "cor3.4-dowling", "--s", "1", "--T", "5"]);
    assert_eq!(stdout(&out).trim(), "-1, 0, 0, 0, 0, 0");

    let out = dowling(&["descents", "--word", "aba", "--q"]);
    assert!(stdout(&out).contains("q + 2q² + q³ + q⁴"));
}

#[test]
fn verify_exit_codes() {
    let out = dowling(&["verify", "thm5.4", "--r", "2", "--k", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pass"));

    assert_eq!(dowling(&["verify", "bogus"]).status.code(), Some(2));
    // j > m is not a valid extended lattice
    let bad = dowling(&["el-check", "--m", "3", "--r", "2", "--j", "5"]);
    assert_eq!(bad.status.code(), Some(2));
    let guarded = dowling(&[
        "lattice",
        "--family",
        "pi",
        "--n",
        "8",
        "--max-lattice-m",
        "5",
    ]);
    assert_eq!(guarded.status.code(), Some(2));
}

#[test]
fn csv_report_header() {
    let out = dowling(&["verify", "cor4.7", "--k", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next(),
        Some("suite,kind,name,params,outcome,passed")
    );
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = dowling(&[
        "verify",
        "thm6.1",
        "--m",
        "5",
        "--r",
        "2",
        "--j",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["suite"], "thm6.1");
    assert_eq!(v["passed"], true);
}

#[test]
fn cache_hit_equals_cold_result() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "--cache-dir",
        cache,
        "el-check",
        "--m",
        "6",
        "--r",
        "2",
        "--j",
        "2",
    ];
    let cold = dowling(&args);
    assert_eq!(cold.status.code(), Some(0));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = dowling(&args);
    assert_eq!(stdout(&cold), stdout(&warm));

    let cleared = dowling(&["--cache-dir", cache, "cache", "clear"]);
    assert_eq!(cleared.status.code(), Some(0));
}

#[test]
fn job_count_does_not_change_output() {
    let args = ["verify", "thm3.3", "--seed", "7", "--format", "csv"];
    let one = dowling(&[&["--jobs", "1"][..], &args].concat());
    let four = dowling(&[&["--jobs", "4"][..], &args].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
}
