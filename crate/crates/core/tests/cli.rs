use serde_json::Value;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("verify runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn passing_run_exits_zero() {
    let out = verify(&["--example", "so2-r2", "--check", "moment-identities,poisson-restriction", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
    assert_eq!(v["calibration"]["passing"], 1);
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["--example", "klein-bottle"][..],
        &["--check", "no-such-check"],
        &["--tol", "moment-identities"],
        &["--tol", "moment-identities=abc"],
        &["--example", "s1-s2", "--check", "surjectivity-certificate"],
        &["--format", "yaml"],
        &["--samples", "0"],
        &["--bogus-flag"],
    ] {
        let out = verify(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unattainable_tolerance_fails_with_reproduction() {
    let out = verify(&["--example", "so3-adj", "--check", "moment-identities", "--samples", "10", "--tol", "moment-identities=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    let r = &v["reports"][0];
    assert_eq!(r["status"], "fail");
    assert!(r["max_residual"].as_f64().unwrap() > 1e-30);
    let rep = &r["reproduction"];
    assert_eq!(rep["example"], "so3-adj");
    assert_eq!(rep["check"], "moment-identities");
    assert_eq!(rep["seed"], 42);
    assert_eq!(rep["samples"], 10);
    assert!(rep["index"].as_u64().unwrap() < 10);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let run = |seed: &str| {
        let out = verify(&[
            "--example",
            "s1-s2",
            "--check",
            "totally-geodesic-tsigma",
            "--seed",
            seed,
            "--samples",
            "30",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        std::fs::read(&path).unwrap()
    };
    let first = run("7");
    assert!(!first.is_empty());
    assert_eq!(first, run("7"));
    assert_ne!(first, run("8"));
}

#[test]
fn names_are_case_insensitive_and_markdown_renders() {
    let out = verify(&["--example", "SO2-R2", "--check", "Moment-Identities", "--samples", "5", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| so2-r2 | moment-identities | pass |"), "{text}");
}

#[test]
fn inapplicable_checks_are_skipped_under_all() {
    let out = verify(&["--example", "s1-s2", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let checks: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert_eq!(checks.len(), 9);
    assert!(!checks.contains(&"surjectivity-certificate"));
}
