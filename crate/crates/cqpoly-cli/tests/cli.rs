//! End-to-end tests of the `cqpoly` binary: exit codes, output formats,
//! and determinism. Every test shells out to the compiled binary, so
//! these exercise argument parsing and report emission exactly as a
//! user would hit them.

use std::process::{Command, Output};

use cqpoly::VerificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn eval_known_values() {
    let cases: &[(&[&str], f64)] = &[
        (&["eval", "hermite", "n=2", "x=0", "q=0.5"], -0.5),
        (&["eval", "qbessel2", "nu=0", "z=0", "q=0.5"], 1.0),
        (&["eval", "eps-q", "x=0", "a=-i", "b=0", "q=0.5"], 1.0),
    ];
    for (args, expected) in cases {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let out = run(&full);
        assert_eq!(code(&out), 0, "args {args:?}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let re = v["value_re"].as_f64().unwrap();
        let im = v["value_im"].as_f64().unwrap();
        assert!(
            (re - expected).abs() < 1e-12 && im.abs() < 1e-12,
            "args {args:?} gave {re} + {im}i, expected {expected}"
        );
        assert!(v.get("error").is_none(), "no error field on success");
    }
}

#[test]
fn usage_errors_exit_two() {
    // Unknown selector, missing required parameter, stray parameter,
    // and an out-of-range q are all configuration errors, not failures.
    for args in [
        &["eval", "nosuch", "x=1"][..],
        &["eval", "hermite", "x=0", "q=0.5"],
        &["eval", "hermite", "n=2", "x=0", "q=0.5", "bogus=1"],
        &["verify", "heisenberg", "q=1.5"],
        &["nosuchcommand"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "args {args:?}");
        assert!(out.stdout.is_empty(), "no payload on usage error: {args:?}");
    }
}

#[test]
fn verification_exit_codes_track_outcome() {
    let out = run(&["verify", "heisenberg", "q=0.7", "nmax=12"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("PASS"));

    // An absurdly tight tolerance forces a legitimate FAIL, exit 1.
    let out = run(&["verify", "y-bessel-6-14", "tol=1e-20"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn json_report_round_trips() {
    let out = run(&["verify", "q-binomial", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let report: VerificationReport = serde_json::from_str(&text).expect("parses as a report");
    assert!(report.passed);
    assert_eq!(report.identity_id, "q-binomial");
    assert_eq!(report.grid.len(), report.residuals.len());

    // Field-for-field: serializing the parsed struct reproduces the
    // emitted bytes, so nothing is lost or reordered in either direction.
    let reserialized = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(text.trim_end(), reserialized);
    let reparsed: VerificationReport = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(report, reparsed);
}

#[test]
fn output_is_deterministic() {
    for format in ["json", "csv", "human"] {
        let a = run(&["verify", "gen-func-4-10", "--format", format]);
        let b = run(&["verify", "gen-func-4-10", "--format", format]);
        assert_eq!(a.stdout, b.stdout, "format {format}");
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn csv_emits_one_row_per_grid_point() {
    let out = run(&["verify", "gen-func-4-10", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("identity,x,b,q,residual,tolerance,passed"));
    // Default grid: 5 abscissae crossed with 3 values of b.
    assert_eq!(lines.clone().count(), 15);
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7, "row {line}");
        assert_eq!(fields[0], "generating-function");
        assert!(fields[4].parse::<f64>().unwrap() >= 0.0);
        assert_eq!(fields[6], "true");
    }
}

#[test]
fn gegenbauer_prefactor_resolution_noted() {
    let out = run(&["verify", "gegenbauer-6-22", "q=0.5", "ell=1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report: VerificationReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.passed);
    assert!(
        report
            .metadata
            .iter()
            .any(|m| m.contains("matched prefactor candidate")),
        "metadata names the resolved prefactor: {:?}",
        report.metadata
    );
}

#[test]
fn suite_passes_at_default_and_near_one() {
    let out = run(&["suite"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("suite: PASS (10/10 criteria)"));

    let out = run(&["suite", "--q", "0.95"]);
    assert_eq!(code(&out), 0, "stdout:\n{}", stdout(&out));
    assert!(stdout(&out).contains("suite: PASS (10/10 criteria)"));
}

#[test]
fn tightened_tolerances_enumerate_failures() {
    let out = run(&["suite", "tol-scale=0.01"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("suite: FAIL"));
    // Each failing criterion lists the reports that broke it.
    assert!(text.contains("failed:"));
    assert!(text.lines().filter(|l| l.contains("FAIL")).count() >= 2);
}

#[test]
fn out_flag_writes_payload_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let piped = run(&["verify", "q-binomial", "--format", "json"]);
    let out = run(&[
        "verify",
        "q-binomial",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "payload goes to the file, not stdout");
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, piped.stdout);
}

#[test]
fn kv_q_overrides_flag_q() {
    let a = run(&["eval", "hermite", "n=3", "x=0.2", "q=0.7", "--q", "0.5", "--format", "json"]);
    let b = run(&["eval", "hermite", "n=3", "x=0.2", "q=0.7", "--format", "json"]);
    assert_eq!(code(&a), 0);
    let va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(va["value_re"], vb["value_re"]);
    assert_eq!(va["params"]["q"], "0.7");
}

#[test]
fn limits_and_ortho_succeed() {
    // Only the q closest to 1 is judged; the earlier points record the
    // convergence trend. The default grid ends at q = 0.999.
    let out = run(&["limits", "hermite", "--format", "csv"]);
    assert_eq!(code(&out), 0, "stdout:\n{}", stdout(&out));
    let text = stdout(&out);
    let errs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "errs shrink: {errs:?}");

    let out = run(&["ortho", "hermite", "q=0.6", "nmax=6"]);
    assert_eq!(code(&out), 0, "stdout:\n{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
}
