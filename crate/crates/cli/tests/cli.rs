//! End-to-end tests of the `qregress` binary: output shape, determinism,
//! exit codes, config handling.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qregress"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Parse CSV text into (header, rows of f64 fields), skipping `#` metadata.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .expect("header line")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|f| f.parse::<f64>().expect("numeric field"))
                .collect()
        })
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let idx = header.iter().position(|h| h == name).expect("column");
    rows.iter().map(|r| r[idx]).collect()
}

#[test]
fn measures_default_grid_shape_and_values() {
    let out = run(&["measures"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(header, ["lambda", "s", "blp", "rhp"]);
    // 100 couplings × 6 exponents.
    assert_eq!(rows.len(), 600);
}

#[test]
fn measures_matches_closed_forms() {
    let out = run(&[
        "measures",
        "--grid",
        "lambda:1:2:2:lin",
        "--grid",
        "s:3:4:2:lin",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    let blp = column(&header, &rows, "blp");
    let rhp = column(&header, &rows, "rhp");
    // Row order: s outer, lambda inner. λ=1, s=3 first.
    assert!((blp[0] - 0.043226973813092595).abs() < 1e-12);
    assert!((rhp[0] - 0.125).abs() < 1e-12);
    assert!((blp[2] - 0.0532502846127139).abs() < 1e-12);
    assert!((rhp[2] - 0.5).abs() < 1e-12);
}

#[test]
fn measures_vanish_for_low_exponents() {
    let out = run(&[
        "measures",
        "--grid",
        "lambda:0.5:3:6:lin",
        "--grid",
        "s:1:2:2:lin",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    for value in column(&header, &rows, "blp")
        .iter()
        .chain(column(&header, &rows, "rhp").iter())
    {
        assert_eq!(*value, 0.0);
    }
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let args = [
        "measures",
        "--grid",
        "lambda:0.1:2:40:log",
        "--grid",
        "s:3:5:3:lin",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout, "repeat runs must be byte-identical");

    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = args.to_vec();
    four.extend(["--threads", "4"]);
    assert_eq!(
        run(&one).stdout,
        run(&four).stdout,
        "results must not depend on the thread count"
    );
}

#[test]
fn qrt_zero_coupling_and_monotone_rows() {
    let out = run(&["qrt", "--grid", "lambda:0:3:7:lin", "--grid", "s:2:3:2:lin"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    let z = column(&header, &rows, "z");
    assert_eq!(z[0], 0.0, "λ=0 row must be exactly zero");
    for s_block in z.chunks(7) {
        for pair in s_block.windows(2) {
            assert!(pair[1] >= pair[0], "z not nondecreasing along λ");
        }
    }
}

#[test]
fn qrt_oracle_check_column_agrees() {
    let out = run(&[
        "qrt",
        "--grid",
        "lambda:0.5:2:4:lin",
        "--grid",
        "s:2:4:3:lin",
        "--oracle-check",
        "--modes",
        "4096",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    let z = column(&header, &rows, "z");
    let z_oracle = column(&header, &rows, "z_oracle");
    for (a, b) in z.iter().zip(&z_oracle) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn qrt_rejects_finite_temperature_and_low_s() {
    let out = run(&["qrt", "--beta", "2.0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["qrt", "--grid", "s:0.5:4:3:lin"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn photonic_panel_a_semigroup_column_and_saturation() {
    let out = run(&[
        "photonic",
        "--panel",
        "a",
        "--grid",
        "delta_delta_omega:0:5:3:lin",
        "--grid",
        "tau:0:4:5:lin",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    let ddw = column(&header, &rows, "delta_delta_omega");
    let z = column(&header, &rows, "z");
    let flag = column(&header, &rows, "flag");
    assert!(flag.iter().all(|&f| f == 0.0));
    // Δδω = 0 is the semigroup line: z = 0 over the whole tau column.
    for (x, z) in ddw.iter().zip(&z) {
        if *x == 0.0 {
            assert!(z.abs() < 1e-12);
        }
    }
    // Saturation along Δδω: large-Δδω values level off near the r=1 limit.
    let z_at = |x: f64, tau_idx: usize| -> f64 {
        let i = ddw.iter().position(|&v| v == x).unwrap();
        z[i + tau_idx]
    };
    let (mid, hi) = (z_at(2.5, 4), z_at(5.0, 4));
    assert!(hi > 0.9, "expected near-saturated Z, got {hi}");
    assert!(hi > mid && hi - mid < 0.2, "no saturation: {mid} -> {hi}");
}

#[test]
fn photonic_panel_b_blp_and_semigroup_recovery() {
    let out = run(&[
        "photonic",
        "--panel",
        "b",
        "--grid",
        "delta_omega0:0:10:6:lin",
        "--grid",
        "tau:1:3:2:lin",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    let dw0 = column(&header, &rows, "delta_omega0");
    let z = column(&header, &rows, "z");
    let blp = column(&header, &rows, "blp");
    for ((x, z), blp) in dw0.iter().zip(&z).zip(&blp) {
        if *x == 0.0 {
            assert!(z.abs() < 1e-12, "Δω₀=0 must recover the semigroup");
            assert_eq!(*blp, 0.0);
        }
        if *x == 10.0 {
            assert!(*blp > 0.0);
        }
    }
}

#[test]
fn model_file_roundtrip_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.toml");
    std::fs::write(&path, "[model.ohmic]\nlambda = 2.0\ns = 3.0\nomega = 1.0\n").unwrap();
    let out = run(&[
        "oracle",
        "--model-file",
        path.to_str().unwrap(),
        "--s",
        "4.0",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(
        text.contains("ohmic lambda=2 s=4"),
        "flags must override file values: {text}"
    );

    let mixture = dir.path().join("mixture.toml");
    std::fs::write(
        &mixture,
        "[model.lorentzian_mixture]\ndelta_n = 1.0\n\
         [[model.lorentzian_mixture.components]]\nA = 0.5\nomega0 = 1.0\ndelta_omega = 0.5\n\
         [[model.lorentzian_mixture.components]]\nA = 0.5\nomega0 = -1.0\ndelta_omega = 0.5\n",
    )
    .unwrap();
    let out = run(&[
        "photonic",
        "--model-file",
        mixture.to_str().unwrap(),
        "--grid",
        "tau:0:2:5:lin",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(header, ["tau", "z", "flag"]);
    assert_eq!(rows.len(), 5);

    // Wrong model kind for the subcommand is a usage error.
    let out = run(&["measures", "--model-file", mixture.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // Malformed TOML is a usage error carrying line/field diagnostics.
    let broken = dir.path().join("broken.toml");
    std::fs::write(&broken, "[model.ohmic]\nlambda = \"oops\"\n").unwrap();
    let out = run(&["measures", "--model-file", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("line 2"),
        "want line diagnostics, got: {stderr}"
    );
}

#[test]
fn check_report_is_json_with_named_checks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["check", "--modes", "512", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "check must pass on defaults");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.len() >= 10, "want >= 10 named checks");
    for check in checks {
        assert!(check["pass"].as_bool().unwrap(), "{check}");
        assert!(check["name"].is_string());
        assert!(check["max_residual"].is_number());
        assert!(check["tolerance"].is_number());
    }
    assert_eq!(doc["all_pass"], true);
}

#[test]
fn oracle_rows_match_closed_forms() {
    let out = run(&["oracle", "--modes", "2048", "--grid", "t2:1:4:4:lin"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    let closed = column(&header, &rows, "gamma21_closed");
    let oracle = column(&header, &rows, "gamma21_oracle");
    for (c, o) in closed.iter().zip(&oracle) {
        assert!((c - o).abs() < 1e-6 * c);
    }
    let z_closed = column(&header, &rows, "z_closed");
    let z_oracle = column(&header, &rows, "z_oracle");
    for (c, o) in z_closed.iter().zip(&z_oracle) {
        assert!((c - o).abs() < 1e-6 * (1.0 + c));
    }
}

#[test]
fn json_format_parses() {
    let out = run(&[
        "measures",
        "--grid",
        "lambda:0.5:1:2:lin",
        "--grid",
        "s:3:4:2:lin",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["columns"][0], "lambda");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert!(doc["metadata"]["tool"]
        .as_str()
        .unwrap()
        .contains("qregress"));
}

#[test]
fn out_file_equals_stdout_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let args = [
        "qrt",
        "--grid",
        "lambda:0.5:2:3:lin",
        "--grid",
        "s:3:4:2:lin",
    ];
    let stdout_run = run(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let file_run = run(&with_out);
    assert!(file_run.status.success());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        stdout_run.stdout,
        "--out must write exactly the stdout bytes"
    );
    assert!(Path::new(&path).exists());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["measures", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&["measures", "--grid", "bogus"]).status.code(), Some(1));
    assert_eq!(
        run(&["measures", "--grid", "lambda:1:2:1:lin"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["measures", "--lambda", "-1"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--s", "0.5"]).status.code(), Some(1));
    assert_eq!(run(&["oracle", "--beta", "1.0"]).status.code(), Some(1));
    // Unknown axis names are rejected rather than ignored.
    assert_eq!(
        run(&["measures", "--grid", "tau:0:1:5:lin"]).status.code(),
        Some(1)
    );
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["measures", "--help"]).status.code(), Some(0));
}
