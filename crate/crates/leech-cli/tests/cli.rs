//! End-to-end tests of the `leech` binary: exit codes, file contracts, and
//! the solve/check round trip.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn leech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leech"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_example(dir: &Path) -> std::path::PathBuf {
    let problem = dir.join("problem.json");
    let out = leech(&["example", "-o", path_str(&problem)]);
    assert!(out.status.success());
    problem
}

#[test]
fn example_solve_check_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_example(dir.path());
    let solution = dir.path().join("solution.json");

    let out = leech(&["solve", path_str(&problem), "-o", path_str(&solution)]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&solution).unwrap()).unwrap();
    assert_eq!(parsed["status"], "solved");
    assert_eq!(parsed["branch"], "strictly_positive");
    // X(z) = z/(2 sqrt(2)) (1, 1)^T: B = 1/2, C = (1/sqrt(2)) (1, 1)^T, D = 0.
    let b = parsed["X"]["B"][0][0][0].as_f64().unwrap();
    assert!((b - 0.5).abs() < 1e-10);
    let c0 = parsed["X"]["C"][0][0][0].as_f64().unwrap();
    let c1 = parsed["X"]["C"][1][0][0].as_f64().unwrap();
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    assert!((c0 - inv_sqrt2).abs() < 1e-10 && (c1 - inv_sqrt2).abs() < 1e-10);
    let residual = parsed["diagnostics"]["leech_residual"].as_f64().unwrap();
    assert!(residual < 1e-10);

    let out = leech(&["check", path_str(&problem), path_str(&solution)]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("check passed"));
}

#[test]
fn example_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    assert!(leech(&["example", "-o", path_str(&first)]).status.success());
    assert!(leech(&["example", "-o", path_str(&second)]).status.success());
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn malformed_problem_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("broken.json");
    // Missing D2 entirely.
    std::fs::write(
        &problem,
        r#"{
  "schema_version": "1",
  "A": [[[0.0, 0.0]]],
  "B1": [[[0.0, 0.0], [0.0, 0.0]]],
  "B2": [[[0.5, 0.0]]],
  "C": [[[1.0, 0.0]]],
  "D1": [[[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]]
}"#,
    )
    .unwrap();
    let solution = dir.path().join("solution.json");
    let out = leech(&["solve", path_str(&problem), "-o", path_str(&solution)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!solution.exists());
}

#[test]
fn ragged_matrix_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("ragged.json");
    std::fs::write(
        &problem,
        r#"{
  "schema_version": "1",
  "A": [[[0.0, 0.0]]],
  "B1": [[[0.0, 0.0], [0.0, 0.0]]],
  "B2": [[[0.5, 0.0]]],
  "C": [[[1.0, 0.0]]],
  "D1": [[[0.7, 0.0], [0.7, 0.0]], [[0.7, 0.0]]],
  "D2": [[[0.0, 0.0]]]
}"#,
    )
    .unwrap();
    let out = leech(&["solve", path_str(&problem), "-o", path_str(&dir.path().join("s.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ragged"));
}

#[test]
fn infeasible_problem_exits_two_with_margin_report() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("infeasible.json");
    // The example with K scaled to 2z.
    std::fs::write(
        &problem,
        r#"{
  "schema_version": "1",
  "A": [[[0.0, 0.0]]],
  "B1": [[[0.0, 0.0], [0.0, 0.0]]],
  "B2": [[[2.0, 0.0]]],
  "C": [[[1.0, 0.0]]],
  "D1": [[[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]],
  "D2": [[[0.0, 0.0]]]
}"#,
    )
    .unwrap();
    let solution = dir.path().join("solution.json");
    let out = leech(&["solve", path_str(&problem), "-o", path_str(&solution)]);
    assert_eq!(out.status.code(), Some(2));
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&solution).unwrap()).unwrap();
    assert_eq!(parsed["status"], "not_solvable");
    assert!(parsed["diagnostics"]["solvability_margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn semidefinite_symbol_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("semidefinite.json");
    // G(z) = (1 + z)/2, K = 0: the symbol vanishes at z = -1 only.
    std::fs::write(
        &problem,
        r#"{
  "schema_version": "1",
  "A": [[[0.0, 0.0]]],
  "B1": [[[0.5, 0.0]]],
  "B2": [[[0.0, 0.0]]],
  "C": [[[1.0, 0.0]]],
  "D1": [[[0.5, 0.0]]],
  "D2": [[[0.0, 0.0]]]
}"#,
    )
    .unwrap();
    let solution = dir.path().join("solution.json");
    let out = leech(&["solve", path_str(&problem), "-o", path_str(&solution)]);
    assert_eq!(out.status.code(), Some(3));
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&solution).unwrap()).unwrap();
    assert_eq!(parsed["status"], "unsupported");
}

#[test]
fn check_rejects_the_zero_function() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_example(dir.path());
    let solution = dir.path().join("zero.json");
    std::fs::write(
        &solution,
        r#"{
  "schema_version": "1",
  "status": "solved",
  "X": {
    "A": [],
    "B": [],
    "C": [[], []],
    "D": [[[0.0, 0.0]], [[0.0, 0.0]]]
  },
  "diagnostics": {}
}"#,
    )
    .unwrap();
    let out = leech(&["check", path_str(&problem), path_str(&solution)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_accepts_other_members_of_the_solution_family() {
    // X(z) = z/(2 sqrt(2)) (1, 1)^T + sqrt(3)/(2 sqrt(2)) (1, -1)^T is a
    // different solution of the example problem with norm exactly one.
    let dir = tempfile::tempdir().unwrap();
    let problem = write_example(dir.path());
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let b = 1.0;
    let c0 = 1.0 / (2.0 * s2);
    let d0 = s3 / (2.0 * s2);
    let solution = dir.path().join("family.json");
    std::fs::write(
        &solution,
        format!(
            r#"{{
  "schema_version": "1",
  "status": "solved",
  "X": {{
    "A": [[[0.0, 0.0]]],
    "B": [[[{b}, 0.0]]],
    "C": [[[{c0}, 0.0]], [[{c0}, 0.0]]],
    "D": [[[{d0}, 0.0]], [[{minus_d0}, 0.0]]]
  }},
  "diagnostics": {{}}
}}"#,
            b = b,
            c0 = c0,
            d0 = d0,
            minus_d0 = -d0,
        ),
    )
    .unwrap();
    let out = leech(&["check", path_str(&problem), path_str(&solution)]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn solve_then_check_on_generated_solution_always_passes() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_example(dir.path());
    let solution = dir.path().join("solution.json");
    assert_eq!(
        leech(&["solve", path_str(&problem), "-o", path_str(&solution)]).status.code(),
        Some(0)
    );
    assert_eq!(
        leech(&["check", path_str(&problem), path_str(&solution)]).status.code(),
        Some(0)
    );
}

#[test]
fn nonminimal_input_warns_and_require_minimal_aborts() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("nonminimal.json");
    // The example problem padded with an unreachable, unobservable state.
    std::fs::write(
        &problem,
        r#"{
  "schema_version": "1",
  "A": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
  "B1": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
  "B2": [[[0.5, 0.0]], [[0.0, 0.0]]],
  "C": [[[1.0, 0.0], [0.0, 0.0]]],
  "D1": [[[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]],
  "D2": [[[0.0, 0.0]]]
}"#,
    )
    .unwrap();
    let solution = dir.path().join("solution.json");

    // Strict mode refuses to run.
    let out = leech(&[
        "solve",
        path_str(&problem),
        "-o",
        path_str(&solution),
        "--require-minimal",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not minimal"));

    // Default mode warns and proceeds; this particular degenerate state
    // breaks the inner completion, which is reported, not panicked.
    let out = leech(&["solve", path_str(&problem), "-o", path_str(&solution)]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning") && stderr.contains("not minimal"));
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn factor_subcommand_writes_the_spectral_factor() {
    let dir = tempfile::tempdir().unwrap();
    let symbol = dir.path().join("symbol.json");
    std::fs::write(
        &symbol,
        r#"{
  "schema_version": "1",
  "A": [[[0.0, 0.0]]],
  "C": [[[1.0, 0.0]]],
  "Gamma": [[[0.0, 0.0]]],
  "R0": [[[0.75, 0.0]]]
}"#,
    )
    .unwrap();
    let factor = dir.path().join("factor.json");
    let out = leech(&["factor", path_str(&symbol), "-o", path_str(&factor)]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&factor).unwrap()).unwrap();
    let q = parsed["Q"][0][0][0].as_f64().unwrap();
    assert!((q - 4.0 / 3.0).abs() < 1e-12);
    let phi0 = parsed["Phi"]["D"][0][0][0].as_f64().unwrap();
    assert!((phi0 - 3f64.sqrt() / 2.0).abs() < 1e-12);
    assert!(parsed["closed_loop_spectral_radius"].as_f64().unwrap() < 1.0);
}

#[test]
fn factor_rejects_indefinite_symbols() {
    let dir = tempfile::tempdir().unwrap();
    let symbol = dir.path().join("negative.json");
    std::fs::write(
        &symbol,
        r#"{
  "schema_version": "1",
  "A": [[[0.0, 0.0]]],
  "C": [[[1.0, 0.0]]],
  "Gamma": [[[0.0, 0.0]]],
  "R0": [[[-3.0, 0.0]]]
}"#,
    )
    .unwrap();
    let out = leech(&["factor", path_str(&symbol), "-o", path_str(&dir.path().join("f.json"))]);
    assert_eq!(out.status.code(), Some(3));
}
