use std::path::{Path, PathBuf};

use serde_json::Value;
use varbvp_cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

const CUBIC: &str = r#"{"n":1,"N":2,"p":[1,1,1],"f":"x^3","box_radius":3,
  "claims":[{"condition":"A3.2","alpha":0.2,"q":4,"M":0}],"c":0}"#;

fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("varbvp").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn spectrum_of_the_unit_instance() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"n":1,"N":2,"p":[1,1,1],"f":"x^3"}"#);
    let (code, out, _) = cli(&["spectrum", p.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["fingerprint"].as_str().unwrap().len(), 64);
    for (k, want) in [("lambda", 1.0), ("lambda_max", 3.0), ("bound", 4.0), ("t_low", 0.5), ("t_high", 2.0)] {
        assert!((v[k].as_f64().unwrap() - want).abs() < 1e-12, "{k}");
    }
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["frobnicate"], "").0, EXIT_USAGE);
    assert_eq!(cli(&[], "").0, EXIT_USAGE);
    let short = write(dir.path(), "a.json", r#"{"n":1,"N":2,"p":[1,1],"f":"x"}"#);
    let (code, _, err) = cli(&["solve", short.to_str().unwrap()], "");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("N+n=3"), "{err}");
    let one = write(dir.path(), "b.json", r#"{"n":1,"N":1,"p":[1,1],"f":"x"}"#);
    assert!(cli(&["check", one.to_str().unwrap()], "").2.contains("N >= 2"));
    assert_eq!(cli(&["check", "/nonexistent/problem.json"], "").0, EXIT_USAGE);
    let big = write(dir.path(), "c.json", r#"{"n":1,"N":5,"p":[1,1,1,1,1,1],"f":"x^3"}"#);
    assert_eq!(cli(&["oracle", big.to_str().unwrap()], "").0, EXIT_USAGE);
    let p = write(dir.path(), "d.json", CUBIC);
    assert_eq!(cli(&["solve", p.to_str().unwrap(), "--tol", "-1"], "").0, EXIT_USAGE);
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = cli(&["--help"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("spectrum") && out.contains("verify"));
}

#[test]
fn solve_returns_nonzero_solutions_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", CUBIC);
    let (code, out, _) = cli(&["solve", p.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    let sols = v["solutions"].as_array().unwrap();
    let nonzero = sols.iter().filter(|s| s["x"].as_array().unwrap().iter().any(|x| x.as_f64().unwrap() != 0.0));
    assert!(nonzero.count() >= 2);
    assert_eq!(v["mountain_pass"][0]["variant"], "inf-max");

    let (code, checked, _) = cli(&["verify", p.to_str().unwrap(), "-"], &out);
    assert_eq!(code, EXIT_OK);
    let w = json(&checked);
    assert_eq!(w["verified"], true);
    for (a, b) in sols.iter().zip(w["solutions"].as_array().unwrap()) {
        assert!(b["residual"].as_f64().unwrap() <= 1e-8);
        let (ja, jb) = (a["J"].as_f64().unwrap(), b["J"].as_f64().unwrap());
        assert!((ja - jb).abs() <= 1e-12 * ja.abs().max(1.0));
        assert_eq!(a["origin"], b["origin"]);
    }
}

#[test]
fn verify_rejects_non_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", CUBIC);
    let s = write(dir.path(), "s.json", r#"{"solutions":[{"x":[0,0]},{"x":[0.5,0.1]}]}"#);
    let (code, out, _) = cli(&["verify", p.to_str().unwrap(), s.to_str().unwrap()], "");
    assert_eq!(code, EXIT_FAILURE);
    assert_eq!(json(&out)["verified"], false);
    let wrong = write(dir.path(), "w.json", r#"{"solutions":[{"x":[0,0,0]}]}"#);
    assert_eq!(cli(&["verify", p.to_str().unwrap(), wrong.to_str().unwrap()], "").0, EXIT_USAGE);
    let empty = write(dir.path(), "e.json", r#"{"solutions":[]}"#);
    assert_eq!(cli(&["verify", p.to_str().unwrap(), empty.to_str().unwrap()], "").0, EXIT_FAILURE);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", CUBIC);
    let a = cli(&["solve", p.to_str().unwrap(), "--seed", "7", "--starts", "60"], "");
    let b = cli(&["solve", p.to_str().unwrap(), "--seed", "7", "--starts", "60"], "");
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", CUBIC);
    let target = dir.path().join("report.json");
    let (code, out, _) = cli(&["check", p.to_str().unwrap(), "--out", target.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let v = json(&std::fs::read_to_string(&target).unwrap());
    assert_eq!(v["applicable"][1], "two-solutions-theorem-1");
}

#[test]
fn csv_output_keeps_the_schema_preamble() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", CUBIC);
    let (code, out, _) = cli(&["oracle", p.to_str().unwrap(), "--csv"], "");
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# schema_version=1");
    assert!(lines[1].starts_with("# fingerprint="));
    let header = lines.iter().position(|l| l.starts_with("J,")).unwrap();
    assert_eq!(lines.len() - header - 1, 5);
}

#[test]
fn coercive_instance_has_only_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"n":1,"N":2,"p":[1,1,1],"f":"-x^3","claims":[{"condition":"B3.2","alpha":-0.2,"q":4}]}"#,
    );
    let (code, out, _) = cli(&["solve", p.to_str().unwrap()], "");
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["strategy"]["senses"], serde_json::json!(["minimize"]));
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["kind"], "minimum");
}

#[test]
fn binary_runs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", CUBIC);
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_varbvp")).args(["spectrum", p.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(json(std::str::from_utf8(&out.stdout).unwrap())["lambda_max"].as_f64(), Some(3.0));
    let bad = std::process::Command::new(env!("CARGO_BIN_EXE_varbvp")).arg("frobnicate").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
