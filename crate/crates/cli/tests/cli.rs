//! End-to-end runs of the `rorlicz` binary and the scenario runner.

use std::fs;
use std::path::Path;
use std::process::Command;

use radial_orlicz::geometry::GridFile;
use radial_orlicz::inequalities::check_dual_log_minkowski;
use radial_orlicz_cli::registry::{parse_body, parse_rule};

fn rorlicz(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rorlicz")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn grid(path: &Path) -> GridFile {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sum_of_balls_is_a_ball() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let (code, _, _) = rorlicz(&[
        "sum",
        "--phi",
        "lp:2",
        "--body",
        "ball:2:3",
        "--body2",
        "ball:2:4",
        "--probe",
        "2:trapezoid2d:64",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let g = grid(&out);
    assert_eq!(g.values.len(), 64);
    assert!(g.values.iter().all(|v| (v - 5.0).abs() < 1e-10));
}

#[test]
fn log_minkowski_check_is_satisfied() {
    let (code, stdout, _) = rorlicz(&[
        "check",
        "--name",
        "dual-log-minkowski",
        "--body",
        "ball:2:1",
        "--body2",
        "fourier:1:3:0.5",
        "--rule",
        "2:trapezoid2d:512",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["satisfied"], true);
}

#[test]
fn cli_is_a_thin_adapter() {
    let (_, stdout, _) = rorlicz(&[
        "check",
        "--name",
        "dual-log-minkowski",
        "--body",
        "ball:2:1",
        "--body2",
        "fourier:1:3:0.5",
        "--rule",
        "2:trapezoid2d:512",
    ]);
    let direct = check_dual_log_minkowski(
        &parse_body("ball:2:1").unwrap(),
        &parse_body("fourier:1:3:0.5").unwrap(),
        &parse_rule("2:trapezoid2d:512").unwrap(),
    )
    .unwrap();
    let via_cli: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(via_cli, serde_json::to_value(&direct).unwrap());
}

#[test]
fn m_add_with_lp_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let (code, _, _) = rorlicz(&[
        "m-add",
        "--mset",
        "mset:lp-curve:2:1024",
        "--body",
        "ball:2:3",
        "--body2",
        "ball:2:4",
        "--probe",
        "2:trapezoid2d:32",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(grid(&out).values.iter().all(|v| (v - 5.0).abs() < 1e-5));
}

#[test]
fn bad_descriptors_exit_2() {
    assert_eq!(rorlicz(&["volume", "--body", "cube:2:1", "--rule", "2:trapezoid2d:64"]).0, 2);
    assert_eq!(rorlicz(&["volume", "--body", "ball:2:1", "--rule", "2:simpson:64"]).0, 2);
    assert_eq!(
        rorlicz(&["sum", "--phi", "cosh", "--body", "ball:2:1", "--body2", "ball:2:1", "--probe", "2:trapezoid2d:8"]).0,
        2
    );
    assert_eq!(rorlicz(&["volume", "--body", "ball:2:1"]).0, 2);
    assert_eq!(rorlicz(&["run", "--suite", "missing"]).0, 2);
}

#[test]
fn help_lists_subcommands() {
    let (code, stdout, _) = rorlicz(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["volume", "sum", "mixed-volume", "check", "first-variation", "m-add", "intersection-body", "run"] {
        assert!(stdout.contains(sub), "{sub}");
    }
}

fn write_scenario(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn scenario_volume_csv() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write_scenario(
        dir.path(),
        r#"{"bodies": {"disk": "ball:2:1"}, "rules": {"t": "2:trapezoid2d:256"},
            "tasks": [{"op": "volume", "bodies": ["disk"], "rule": "t", "out": "v.csv"}]}"#,
    );
    let out = dir.path().join("out");
    let (code, _, _) = rorlicz(&["run", &sc, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_path(out.join("v.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let value: f64 = row[headers.iter().position(|h| h == "value").unwrap()].parse().unwrap();
    assert!((value - std::f64::consts::PI).abs() < 1e-12);
    assert!(out.join("run-summary.json").exists());
}

#[test]
fn scenario_undeclared_name_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write_scenario(
        dir.path(),
        r#"{"bodies": {"disk": "ball:2:1"}, "rules": {"t": "2:trapezoid2d:256"},
            "tasks": [{"op": "volume", "bodies": ["square"], "rule": "t", "out": "v.csv"}]}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(rorlicz(&["run", &sc, "--out-dir", out.to_str().unwrap()]).0, 2);
    assert!(!out.join("v.csv").exists());
}

#[test]
fn scenario_runtime_failure_exits_1_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write_scenario(
        dir.path(),
        r#"{"bodies": {"o": "ball:2:0", "disk": "ball:2:1"}, "functions": {"t": "lp:1"},
            "rules": {"r": "2:trapezoid2d:64"},
            "tasks": [
              {"op": "first-variation", "bodies": ["o", "disk"], "phi": "t", "rule": "r", "out": "fv.json"},
              {"op": "volume", "bodies": ["disk"], "rule": "r", "out": "v.json"}
            ]}"#,
    );
    let out = dir.path().join("out");
    let (code, stdout, _) = rorlicz(&["run", &sc, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("FAILED"));
    assert!(out.join("v.json").exists());
}

#[test]
fn violations_do_not_change_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // A dual-log-bm check on dilatates sits at slack ≈ 0; a sweep over
    // stars has none. Both are data.
    let sc = write_scenario(
        dir.path(),
        r#"{"functions": {"lh": "log-t:0.5"}, "rules": {"r": "2:trapezoid2d:128"},
            "tasks": [{"op": "sweep", "check": "dual-log-bm", "phi": "lh", "family": "dilatate", "count": 3, "rule": "r", "out": "s.csv"}]}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(rorlicz(&["run", &sc, "--out-dir", out.to_str().unwrap()]).0, 0);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("s.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["equality_cases"], 3);
}

#[test]
fn scenario_artifacts_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write_scenario(
        dir.path(),
        r#"{"bodies": {"disk": "ball:2:1", "petal": "fourier:1:3:0.5"}, "functions": {"f": "lp:1"},
            "rules": {"r": "2:trapezoid2d:256", "mc": "3:montecarlo:5000:3"},
            "tasks": [
              {"op": "check", "check": "dual-orlicz-bm", "bodies": ["disk", "petal"], "phi": "f", "rule": "r", "out": "a.json"},
              {"op": "sweep", "check": "dual-orlicz-bm", "phi": "f", "family": "star", "dimension": 3, "count": 4, "rule": "mc", "out": "b.csv"}
            ]}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(rorlicz(&["run", &sc, "--out-dir", a.to_str().unwrap()]).0, 0);
    assert_eq!(rorlicz(&["run", &sc, "--out-dir", b.to_str().unwrap()]).0, 0);
    for f in ["a.json", "b.csv", "b.summary.json", "run-summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn intersection_body_subcommand() {
    let (code, stdout, _) = rorlicz(&[
        "intersection-body",
        "--phi",
        "lp:0.5",
        "--body",
        "ball:2:1",
        "--direction",
        "0,-1",
        "--rule",
        "2:trapezoid2d:1024",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() / 48.890210261478195 - 1.0).abs() < 1e-12);
}
