use std::f64::consts::FRAC_1_SQRT_2;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use vandercert_cli::Report;

fn vandercert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vandercert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn two_node_example_passes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "two.json", r#"{"n":1,"points":[[-0.5],[0.5]]}"#);
    let out = vandercert(&["analyze", "--input", &input, "--degree", "1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    for key in ["config", "per_node", "global", "all_pass"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let g = &v["global"];
    assert!((g["sigma_min_actual"].as_f64().unwrap() - FRAC_1_SQRT_2).abs() < 1e-5);
    assert_eq!(g["sigma_min_bound"].as_f64().unwrap(), 0.0625);
    assert_eq!(g["nu"], 2);
    assert_eq!(v["config"]["degree"], 1);
    assert_eq!(v["per_node"].as_array().unwrap().len(), 2);
}

#[test]
fn degree_below_s_minus_one_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "two.json", r#"{"n":1,"points":[[-0.5],[0.5]]}"#);
    let out = vandercert(&["analyze", "--input", &input, "--degree", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree"));
}

#[test]
fn planar_triangle_kappa() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tri.json", r#"{"n":2,"points":[[0,0],[1,0],[0,1]]}"#);
    let out = vandercert(&["analyze", "--input", &input, "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let kappa = json(&out)["global"]["kappa_hat"].as_f64().unwrap();
    assert!((kappa - FRAC_1_SQRT_2).abs() < 1e-5);
}

#[test]
fn bad_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [
        ("dup.json", r#"{"n":2,"points":[[0,0],[0,0]]}"#),
        ("far.json", r#"{"n":2,"points":[[3,0],[0,0]]}"#),
        ("broken.json", r#"{"n":2,"points":[[0,0],"#),
    ] {
        let input = write(&dir, name, body);
        let out = vandercert(&["analyze", "--input", &input]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
    let out = vandercert(&["analyze", "--input", "/nonexistent/nodes.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = vandercert(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "cube.json",
        r#"{"n":3,"points":[[0.1,0.2,-0.3],[0.5,-0.1,0.2],[-0.4,0.4,0.1],[0.0,-0.6,-0.2]]}"#,
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let r = vandercert(&[
            "analyze",
            "--input",
            &input,
            "--seed",
            "7",
            "--budget",
            "256",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(r.status.code(), Some(0));
        assert!(r.stdout.is_empty());
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());

    let report: Report = serde_json::from_slice(&text).unwrap();
    assert_eq!(report.config.seed, 7);
    assert_eq!(report.config.budget, 256);
    let again = vandercert_cli::emit::to_json(&report).unwrap();
    assert_eq!(again.as_bytes(), &text[..]);
}

#[test]
fn table_format() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "two.json", r#"{"n":1,"points":[[-0.5],[0.5]]}"#);
    let out = vandercert(&["analyze", "--input", &input, "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sigma_min") && text.contains("all_pass = true"));
}

#[test]
fn guardrail_override() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "two.json", r#"{"n":1,"points":[[-0.5],[0.5]]}"#);
    let out = vandercert(&[
        "analyze", "--input", &input, "--degree", "3", "--max-nu", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_runs() {
    let out = vandercert(&["suite", "--seed", "0", "--count", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], 100);

    let empty = vandercert(&["suite", "--count", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(json(&empty)["instances"], 0);

    let bad = vandercert(&["suite", "--degree", "1", "--s-max", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn oracle_check_runs() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("oracle.json");
    let out = vandercert(&[
        "oracle-check",
        "--count",
        "30",
        "--planar",
        "5",
        "--resolution",
        "100000",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&out_path)).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["rank_failures"], 0);
}
