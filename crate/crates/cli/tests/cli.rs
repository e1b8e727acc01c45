use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mirp::algebra::{parse_rational64, Grading};
use mirp::differentials::PolynomialField;
use mirp::rough_path::lift_piecewise_linear;
use mirp::solver::{solve_flow, SolveConfig};
use serde_json::Value;

fn mirp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mirp")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mirp-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(o: &Output) -> usize {
    stdout(o).lines().filter(|l| !l.starts_with('#')).count()
}

fn write(p: &Path, s: &str) -> String {
    fs::write(p, s).unwrap();
    p.to_str().unwrap().to_string()
}

/// `t, 0.8 t` on 64 steps of [0, 1].
fn linear_samples() -> String {
    let mut s = String::from("t,x1\n");
    for j in 0..=64 {
        let t = j as f64 / 64.0;
        s.push_str(&format!("{t:e},{:e}\n", 0.8 * t));
    }
    s
}

const LINEAR_FIELD: &str = r#"{"d": 1, "fields": [{"i": 1, "coeffs": ["0", "13/10"]}]}"#;

#[test]
fn enumerate_counts() {
    assert_eq!(data_lines(&mirp(&["enumerate", "--d", "1", "--max-norm", "2"])), 6);
    assert_eq!(data_lines(&mirp(&["enumerate", "--d", "1", "--max-norm", "1"])), 2);
    let empty = mirp(&["enumerate", "--max-norm", "0"]);
    assert!(empty.status.success());
    assert_eq!(data_lines(&empty), 0);
}

#[test]
fn verify_default_passes_and_fault_is_named() {
    let ok = mirp(&["verify", "--no-timestamp"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let report: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
    assert!(report["suites"].as_array().unwrap().iter().all(|s| s["checked"].as_u64().is_some()));

    let bad = mirp(&["verify", "--max-norm", "3", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("(z(0,0), z(0,0), z(0,0))"));
}

#[test]
fn identical_flags_give_identical_bytes() {
    let args = ["lift", "--brownian", "--d", "2", "--mesh-level", "6", "--seed", "17", "--no-timestamp"];
    let (a, b) = (mirp(&args), mirp(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = mirp(&["lift", "--brownian", "--d", "2", "--mesh-level", "6", "--seed", "18", "--no-timestamp"]);
    assert_ne!(a.stdout, other.stdout);
    let stamped: Value = serde_json::from_slice(&mirp(&args[..8]).stdout).unwrap();
    assert!(stamped["provenance"]["unix_time"].is_u64());
    assert!(stamped["provenance"]["rng"].as_str().unwrap().contains("ChaCha20"));
}

#[test]
fn lift_then_solve_matches_in_process() {
    let samples = write(&scratch("samples.csv"), &linear_samples());
    let field = write(&scratch("linear.json"), LINEAR_FIELD);
    let lifted = scratch("lifted.json");
    let o = mirp(&["lift", "--input", &samples, "--gamma", "1/2", "--out", lifted.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = mirp(&["solve", "--path", lifted.to_str().unwrap(), "--field", &field, "--y0", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cli: Vec<f64> = stdout(&o).lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();

    let s = mirp::rough_path::read_samples_csv::<f64, _>(linear_samples().as_bytes()).unwrap();
    let g = Grading::for_gamma(parse_rational64("1/2").unwrap()).unwrap();
    let path = lift_piecewise_linear(&s.times, &s.values, g).unwrap();
    let f = PolynomialField::from_json(&serde_json::from_str(LINEAR_FIELD).unwrap()).unwrap();
    let sol = solve_flow(&path, &f, 2.0, &SolveConfig::default()).unwrap();
    assert_eq!(cli, sol.values);

    // the closed form y0 exp(1.3 X_1)
    let want = 2.0 * (1.3f64 * 0.8).exp();
    assert!((cli.last().unwrap() - want).abs() <= 1e-8 * want);
}

#[test]
fn divergence_and_usage_exit_codes() {
    let samples = write(&scratch("flat.csv"), "t,x1\n0,0\n0.5,0\n1,0\n");
    let blow = write(&scratch("blow.json"), r#"{"d": 1, "fields": [{"i": 0, "coeffs": ["0", "0", "1"]}]}"#);
    let lifted = scratch("flat.json");
    assert!(mirp(&["lift", "--input", &samples, "--gamma", "1/2", "--out", lifted.to_str().unwrap()]).status.success());
    let o = mirp(&["solve", "--path", lifted.to_str().unwrap(), "--field", &blow, "--y0", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: diverged"));

    assert_eq!(mirp(&["solve", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(mirp(&["lift", "--brownian", "--gamma", "3/2"]).status.code(), Some(2));
    assert_eq!(mirp(&["enumerate"]).status.code(), Some(2));
}

#[test]
fn translation_commands() {
    let field = write(&scratch("gbm.json"), r#"{"d": 1, "fields": [{"i": 0, "coeffs": ["0", "1/10"]}, {"i": 1, "coeffs": ["0", "1/5"]}]}"#);
    let o = mirp(&["translate-field", "--field", &field, "--ito-strat"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // f0 + ½ f1 f1' = (1/10 + 1/50) y
    assert_eq!(v["fields"][0]["coeffs"][1], Value::String("3/25".into()));

    let ito = scratch("ito.json");
    assert!(mirp(&["lift", "--brownian", "--d", "1", "--mode", "ito", "--mesh-level", "8", "--max-norm", "2", "--gamma", "1/2", "--out", ito.to_str().unwrap()]).status.success());
    let ch = write(&scratch("char.json"), r#"{"direction": 0, "terms": {"z(0,0)": "1", "z(1,0)z(1,1)": "1/2"}}"#);
    let a = mirp(&["translate", "--path", ito.to_str().unwrap(), "--character", &ch, "--no-timestamp"]);
    let b = mirp(&["translate", "--path", ito.to_str().unwrap(), "--ito-strat", "--no-timestamp"]);
    assert!(a.status.success());
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("provenance");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn reports() {
    let mut s = String::from("t,x1\n");
    for j in 0..=1024 {
        let t = j as f64 / 1024.0;
        s.push_str(&format!("{t:e},{:e}\n", t.sin()));
    }
    let samples = write(&scratch("smooth.csv"), &s);
    let field = write(&scratch("smooth.json"), r#"{"d": 1, "fields": [{"i": 0, "coeffs": ["1/4", "-1/2"]}, {"i": 1, "coeffs": ["1", "0", "-1/2"]}]}"#);
    let lifted = scratch("smooth-lift.json");
    assert!(mirp(&["lift", "--input", &samples, "--gamma", "1/2", "--out", lifted.to_str().unwrap()]).status.success());
    let o = mirp(&["davie-report", "--path", lifted.to_str().unwrap(), "--field", &field, "--y0", "0.3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["target_slope"].as_f64(), Some(1.5));
    assert!(v["slope"].as_f64().unwrap() >= 1.35);

    let o = mirp(&["ito-strat-demo", "--d", "1", "--paths", "200", "--mesh-level", "8", "--seed", "3", "--gbm-paths", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["level_two"].as_array().unwrap().len(), 4);
    assert!(v["max_z_score"].as_f64().unwrap() < 4.5);
    assert!(v["gbm_max_sup_gap"].as_f64().unwrap() < 2e-2);
}
