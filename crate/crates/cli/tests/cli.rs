use std::process::{Command, Output};

use serde_json::Value;
use symspace_core::Lts64;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    csv::Reader::from_reader(out.stdout.as_slice())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn verify_sphere_passes() {
    let out = run(&["verify", "--model", "sphere(2)", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lts antisymmetry") && !text.contains("FAIL"));
}

#[test]
fn verify_corrupted_tensor_fails_antisymmetry() {
    let mut desc = serde_json::to_value(Lts64::curvature(2).to_descriptor()).unwrap();
    let entry = &mut desc["tensor"][0][1][0][0];
    *entry = Value::from(entry.as_f64().unwrap() + 0.5);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, desc.to_string()).unwrap();
    let out = run(&["verify", "--tensor", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let checks = report["reports"][0]["checks"].as_array().unwrap();
    assert_eq!(checks[0]["name"], "antisymmetry");
    assert_eq!(checks[0]["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("antisymmetry failed"));
}

#[test]
fn verify_intact_tensor_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("good.json");
    std::fs::write(&path, serde_json::to_string(&Lts64::curvature(3).to_descriptor()).unwrap()).unwrap();
    assert_eq!(run(&["verify", "--tensor", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "--model", "unknown-model"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--model", "grassmann(3,3)"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["trotter", "--model", "spd", "--x", "1,0", "--y", "0,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["trotter", "--model", "spd", "--x", "1,a,0", "--y", "0,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--tol-abs", "-1"]).status.code(), Some(2));
}

#[test]
fn trotter_commuting_inputs_are_exact() {
    let out = run(&["trotter", "--model", "spd(2)", "--x", "0.3,-0.2,0", "--y", "0.5,0.1,0", "--k-min", "1", "--k-max", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 7);
    for r in rows {
        assert!(r[1].parse::<f64>().unwrap() <= 1e-12, "{r:?}");
    }
}

#[test]
fn trotter_noncommuting_errors_decrease() {
    let out = run(&["trotter", "--model", "spd", "--params", "2", "--x", "1,0,0", "--y", "0,0,1"]);
    let errs: Vec<f64> = csv_rows(&out).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(errs.len(), 9);
    for w in errs.windows(2) {
        assert!(w[1] < w[0] && w[1] > 0.4 * w[0], "{errs:?}");
    }
}

#[test]
fn trotter_empty_range_is_an_empty_table() {
    let out = run(&["trotter", "--model", "spd", "--x", "1,0,0", "--y", "0,0,1", "--k-min", "64", "--k-max", "32"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "k,error\n");
}

#[test]
fn trotter_bracket_table_has_l_column() {
    let out = run(&[
        "trotter", "--model", "spd", "--x", "1,0,0", "--y", "0,0,1", "--z", "1,0,0", "--k-min", "8", "--k-max", "32",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // [[E11, E12+E21], E11] = -(E12+E21)
    let target: Vec<f64> = serde_json::from_value(v["target"].clone()).unwrap();
    assert!(target.iter().zip([0.0, 0.0, -1.0]).all(|(a, b)| (a - b).abs() < 1e-12), "{target:?}");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["l"], 32);
    assert!((rows[0]["error"].as_f64().unwrap() - 3.7602648532696).abs() < 1e-9);
}

#[test]
fn quotient_product_factor_succeeds() {
    let out = run(&["quotient", "--model", "product", "--ideal", "first_factor", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "quotient");
    assert_eq!(v["quotient_dim"], 2);
    assert!(v["report"]["tensor_mismatch"].as_f64().unwrap() < 1e-8);
}

#[test]
fn quotient_by_explicit_vectors() {
    let out = run(&["quotient", "--model", "product", "--ideal", "0,0,1,0;0,0,0,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["rank_checks"]["l_dim"], 3);
}

#[test]
fn quotient_of_sphere_by_zero_is_the_sphere() {
    let out = run(&["quotient", "--model", "sphere(2)", "--ideal", "zero", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["quotient_dim"], 2);
    assert_eq!(v["report"]["rank_checks"]["kernel_is_n"], true);
}

#[test]
fn quotient_dense_line_is_rejected_by_the_gate() {
    let out = run(&["quotient", "--model", "torus_abelian", "--ideal", "dense_line", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["status"], "gate_rejected");
    assert_eq!(v["gate"]["stage"], "exp chart split");
    assert_eq!(v["gate"]["witness"].as_array().unwrap().len(), 2);
    let exact = v["gate"]["exact_witnesses"].as_array().unwrap();
    assert!(exact.iter().all(|w| w["on_line"] == true && w["is_base"] == false));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weak submersion"));
}

#[test]
fn quotient_failures_exit_1() {
    let traceless = run(&["quotient", "--model", "spd", "--ideal", "traceless", "--format", "json"]);
    assert_eq!(traceless.status.code(), Some(1));
    assert_eq!(json(&traceless)["status"], "not_faithful");
    let line = run(&["quotient", "--model", "sphere", "--ideal", "1,0", "--format", "json"]);
    assert_eq!(line.status.code(), Some(1));
    assert_eq!(json(&line)["status"], "not_ideal");
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&["subspace", "--model", "torus_abelian", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("subspace,expected_dim"));
    assert!(body.contains("dense_line,1,1"));
}

#[test]
fn models_lists_the_catalog() {
    let v = json(&run(&["models", "--format", "json"]));
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["sphere(2)", "spd(2)", "grassmann(1,3)", "torus_abelian", "product(sphere(2),sphere(2))"]);
    assert_eq!(v[1]["minus_dim"], 3);
}

#[test]
fn seed_controls_the_report() {
    let a = run(&["verify", "--model", "spd", "--format", "json", "--samples", "10"]);
    let b = run(&["verify", "--model", "spd", "--format", "json", "--samples", "10", "--seed", "42"]);
    let c = run(&["verify", "--model", "spd", "--format", "json", "--samples", "10", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
