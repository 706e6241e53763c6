use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ancilla"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    let cols = v["cols"].as_u64().unwrap() as usize;
    let data = v["data"].as_array().unwrap();
    data.chunks(cols)
        .map(|row| row.iter().map(|z| z[0].as_f64().unwrap()).collect())
        .collect()
}

#[test]
fn analyze_swap_is_p_and_allows_tomography() {
    let v = json(&run(&["analyze", "gallery:swap", "--samples", "100"]));
    assert_eq!(v["physicality"]["verdict"], "P");
    assert_eq!(v["tomography"]["allows"], true);
    assert_eq!(v["schmidt"]["rank"], 4);
    assert!(v["physicality"]["witness"].is_null());
}

#[test]
fn analyze_example7_is_not_p_with_witness() {
    let v = json(&run(&[
        "analyze",
        "gallery:example7?d_b=3",
        "--samples",
        "100",
    ]));
    assert_eq!(v["physicality"]["verdict"], "NOT_P");
    assert_eq!(v["tomography"]["allows"], true);
    let w = &v["physicality"]["witness"];
    assert!(w["epsilon"].as_f64().unwrap() > 0.0);
    assert!(w["cp_certificate"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn non_unitary_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut data = vec!["[0,0]"; 16];
    data[0] = "[2,0]";
    for k in [5, 10, 15] {
        data[k] = "[1,0]";
    }
    let text = format!(
        r#"{{"d_a":2,"d_b":2,"u":{{"rows":4,"cols":4,"data":[{}]}}}}"#,
        data.join(",")
    );
    let path = write(dir.path(), "u.json", &text);
    let out = run(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not unitary"));
}

#[test]
fn malformed_json_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\"d_a\": 2,\n \"d_b\": }");
    let out = run(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_file_and_bad_params_exit_2() {
    assert_eq!(
        run(&["analyze", "/nonexistent/u.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["analyze", "gallery:nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "gallery:swap?d=1"]).status.code(), Some(2));
    assert_eq!(
        run(&["analyze", "gallery:swap", "--samples", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["analyze", "gallery:swap", "--tol-rank", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn witness_example3_matches_closed_form() {
    let v = json(&run(&["witness", "gallery:example3?theta=1.5708"]));
    let sigma = matrix(&v["sigma"]);
    assert!((sigma[0][0] + 24.5).abs() < 1e-9);
    assert!((sigma[1][1] - 25.5).abs() < 1e-9);
    assert!(sigma[0][1].abs() < 1e-12 && sigma[1][0].abs() < 1e-12);
    assert!(v["cp_certificate"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn witness_from_given_state() {
    let dir = tempfile::tempdir().unwrap();
    let plus = write(
        dir.path(),
        "plus.json",
        "[[0.7071067811865476,0],[0.7071067811865476,0]]",
    );
    let zero = write(dir.path(), "zero.json", "[[1,0],[0,0]]");
    let unnormalized = write(dir.path(), "two.json", "[[2,0],[0,0]]");
    assert_eq!(
        run(&["witness", "gallery:example3", "--phi", &plus])
            .status
            .code(),
        Some(4)
    );
    assert!(
        json(&run(&["witness", "gallery:example3", "--phi", &zero]))["epsilon"]
            .as_f64()
            .unwrap()
            > 0.0
    );
    assert_eq!(
        run(&["witness", "gallery:example3", "--phi", &unnormalized])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn witness_on_p_unitary_exits_4() {
    let out = run(&["witness", "gallery:swap", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn check_cp_tracks_bloch_length() {
    let dir = tempfile::tempdir().unwrap();
    let outside = write(
        dir.path(),
        "s12.json",
        r#"{"rows":2,"cols":2,"data":[[0.5,0],[0.6,0],[0.6,0],[0.5,0]]}"#,
    );
    let inside = write(
        dir.path(),
        "s08.json",
        r#"{"rows":2,"cols":2,"data":[[0.5,0],[0.4,0],[0.4,0],[0.5,0]]}"#,
    );
    let v = json(&run(&["check-cp", "gallery:example3", "--sigma", &outside]));
    assert_eq!(v["cp"], false);
    assert_eq!(v["tp"], true);
    let v = json(&run(&["check-cp", "gallery:example3", "--sigma", &inside]));
    assert_eq!(v["cp"], true);
}

#[test]
fn check_cp_rejects_bad_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let trace2 = write(
        dir.path(),
        "t2.json",
        r#"{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]}"#,
    );
    let wrong = write(
        dir.path(),
        "w.json",
        r#"{"rows":3,"cols":3,"data":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#,
    );
    assert_eq!(
        run(&["check-cp", "gallery:example3", "--sigma", &trace2])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["check-cp", "gallery:example3", "--sigma", &wrong])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn tomography_verdicts_and_round_trip() {
    assert_eq!(
        json(&run(&["tomography", "gallery:product"]))["allows"],
        false
    );
    assert_eq!(
        json(&run(&["tomography", "gallery:example8?d_b=3"]))["allows"],
        true
    );
    let dir = tempfile::tempdir().unwrap();
    let sigma = write(
        dir.path(),
        "s.json",
        r#"{"rows":3,"cols":3,"data":[[1.2,0],[0.1,0.3],[0,0],[0.1,-0.3],[-0.5,0],[0.2,0],[0,0],[0.2,0],[0.3,0]]}"#,
    );
    let v = json(&run(&[
        "tomography",
        "gallery:example8?d_b=3",
        "--sigma",
        &sigma,
    ]));
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
    let rec = matrix(&v["reconstruction"]);
    assert!((rec[0][0] - 1.2).abs() < 1e-8 && (rec[1][1] + 0.5).abs() < 1e-8);
}

#[test]
fn gallery_output_feeds_analyze() {
    let out = run(&["gallery", "example5", "--param", "d_b=4"]);
    let entry = json(&out);
    assert_eq!(entry["expected"]["rank"], 10);
    assert_eq!(entry["params"]["d_b"], "4");
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "e5.json",
        std::str::from_utf8(&out.stdout).unwrap(),
    );
    let v = json(&run(&["analyze", &path, "--samples", "50"]));
    assert_eq!(v["physicality"]["verdict"], "P");
    assert_eq!(
        run(&["gallery", "example5", "--param", "nope=1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["gallery", "swap", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["name"], "swap");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "analyze",
        "gallery:example8?d_b=4",
        "--samples",
        "200",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn floats_carry_seventeen_digits() {
    let out = run(&["witness", "gallery:example3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"delta\":4.8999999999999999e-1"));
}

#[test]
fn regress_passes() {
    let out = run(&["regress", "--samples", "50"]);
    let v = json(&out);
    assert_eq!(v["pass"], true);
}
