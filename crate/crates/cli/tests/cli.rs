use std::path::Path;
use std::process::{Command, Output};

fn dfilt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfilt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn multiplication_normal_orders() {
    let o = dfilt(&["mul", "--n", "1", "dx1", "x1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1*dx1 + 1\n");
    let o = dfilt(&["mul", "--n", "1", "--kind", "homogenized", "dx1", "x1"]);
    assert_eq!(stdout(&o), "x1*dx1 + h\n");
}

#[test]
fn exit_codes() {
    // usage errors
    assert_eq!(dfilt(&["mul", "--n", "1", "x1*(", "x1"]).status.code(), Some(2));
    assert_eq!(dfilt(&["mul", "--n", "1", "y", "x1"]).status.code(), Some(2));
    assert_eq!(dfilt(&["gb", "--n", "1", "--order", "V", "--rows", "x1"]).status.code(), Some(2));
    assert_eq!(dfilt(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dfilt(&["gb", "--n", "1", "--rows", "x1", "--shifts-f", "0,1"]).status.code(), Some(2));
    assert_eq!(dfilt(&["restrict", "--p", "1", "--rows", "dt"]).status.code(), Some(2));
    // mathematical failures
    assert_eq!(dfilt(&["bfun", "--f", "x1^2+x2^3", "--weights", "1/2,1/2"]).status.code(), Some(1));
    assert_eq!(dfilt(&["bfun", "--f", "x1^2+x2^3", "--weights", "1/2,1/3", "--bfun", "s+1"]).status.code(), Some(1));
    assert_eq!(dfilt(&["restrict", "--p", "1", "--rows", "dt", "--bfun", "s+1"]).status.code(), Some(1));
    assert_eq!(dfilt(&["betti", "--n", "1", "--rows", "1"]).status.code(), Some(0));
    // success
    assert_eq!(dfilt(&["restrict", "--p", "1", "--rows", "dt", "--bfun", "s"]).status.code(), Some(0));
}

#[test]
fn parse_errors_report_offsets() {
    let o = dfilt(&["mul", "--n", "2", "x1 + x3", "x1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 5"));
}

#[test]
fn betti_reads_a_complex_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    assert!(dfilt(&["minres", "--n", "2", "--rows", "dx1; dx2", "--json", p]).status.success());
    let o = dfilt(&["betti", "--complex", p]);
    assert_eq!(stdout(&o), "β[0,0]=1\nβ[1,1]=2\nβ[2,2]=1\n");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], "dfilt/1");
    // A wrong schema is a usage error.
    std::fs::write(&path, std::fs::read_to_string(&path).unwrap().replace("dfilt/1", "dfilt/0")).unwrap();
    assert_eq!(dfilt(&["betti", "--complex", p]).status.code(), Some(2));
}

#[test]
fn strictness_counterexample() {
    let o = dfilt(&["strict", "--n", "1", "--p", "1", "--rows", "[t, 1]", "--shifts-f", "1,0", "--shifts-v", "0,0"]);
    assert!(stdout(&o).contains("t injective on gr^F: false"));
}

#[test]
fn cusp_report_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lc.json");
    let o = dfilt(&["lc", "--n", "2", "--weights", "1/2,1/3", "--f", "x1^2+x2^3", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let got = std::fs::read_to_string(&path).unwrap();
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/lc_cusp.json")).unwrap();
    assert_eq!(got, golden);
    let doc: serde_json::Value = serde_json::from_str(&got).unwrap();
    assert_eq!(doc["b_f"], "(s+5/6)(s+1)(s+7/6)");
    assert_eq!(doc["k_prime"], 1);
    assert_eq!(doc["k1"], 0);
    assert_eq!(doc["local_cohomology"]["involutive"], "involutive");
}

#[test]
fn output_is_deterministic() {
    let args = ["lc", "--weights", "1/2,1/2,1/2,1/2", "--f", "x1^2+x2^2+x3^2+x4^2"];
    assert_eq!(stdout(&dfilt(&args)), stdout(&dfilt(&args)));
}
