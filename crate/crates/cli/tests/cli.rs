use std::process::{Command, Output};

use jetlaws::jetring::poly_from_json;
use jetlaws::parse_expr;
use serde_json::Value;

fn jetlaws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetlaws")).args(args).env_remove("JETLAWS_MAX_DEGREE").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn solve_vd_degree_three() {
    let out = jetlaws(&["solve-vd", "--degree", "3", "--model", "fuu=b*f"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["dim"], 1);
    let g = poly_from_json(&v["generators"][0]).unwrap();
    assert_eq!(g, parse_expr("u2 - (1/2)*b*u0^3").unwrap());
}

#[test]
fn even_degree_is_empty() {
    let out = jetlaws(&["solve-vd", "--degree", "2", "--model", "fuu=b*f"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["dim"], 0);
}

#[test]
fn verify_suite_passes() {
    let out = jetlaws(&["verify", "--max-degree", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json_of(&out)["pass"], true);
}

#[test]
fn degree_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_jetlaws")).args(["verify"]).env("JETLAWS_MAX_DEGREE", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["max_degree"], 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(jetlaws(&["solve-vd"]).status.code(), Some(2));
    assert_eq!(jetlaws(&["solve-vd", "--degree", "3", "--model", "fuu=f^2"]).status.code(), Some(2));
    assert_eq!(jetlaws(&["render", "u0 +"]).status.code(), Some(2));
    assert_eq!(jetlaws(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one() {
    let out = jetlaws(&["symmetry-check", "--poly", "u1", "--model", "fuu=b*f"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["pass"], false);
    let out = jetlaws(&["build-law", "--poly", "u1", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn symmetry_check_of_generator() {
    let out = jetlaws(&["symmetry-check", "--poly", "u2 - (1/2)*b*u0^3", "--model", "fuu=b*f"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["residuals"].as_array().unwrap().len(), 4);
}

#[test]
fn build_law_with_primitive() {
    let out = jetlaws(&["build-law", "--poly", "u2 - (1/2)*b*u0^3", "--degree", "3", "--model", "fuu=b*f", "--undiff"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["closure_residual_is_zero"], true);
    assert!(v["B"].get("1,2").is_some());
}

#[test]
fn text_and_latex_output() {
    let out = jetlaws(&["--text", "ps-chain", "--count", "2", "--beta", "b"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "u0\nu2 - (1/2)*b*u0^3\n");
    let out = jetlaws(&["--latex", "render", "ub2 + (1/2)*u0"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("\\frac{1}{2}") && s.contains("\\bar{u}_{2}"), "{s}");
}

#[test]
fn classify_reports_both_branches() {
    let out = jetlaws(&["--text", "classify", "--degree", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "l1\nl2 - 2*l1^2\n");
    assert_eq!(jetlaws(&["classify", "--degree", "4"]).status.code(), Some(1));
}

#[test]
fn numcheck_writes_csv() {
    let dir = std::env::temp_dir().join(format!("jetlaws-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("samples.csv");
    let out = jetlaws(&["numcheck", "--degree", "3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["pass"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,u,du,a,residual\n"));
    assert_eq!(text.lines().count(), 10);
    assert_eq!(jetlaws(&["numcheck", "--potential", "cosh"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["solve-vd", "--degree", "7", "--model", "fuu=l1*fu+l2*f"];
    let a = jetlaws(&args);
    let b = jetlaws(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("jetlaws-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v.json");
    let c = jetlaws(&["--out", path.to_str().unwrap(), "solve-vd", "--degree", "7", "--model", "fuu=l1*fu+l2*f"]);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
