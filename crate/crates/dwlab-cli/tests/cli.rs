use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dwlab(args: &[&str]) -> Output {
    dwlab_env(args, &[])
}

fn dwlab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dwlab"));
    cmd.args(args).env_remove("DWLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("run dwlab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bad_alpha_exits_two() {
    let o = dwlab(&["certify", "--family", "T", "--alpha", "1.5", "--lmax", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0,1]"));
    assert_eq!(code(&dwlab(&["certify", "--nope"])), 2);
    assert_eq!(code(&dwlab_env(&["quadcheck", "--alpha", "1"], &[("DWLAB_THREADS", "abc")])), 2);
}

#[test]
fn certify_small_sweep() {
    let o = dwlab(&["certify", "--family", "T,B", "--alpha", "0.5,1", "--lmax", "2", "--nr", "32"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], "dwlab.certify.v1");
    assert_eq!(v["config"]["command"], "certify");
    let o = dwlab(&["certify", "--family", "B", "--alpha", "1", "--lmax", "1", "--nr", "16", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("family,alpha,l,n_r,sigma_max,paper_bound,margin"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn solve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let trivial = write(dir.path(), "t.json", r#"{"alpha": 1, "F": [[1], [0]], "H": [1], "h": [1]}"#);
    let o = dwlab(&["solve", "--in", &trivial, "--nr", "16", "--angular", "32"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], "dwlab.solve.v1");
    assert_eq!(v["solution"]["ideal_residual"].as_f64().unwrap(), 0.0);

    let pipe = write(dir.path(), "p.json", r#"{"alpha": 0.5, "F": [[0, 0.5], [0.5]], "H": [0.5], "h": [0, 1]}"#);
    let o = dwlab(&["solve", "--in", &pipe, "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("term,value,bound,asserted,tau,pass,note"));
    assert!(text.contains("ideal_residual"));

    let degen = write(dir.path(), "d.json", r#"{"alpha": 0.5, "F": [[0, 1], [0, 0, 1]], "H": [0], "h": [1]}"#);
    let o = dwlab(&["solve", "--in", &degen]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&dwlab(&["solve", "--in", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn space_checks() {
    let o = dwlab(&["space", "--check", "pick", "--alpha", "0.5", "--N", "40"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["schema"], "dwlab.space.v1");
    let o = dwlab(&["space", "--check", "gap", "--alpha", "1"]);
    assert_eq!(code(&o), 0);
    let o = dwlab(&["space", "--check", "carleson,schwarz-pick", "--alpha", "0.75", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("check,alpha,item,value,bound,status,note"));
}

#[test]
fn transform_and_quadcheck() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "k.json", r#"{"terms": [{"j": 2, "k": 1, "c": 1}, {"j": 0, "k": 3, "c": [0, 0.5]}]}"#);
    for op in ["cauchy", "beurling", "t"] {
        let o = dwlab(&["transform", "--op", op, "--in", &k, "--alpha", "0.5"]);
        assert_eq!(code(&o), 0, "{op}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let g = write(dir.path(), "g.json", r#"{"modes": [{"n": -2, "c": 1}, {"n": 1, "c": [0, 1]}]}"#);
    let o = dwlab(&["transform", "--op", "poisson", "--in", &g, "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("z_re,z_im,value_re,value_im"));

    let rule = dir.path().join("rule.csv");
    let o = dwlab(&["quadcheck", "--alpha", "0.25,1", "--nr", "16", "--rule-csv", rule.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&rule).unwrap().lines().count(), 17);
}

#[test]
fn output_file_and_repeatability() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["certify", "--family", "T,B", "--alpha", "0.25,0.75", "--lmax", "3", "--nr", "16"];
    let a = dwlab_env(&args, &[("DWLAB_THREADS", "1")]);
    let b = dwlab_env(&args, &[("DWLAB_THREADS", "4")]);
    let c = dwlab(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let out = dir.path().join("r.json");
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    let o = dwlab(&with_out);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["config"]["settings"]["lmax"], 3);
    // floats carry 17 significant digits
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("e0") || text.contains("e-"));
}
