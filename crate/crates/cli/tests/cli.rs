use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxforge"))
        .args(args)
        .env_remove("COXFORGE_CAP")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn graph_command() {
    let o = run(&["graph", "--case", "D4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["graph"]["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["negative_definite"], true);
    let c = json(&run(&["graph", "--case", "custom:2,2,3"]));
    assert_eq!(c["graph"]["nodes"].as_array().unwrap().len(), 8);
    assert_eq!(c["negative_definite"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["graph", "--case", "Q4"]).status.code(), Some(2));
    assert_eq!(run(&["graph", "--case", "D3"]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "--case", "D4", "--degree", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--case", "D4", "--caps", "nope=1"]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "--case", "custom:2,2,3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invariants_command() {
    let a4 = json(&run(&["invariants", "--case", "A4"]));
    assert_eq!((a4["generators"].as_array().unwrap().len(), a4["relations"].as_array().unwrap().len()), (3, 1));
    let d7 = run(&["invariants", "--case", "D7"]);
    assert_eq!(d7.status.code(), Some(0));
    let d7 = json(&d7);
    assert_eq!((d7["generators"].as_array().unwrap().len(), d7["relations"].as_array().unwrap().len()), (6, 6));
    let e6 = json(&run(&["invariants", "--case", "E6"]));
    assert_eq!(e6["ok"], true);
    assert_eq!(e6["matches_printed"], false);
}

#[test]
fn reduce_and_step_cap() {
    let o = run(&["reduce", "--case", "D4", "--degree", "0,-1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["to_nef"]["steps"].as_array().unwrap().len(), 6);
    assert_eq!(v["ok"], true);
    let capped = run(&["reduce", "--case", "D4", "--degree", "0,-1,0,0", "--caps", "steps=2"]);
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn verify_counterexample_and_stability() {
    let o = run(&["verify", "--case", "custom:2,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["status"], "rule-fails-as-predicted");
    let args = ["verify", "--case", "D5", "--samples", "40", "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "reports must be byte-stable");
    let v = json(&a);
    assert_eq!(v["sections"]["reduction"]["cells"], 40);
    assert_eq!(v["status"], "ok");
}

#[test]
fn text_format_and_env_cap() {
    let o = run(&["cox", "--case", "D4", "--format", "text"]);
    let t = String::from_utf8(o.stdout).unwrap();
    assert!(t.contains("(y0^2*y1*y2*y3) * (x1^2*y1 + x2^2*y2 + x3^2*y3)"), "{t}");
    let o = Command::new(env!("CARGO_BIN_EXE_coxforge"))
        .args(["verify", "--case", "A2", "--samples", "5"])
        .env("COXFORGE_CAP", "30")
        .output()
        .unwrap();
    assert_eq!(json(&o)["config"]["truncation"], 30);
}
