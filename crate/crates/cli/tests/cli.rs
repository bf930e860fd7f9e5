use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steenpoly")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn first_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).lines().next().unwrap_or("").to_string()
}

#[test]
fn adem_examples() {
    assert_eq!(first_line(&run(&["adem", "--p", "2", "P1 P1"])), "0");
    assert_eq!(first_line(&run(&["adem", "--p", "2", "P2 P2"])), "P3 P1");
    assert_eq!(first_line(&run(&["adem", "--p", "2", "P2 P1"])), "P2 P1");
    let r = json(&["adem", "--p", "2", "P2 P2"]);
    assert_eq!(r["result"]["terms"][0]["excess"], 2);
    assert_eq!(r["config"]["p"], 2);
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(run(&["adem", "P1 Q2"]).status.code(), Some(2));
    assert_eq!(run(&["hom", "poly", "G(2", "G(1)"]).status.code(), Some(2));
    assert_eq!(run(&["--p", "4", "adem", "P1"]).status.code(), Some(2));
    assert_eq!(run(&["dump", "F(1)", "--trunc", "300"]).status.code(), Some(2));
}

#[test]
fn hom_examples() {
    let r = json(&["hom", "poly", "G(2,1)", "S(3;m=1)"]);
    assert_eq!(r["result"]["dim"], 1);
    let r = json(&["hom", "poly", "G(2)", "G(1)"]);
    assert_eq!(r["result"]["dim"], 0);
    assert_eq!(r["result"]["cross_degree"], true);
    let r = json(&["hom", "unstable", "G(2,1)", "S(3;m=1)", "--ladder", "24,32,48"]);
    let dims: Vec<u64> = r["result"]["ladder"].as_array().unwrap().iter().map(|x| x[1].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 1]);
    assert_eq!(r["result"]["report"]["dimP"], 1);
    assert_eq!(r["result"]["report"]["reference_F_dim"], 2);
    assert_eq!(r["result"]["report"]["bijective_at_truncation"], true);
}

#[test]
fn partitions() {
    let r = json(&["partition", "--p", "2", "--powers", "0,0,2", "--n", "6"]);
    assert_eq!(r["result"]["blocks"], serde_json::json!([[0, 1], [2]]));
    assert_eq!(r["result"]["checks"]["in_brute_force_list"], true);
    let r = json(&["block-partition", "--p", "2", "--lambda", "2,1", "--delta", "5", "--powers", "0,0,5"]);
    assert_eq!(r["result"]["blocks"], serde_json::json!([[0, 1], [2]]));
    assert_eq!(r["result"]["unique"], true);
    let r = json(&["block-partition", "--p", "2", "--lambda", "2,1", "--delta", "3", "--powers", "1,2,2"]);
    let warnings = r["result"]["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().starts_with("card(E_2) = 2")));
    let out = run(&["partition", "--p", "2", "--powers", "0,0,0,0", "--targets", "1,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "paper-examples", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = run(&["verify", "comb", "--quick"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&["verify", "steenrod", "--p", "3", "--quick", "--seed", "5"]);
    assert_eq!(r["result"]["failed"], 0);
    assert!(r["result"]["checks"].as_array().unwrap().iter().all(|c| c["anchor"].is_string()));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn dump_format() {
    let out = run(&["dump", "F(1)", "--trunc", "8"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("1\tu^1\n2\tu^2\n"));
    assert!(text.contains("P1 u^1 -> u^2"));
}

#[test]
fn reports_are_deterministic() {
    let a = json(&["verify", "unstable", "--quick", "--seed", "9"]);
    let b = json(&["verify", "unstable", "--quick", "--seed", "9"]);
    let strip = |v: &Value| {
        v["result"]["checks"].as_array().unwrap().iter().map(|c| (c["name"].clone(), c["detail"].clone())).collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}
