use std::process::Command;

use serde_json::Value;

fn nambu(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nambu"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out) = nambu(&a);
    (code, serde_json::from_str(&out).expect("json report"))
}

fn value<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["name"] == name)
        .map(|x| &x["value"])
        .unwrap_or_else(|| panic!("no result {name} in {r}"))
}

#[test]
fn calogero_bracket() {
    let (code, r) = report(&["bracket", "--system", "calogero", "--fns", "H", "K", "r"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "bracket"), "-p_r");
    assert_eq!(r["command"], "bracket");
    assert_eq!(r["seed"], 0);
    for key in ["inputs", "results", "verdicts", "elapsed_ms"] {
        assert!(r.get(key).is_some(), "{key}");
    }
}

#[test]
fn hamiltonian_field_on_a_chart() {
    let (code, r) = report(&["ham-vf", "--chart", "x,y", "--mv", "@x^@y", "--fns", "x"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "field"), "@y");
}

#[test]
fn fi_failure_exits_one_with_witness() {
    let (code, r) = report(&["fi-check", "--chart", "x,y,z,w", "--mv", "@x^@y + x*@z^@w"]);
    assert_eq!(code, 1);
    let v = &r["verdicts"][0];
    assert_eq!(v["status"], "failed");
    assert_eq!(v["witness"]["residual"], v["witness"]["lie_residual"]);
    let (code, _) = report(&["fi-check", "--chart", "x,y,z,w", "--mv", "@x^@y + @z^@w"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nambu(&["bracket"]).0, 2);
    assert_eq!(nambu(&["bracket", "--chart", "x,y", "--mv", "@x^@q", "--fns", "x", "y"]).0, 2);
    assert_eq!(nambu(&["op-eval", "--chart", "x", "--op", "L(@x", "--form", "x"]).0, 2);
    assert_eq!(nambu(&["no-such-command"]).0, 2);
}

#[test]
fn operator_evaluation_and_decomposition() {
    let (code, r) = report(&["op-eval", "--chart", "x,y", "--op", "L(@x^@y)", "--form", "y*dx"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "value"), "-1");
    let (code, r) = report(&["decompose", "--chart", "x,y,z", "--op", "L(@x^@y^@z) + i(z*@x^@y)", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "top_multivector"), "@x^@y^@z");
    assert_eq!(value(&r, "A"), "z*@x^@y");
    let (code, _) = report(&["decompose", "--chart", "x,y", "--op", "L(@x^@y) + iv(@x^@y, dx)", "--n", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn integrate_calogero() {
    let (code, r) = report(&["integrate", "--system", "calogero", "--dt", "0.001", "--t-end", "1"]);
    assert_eq!(code, 0);
    assert!(value(&r, "drift H").as_f64().unwrap() <= 1e-6);
    let rr = value(&r, "final_state")["r"].as_f64().unwrap();
    assert!((rr - 2.15406592285).abs() < 1e-9, "{rr}");
}

#[test]
fn reports_are_stable_under_a_fixed_seed() {
    let args = ["fi-check", "--chart", "x,y,z", "--mv", "z*@x^@y^@z", "--seed", "7"];
    let (_, mut a) = report(&args);
    let (_, mut b) = report(&args);
    a["elapsed_ms"] = Value::Null;
    b["elapsed_ms"] = Value::Null;
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
}
