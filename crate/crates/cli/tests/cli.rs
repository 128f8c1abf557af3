use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_su3-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).expect("schema compiles")
}

/// Runs, checks the exit code, and validates the report against the schema.
fn report(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("report is JSON");
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} violates schema: {errors:?}");
    assert_eq!(v["version"], "su3-forge/1");
    v
}

/// Like `report`, for runs that write their report to `path`.
fn report_to(args: &[&str], path: &Path) -> Value {
    let mut full = args.to_vec();
    full.extend(["--output", path.to_str().unwrap()]);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(schema().is_valid(&v));
    v
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn identity_cartan_factors_vanish() {
    let v = report(&["decompose", "--gate", "identity", "--method", "cartan-a"], 0);
    for f in v["results"]["factors"].as_array().unwrap() {
        for c in f["coefficients"].as_object().unwrap().values() {
            assert_eq!(num(c), 0.0);
        }
    }
    assert_eq!(num(&v["results"]["global_phase"]), 0.0);
}

#[test]
fn random_input_round_trips_through_cartan_b() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.json");
    let p = path.to_str().unwrap();
    report_to(&["random", "--count", "1", "--seed", "5"], &path);
    let v = report(&["decompose", "--input", p, "--method", "cartan-b"], 0);
    assert!(num(&v["results"]["reconstruction_residual"]) <= 1e-9);
    assert_eq!(v["results"]["split"], "B");
}

#[test]
fn givens_chain_has_no_two_photon_terms() {
    let v = report(&["decompose", "--gate", "wh", "--method", "givens"], 0);
    assert!(num(&v["results"]["two_photon_weight"]) <= 1e-9);
    assert!(num(&v["results"]["reconstruction_residual"]) <= 1e-9);
    for f in v["results"]["factors"].as_array().unwrap() {
        let s: Vec<&str> = f["support"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        assert!(!s.contains(&"l4") && !s.contains(&"l5"));
    }
}

#[test]
fn swap_gate_dod_decomposition() {
    let v = report(&["decompose", "--gate", "swap12", "--method", "dod", "--starts", "4"], 0);
    let sols = v["results"]["solutions"].as_array().unwrap();
    assert!(!sols.is_empty());
    assert!(sols.iter().all(|s| num(&s["residual"]) <= 1e-9));
}

#[test]
fn verify_sections() {
    let v = report(&["verify-paper", "--section", "table1"], 0);
    let d = v["discrepancies"].as_array().unwrap();
    assert_eq!(d.len(), 10);
    assert!(d.iter().all(|e| e["status"] == "match"));

    let v = report(&["verify-paper", "--section", "gates"], 0);
    assert!(v["discrepancies"].as_array().unwrap().iter().all(|e| e["status"] == "match"));

    let v = report(&["verify-paper", "--section", "table2"], 0);
    let d = v["discrepancies"].as_array().unwrap();
    let find = |item: &str| d.iter().find(|e| e["item"] == item).unwrap();
    for c in ["diag", "offdiag", "total"] {
        assert_eq!(find(&format!("row 1 {c}"))["status"], "match");
        assert_eq!(find(&format!("row 2 {c}"))["documented"], true);
    }
    assert_eq!(find("row 6 third_trace")["status"], "match");
    assert_eq!(find("row 6 half_trace")["documented"], true);

    let v = report(&["verify-paper", "--section", "all"], 0);
    assert_eq!(v["results"]["undocumented_mismatches"], 0);
}

#[test]
fn symmetry_reproduces_swap() {
    let v = report(&["symmetry", "--gate", "wh", "--theta", "pi,0,0", "--order", "i,-1,1"], 0);
    assert!(num(&v["results"]["distance_to_swap12"]) < 1e-10);
    assert!(num(&v["results"]["commutator_norm"]) < 1e-10);
    let v = report(&["symmetry", "--gate", "wh", "--theta", "0,pi,0"], 0);
    assert!(num(&v["results"]["distance_to_swap12"]) < 1e-10);
}

#[test]
fn symmetry_relates_printed_sets() {
    let v = report(&["symmetry", "--relate", "2,5"], 0);
    assert!((num(&v["results"]["scale"]) + 2.0).abs() < 1e-9);
    let out = run(&["symmetry", "--relate", "1,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn structconst_standard() {
    let v = report(&["structconst", "--basis", "standard"], 0);
    let f = v["results"]["f"].as_array().unwrap();
    let f123 = f.iter().find(|e| e["ijk"] == serde_json::json!([1, 2, 3])).unwrap();
    assert_eq!(num(&f123["value"]), 1.0);
    assert!(num(&v["results"]["product_rule_residual"]) < 1e-12);
    let v = report(&["structconst", "--basis", "variant9-11"], 0);
    assert_eq!(v["results"]["basis"], "variant9-11");
}

#[test]
fn random_is_deterministic() {
    let a = run(&["random", "--count", "3", "--seed", "7"]);
    let b = run(&["random", "--count", "3", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["random", "--count", "3", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let v = report(&["random", "--count", "3", "--seed", "7"], 0);
    assert_eq!(v["results"]["matrices"].as_array().unwrap().len(), 3);
}

#[test]
fn cost_of_solver_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sols.json");
    let p = path.to_str().unwrap();
    report_to(&["decompose", "--gate", "wh", "--method", "dod", "--starts", "4"], &path);
    let v = report(&["cost", "--input", p], 0);
    let r = &v["results"];
    assert_eq!(r["ranking"][0], "6");
    for row in r["per_decomposition"].as_array().unwrap() {
        assert_eq!(num(&row["total"]), num(&row["diag_cost"]) + num(&row["offdiag_cost"]));
    }
    let v = report(&["cost"], 0);
    assert_eq!(v["results"]["per_decomposition"].as_array().unwrap().len(), 5);
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let b = bad.to_str().unwrap();
    assert_eq!(run(&["decompose", "--input", b, "--method", "dod"]).status.code(), Some(2));

    let nonunitary = dir.path().join("nu.json");
    std::fs::write(&nonunitary, r#"{"rows": [[[2,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]}"#).unwrap();
    let out = run(&["decompose", "--input", nonunitary.to_str().unwrap(), "--method", "cartan-a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not unitary"));

    assert_eq!(run(&["verify-paper", "--section", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--gate", "hadamard", "--method", "dod"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--gate", "wh", "--method", "dod", "--starts", "1"]).status.code(), Some(2));
    assert_eq!(run(&["structconst", "--basis", "other"]).status.code(), Some(2));
    assert_eq!(run(&["symmetry", "--theta", "1,2"]).status.code(), Some(2));
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let a = bin().env("SU3_FORGE_THREADS", "1").args(["decompose", "--gate", "swap12", "--method", "dod", "--starts", "3"]).output().unwrap();
    let b = bin().env("SU3_FORGE_THREADS", "4").args(["decompose", "--gate", "swap12", "--method", "dod", "--starts", "3"]).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = bin().env("SU3_FORGE_THREADS", "zero").args(["random"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
