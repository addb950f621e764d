use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cobordia"));
    c.env_remove("COBORDIA_CACHE_DIR");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)));
    (code(&o), v)
}

fn all_numbers_small(v: &Value, path: &str, bad: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| all_numbers_small(x, &format!("{path}.{k}"), bad)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| all_numbers_small(x, &format!("{path}[{i}]"), bad)),
        Value::Number(_) if path.contains("coefficient") => bad.push(path.to_string()),
        _ => {}
    }
}

#[test]
fn additive_a1_table_matches_chevalley() {
    let (c, v) = json(&["flag", "table", "--type", "A1", "--theory", "additive"]);
    assert_eq!(c, 0);
    assert_eq!(v["chevalley_oracle"], Value::Bool(true));
    assert_eq!(v["meta"]["words"], serde_json::json!(["e", "1"]));
    // zeta_1 * zeta_1 = zeta_1 and zeta_e * zeta_1 = zeta_e
    let prods = v["products"].as_array().unwrap();
    assert_eq!(prods.len(), 3);
    let one_one = prods.iter().find(|p| p["u"] == "1" && p["v"] == "1").unwrap();
    assert_eq!(one_one["terms"][0]["w"], "1");
    assert_eq!(one_one["terms"][0]["monomials"][0]["coefficient"], "1");
}

#[test]
fn coefficients_are_decimal_strings() {
    let (c, v) = json(&["flag", "table", "--type", "A2", "--theory", "universal"]);
    assert_eq!(c, 0);
    let mut bad = Vec::new();
    all_numbers_small(&v, "", &mut bad);
    assert!(bad.is_empty(), "{bad:?}");
    let (_, f) = json(&["fgl", "show", "--trunc", "3"]);
    assert!(f["coefficients"].as_array().unwrap().iter().all(|c| c["monomials"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m["coefficient"].is_string())));
}

#[test]
fn g2_presentation_file_passes() {
    let p = data("g2_omega.json");
    let o = run(&["group", "verify", "--type", "G2", "--theory", "universal", "--presentation", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("verified through degree 6"));
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn missing_relation_is_a_verification_failure() {
    let p = data("g2_too_small.json");
    let o = run(&["group", "verify", "--type", "G2", "--presentation", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn law_files_are_checked() {
    let good = data("beta.fgl");
    let bad = data("broken.fgl");
    let (c, v) = json(&["fgl", "check", "--file", good.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["associative"], Value::Bool(true));
    let (c, v) = json(&["fgl", "check", "--file", bad.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(v["associative"], Value::Bool(false));
    assert_eq!(v["commutative"], Value::Bool(true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["flag", "table", "--type", "Q7"])), 2);
    assert_eq!(code(&run(&["flag", "table", "--type", "G2", "--precision", "17"])), 2);
    assert_eq!(code(&run(&["flag", "table", "--type", "SO3", "--lattice", "adjoint"])), 2);
    assert_eq!(code(&run(&["acceptance"])), 2);
    assert_eq!(code(&run(&["acceptance", "--criterion", "9"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["fgl", "check", "--theory", "file"])), 2);
}

#[test]
fn hypothesis_failure_exits_one() {
    assert_eq!(code(&run(&["group", "gamma-gap", "--type", "A2"])), 1);
}

#[test]
fn gamma_gap_for_g2() {
    let (c, v) = json(&["group", "gamma-gap", "--type", "G2"]);
    assert_eq!(c, 0);
    assert_eq!(v["n"], 3);
    let w: Vec<&str> = v["witnesses"].as_array().unwrap().iter().map(|w| w["word"].as_str().unwrap()).collect();
    assert!(w.contains(&"212"));
}

#[test]
fn slices_for_named_groups() {
    let (c, v) = json(&["group", "slices", "--type", "SO3"]);
    assert_eq!(c, 0);
    let q: Vec<String> = v["slices"].as_array().unwrap().iter().map(|s| s["quotient"]["torsion"].to_string()).collect();
    assert_eq!(q, vec!["[\"2\"]", "[\"2\"]"]);
    let (c, _) = json(&["group", "pgl", "--type", "PGL3", "--theory", "multiplicative", "--modulus", "3"]);
    assert_eq!(c, 0);
    let (c, v) = json(&["motive", "decompose", "--type", "A2", "--seed", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["generating_function"], serde_json::json!([1, 2, 2, 1]));
}

#[test]
fn artifacts_are_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let cache = dir.path().join("cache");
    let go = |out: &Path, extra: &[&str]| {
        let mut c = bin();
        c.env("COBORDIA_CACHE_DIR", &cache)
            .args(["flag", "table", "--type", "B2", "--theory", "universal", "--output"])
            .arg(out)
            .args(extra);
        c.output().unwrap()
    };
    let o1 = go(&a, &[]);
    assert_eq!(code(&o1), 0);
    assert!(String::from_utf8_lossy(&o1.stdout).contains("cache: stored"));
    let o2 = go(&b, &[]);
    assert!(String::from_utf8_lossy(&o2.stdout).contains("cache: hit"));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let o3 = go(&b, &["--precision", "13"]);
    assert!(String::from_utf8_lossy(&o3.stdout).contains("cache: recomputed (precision 12 vs 13)"));

    let file = std::fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    let raw = std::fs::read(&file).unwrap();
    std::fs::write(&file, &raw[..raw.len() / 2]).unwrap();
    assert_eq!(code(&go(&b, &["--precision", "13"])), 1);
}

#[test]
fn acceptance_single_criterion() {
    let o = run(&["acceptance", "--criterion", "4"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.starts_with("[PASS] criterion 4"));
    assert!(out.contains("1 of 1 criteria passed"));
}
