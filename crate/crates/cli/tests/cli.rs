use askzeta_cli::schema::{group_from_json, group_to_json, module_from_json, module_to_json};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_askzeta"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn rat(num: &str, den: &str) -> Value {
    serde_json::json!({"num": num, "den": den})
}

#[test]
fn ask_so3() {
    let out = run(&["ask", "--catalog", "so(3)", "--p", "5", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], "askzeta/1");
    let c = &v["results"][0]["coefficients"];
    assert_eq!(c[0], rat("1", "1"));
    assert_eq!(c[1], rat("149", "25"));
}

#[test]
fn output_is_deterministic() {
    let args = ["ask", "--catalog", "sl(2)", "--p", "3,5", "--n-max", "2"];
    let a = run(&args);
    let b = run(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_match_and_mismatch() {
    let out = run(&["verify", "--catalog", "n(3)", "--p", "3,5", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["match"], true);
    assert!(v["results"][1]["levels"].as_array().unwrap().iter().all(|l| l["status"] == "match"));

    // a corrupted formula is a finding, not an internal failure
    let out = run(&["verify", "--catalog", "n(3)", "--form", "(1 - T)^2/((1 - q*T)^3) + T", "--p", "5", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["first_mismatch"]["p"], 5);
    assert_eq!(v["first_mismatch"]["n"], 1);
}

#[test]
fn verify_skips_primes_outside_validity() {
    let out = run(&["verify", "--catalog", "ex_unbounded", "--p", "3,5", "--n-max", "1", "--cross-check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"][0]["status"], "skipped");
}

#[test]
fn feqn_holds_and_fails() {
    let out = run(&["feqn", "--form", "(1-q^-2*T)/((1-T)*(1-T))", "--d", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "functional equation holds");
    let out = run(&["feqn", "--form", "1/(1-T)", "--d", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["feqn", "--catalog", "ex_elliptic"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["ask", "--catalog", "nope(2)", "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["ask", "--catalog", "so(3)", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["ask", "--catalog", "so(3)", "--p", "3", "--method", "fast"]).status.code(), Some(2));
    assert_eq!(run(&["feqn", "--form", "1/(1-", "--d", "1"]).status.code(), Some(2));
    let malformed = fixture("malformed.json");
    assert_eq!(run(&["ask", "--input", malformed.to_str().unwrap(), "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["ask", "--catalog", "mat(3,3)", "--p", "5", "--n-max", "6", "--budget", "1000"]).status.code(), Some(3));
    assert_eq!(run(&["cc", "--catalog", "n(3)", "--p", "2", "--n-max", "1"]).status.code(), Some(2));
}

#[test]
fn input_module_matches_catalog() {
    let so3 = fixture("so3.json");
    let a = json_of(&run(&["ask", "--input", so3.to_str().unwrap(), "--p", "3", "--n-max", "2"]));
    let b = json_of(&run(&["ask", "--catalog", "so(3)", "--p", "3", "--n-max", "2"]));
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn schema_round_trip() {
    for name in ["so3.json", "heisenberg.json", "string_entries.json"] {
        let raw: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let (m, lie) = module_from_json(&raw).unwrap();
        let printed = module_to_json(&m, lie);
        let (m2, lie2) = module_from_json(&printed).unwrap();
        assert_eq!((m.clone(), lie), (m2, lie2), "{name}");
        assert_eq!(printed, module_to_json(&m, lie));
    }
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(fixture("swap.json")).unwrap()).unwrap();
    let g = group_from_json(&raw).unwrap();
    assert_eq!(group_from_json(&group_to_json(&g)).unwrap(), g);
}

#[test]
fn structure_reports() {
    let v = json_of(&run(&["structure", "--catalog", "sp(4)"]));
    assert_eq!(v["template"]["label"], "mat(4,4)");
    assert_eq!(v["o_maximal"]["status"], "certified");
    let v = json_of(&run(&["structure", "--catalog", "diag(2)", "--seed", "3"]));
    assert_eq!(v["o_maximal"]["status"], "refuted");
    assert!(v["template"].is_null());
    assert_eq!(v["seed"], 3);
    let v = json_of(&run(&["structure", "--catalog", "band(2)", "--q", "3"]));
    assert_eq!(v["k_minimal"]["status"], "certified");
    assert_eq!(v["constant_rank"]["constant"], true);
}

#[test]
fn class_counts() {
    let out = run(&["cc", "--catalog", "L_{3,2}", "--p", "5", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let r = &v["results"][0];
    assert_eq!(r["direct"], serde_json::json!(["1", "29", "745"]));
    assert_eq!(r["via_ask"][2], rat("745", "1"));
    let h = fixture("heisenberg.json");
    let out = run(&["cc", "--input", h.to_str().unwrap(), "--p", "5", "--n-max", "1"]);
    assert_eq!(json_of(&out)["results"][0]["direct"][1], "29");
}

#[test]
fn orbit_counts() {
    let v = json_of(&run(&["oc", "--catalog", "GL(2)", "--p", "3", "--n-max", "2"]));
    assert_eq!(v["results"][0]["counts"], serde_json::json!(["1", "2", "3"]));
    let v = json_of(&run(&["oc", "--catalog", "neg(1)", "--p", "5,7", "--n-max", "1"]));
    assert_eq!(v["results"][1]["counts"][1], "4");
    let swap = fixture("swap.json");
    let v = json_of(&run(&["oc", "--input", swap.to_str().unwrap(), "--p", "3", "--n-max", "2"]));
    assert_eq!(v["results"][0]["counts"], serde_json::json!(["1", "6", "45"]));
    let out = run(&["oc", "--catalog", "n(3)", "--p", "5", "--n-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"][0]["via_ask"][1], rat("13", "1"));
    let v = json_of(&run(&["oc", "--catalog", "semidirect:mat(1,1)", "--p", "3", "--n-max", "1"]));
    assert_eq!(v["results"][0]["counts"][1], "5");
}

#[test]
fn csv_and_out_file() {
    let dir = std::env::temp_dir().join(format!("askzeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.csv");
    let out = run(&["ask", "--catalog", "mat(1,1)", "--p", "3", "--n-max", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "p,n,ask\n3,0,1\n3,1,5/3\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn catalog_and_brenti() {
    let v = json_of(&run(&["catalog"]));
    assert!(v["entries"].as_array().unwrap().iter().any(|e| e["key"] == "cc:L_{3,2}"));
    let v = json_of(&run(&["catalog", "--catalog", "n(3)"]));
    assert_eq!(v["module_json"]["d"], 3);
    let out = run(&["brenti", "--n", "2", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["identity_holds"], true);
}
