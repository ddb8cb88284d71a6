use std::io::Write;
use std::process::Command;

use lagsphere::cli::{run, RunResult};
use lagsphere::json::{
    class_from_json, class_to_json, form_from_json, form_to_json, matrix_to_json, parse_class_json,
    parse_matrix_json, ClassJson, JsonError,
};
use lagsphere_core::twist::IsometryMatrix;
use lagsphere_core::{parse_class, parse_form, LatticeModel};
use serde_json::Value;
use tempfile::NamedTempFile;

fn lag(args: &[&str]) -> RunResult {
    run(std::iter::once("lagsphere").chain(args.iter().copied()))
}

fn lag_json(args: &[&str]) -> (i32, Value) {
    let mut v: Vec<&str> = args.to_vec();
    v.extend(["--output", "json"]);
    let r = lag(&v);
    let j = serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", r.stdout));
    (r.code, j)
}

fn temp_json(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn identity_file(model: LatticeModel) -> NamedTempFile {
    let m = IsometryMatrix::identity(model);
    temp_json(&serde_json::to_string(&matrix_to_json(&m)).unwrap())
}

#[test]
fn classify_knull_with_normal_form() {
    let (code, j) = lag_json(&["--model", "rational:6", "classify", "2H-E1-E2-E3-E4-E5-E6"]);
    assert_eq!(code, 0);
    assert_eq!(j["knull"], true);
    assert_eq!(j["square"], -2);
    assert_eq!(j["k0_pairing"], 0);
    assert_eq!(j["normal_form"]["representative"]["text"], "H - E4 - E5 - E6");
    assert_eq!(j["normal_form"]["word"].as_array().unwrap().len(), 1);
}

#[test]
fn classify_characteristic_ternary() {
    let (_, j) = lag_json(&["--model", "rational:3", "classify", "H-E1-E2-E3"]);
    assert_eq!(j["knull"], true);
    assert_eq!(j["characteristic"], true);
    assert_eq!(j["normal_form"]["kind"], "ternary");
}

#[test]
fn classify_positive_square() {
    let (code, j) = lag_json(&["--model", "rational:2", "classify", "H"]);
    assert_eq!(code, 0);
    assert_eq!(j["knull"], false);
    assert_eq!(j["square"], 1);
}

#[test]
fn classify_text_output() {
    let r = lag(&["--model", "rational:6", "classify", "2H-E1-E2-E3-E4-E5-E6"]);
    assert!(r.stdout.contains("knull: true"));
    assert!(r.stdout.contains("ternary (H - E4 - E5 - E6)"));
}

#[test]
fn lagrangian_yes_and_no() {
    let (code, j) = lag_json(&["--model", "rational:2", "lagrangian", "E1-E2", "3H-E1-E2"]);
    assert_eq!((code, &j["lagrangian"]), (0, &Value::Bool(true)));
    assert_eq!(j["certificate"]["kind"], "binary");

    let (code, j) = lag_json(&["--model", "rational:2", "lagrangian", "E1-E2", "3H-E1-3/2E2"]);
    assert_eq!(code, 1);
    assert_eq!(j["lagrangian"], false);
    assert_eq!(j["detail"]["area"], "-1/2");
}

#[test]
fn lagrangian_form_outside_cone_is_input_error() {
    let (code, j) = lag_json(&["--model", "rational:2", "lagrangian", "E1-E2", "3H-E1-2E2"]);
    assert_eq!(code, 2);
    assert_eq!(j["error"]["kind"], "lattice");
}

#[test]
fn lagrangian_ruled_equal_areas() {
    let (code, j) = lag_json(&["--model", "ruled:h=1,n=2", "lagrangian", "E1-E2", "2T+2F-E1-E2"]);
    assert_eq!(code, 0);
    assert_eq!(j["certificate"]["kind"], "ruled-listed");
    assert!(j["cone_note"].is_string());
}

#[test]
fn decompose_identity_gives_empty_word() {
    let f = identity_file(LatticeModel::rational(4));
    let path = f.path().to_str().unwrap();
    let (code, j) = lag_json(&["--model", "rational:4", "decompose", "--matrix", path]);
    assert_eq!(code, 0);
    assert_eq!(j["length"], 0);
    assert_eq!(j["word"], Value::Array(vec![]));
    assert_eq!(j["validation"]["ok"], true);
}

#[test]
fn decompose_swap_and_violation() {
    let m = LatticeModel::rational(2);
    let swap = r#"{"model":{"type":"rational","n":2},"matrix":[[1,0,0],[0,0,1],[0,1,0]]}"#;
    let f = temp_json(swap);
    let (code, j) = lag_json(&["decompose", "--matrix", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(j["word"][0]["text"], "E1 - E2");
    assert_eq!(parse_matrix_json(swap).unwrap().model(), m);

    let bad = temp_json(r#"{"model":{"type":"rational","n":2},"matrix":[[2,0,0],[0,1,0],[0,0,1]]}"#);
    let (code, j) = lag_json(&["decompose", "--matrix", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(j["validation"]["ok"], false);
}

#[test]
fn decompose_model_mismatch_and_ruled_without_alpha() {
    let f = identity_file(LatticeModel::rational(4));
    let r = lag(&["--model", "rational:3", "decompose", "--matrix", f.path().to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("model"));

    let g = identity_file(LatticeModel::ruled(1, 2));
    let r = lag(&["decompose", "--matrix", g.path().to_str().unwrap()]);
    assert_eq!(r.code, 2);
    let r = lag(&["decompose", "--matrix", g.path().to_str().unwrap(), "--alpha", "2T+2F-E1-E2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn enumerate_counts() {
    let (code, j) = lag_json(&["--model", "rational:3", "enumerate", "--kind", "exceptional"]);
    assert_eq!(code, 0);
    assert_eq!(j["count"], 6);
    assert_eq!(j["complete"], true);

    let (_, j) = lag_json(&["--model", "rational:6", "enumerate", "--kind", "knull"]);
    assert_eq!(j["count"], 72);

    let (_, j) = lag_json(&["--model", "ruled:h=1,n=1", "enumerate", "--kind", "exceptional", "--bound", "2"]);
    assert_eq!(j["count"], 2);

    let (_, j) = lag_json(&["--model", "rational:2", "enumerate", "--kind", "any", "--bound", "1", "--square", "-1"]);
    let texts: Vec<&str> = j["classes"].as_array().unwrap().iter().map(|c| c["text"].as_str().unwrap()).collect();
    assert!(texts.contains(&"E1") && texts.contains(&"H - E1 - E2"));
}

#[test]
fn enumerate_requires_bound_when_infinite() {
    let r = lag(&["--model", "rational:9", "enumerate", "--kind", "knull"]);
    assert_eq!(r.code, 2);
    let r = lag(&["--model", "rational:3", "enumerate", "--kind", "any", "--bound", "50"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("safety limit"));
}

#[test]
fn cone_verdicts() {
    let (code, j) = lag_json(&["--model", "rational:1", "cone", "--form", "3H-E1"]);
    assert_eq!((code, &j["in_cone"]), (0, &Value::Bool(true)));

    let (code, j) = lag_json(&["--model", "rational:2", "cone", "--form", "H-E1-E2"]);
    assert_eq!(code, 1);
    assert_eq!(j["in_cone"], false);

    let (code, j) = lag_json(&["--model", "rational:1", "cone", "--form", "3H-E1", "--inflation", "4H-E1"]);
    assert_eq!(code, 0);
    assert_eq!(j["inflation"]["admissible"], true);
}

#[test]
fn reduce_adds_binary_form() {
    let (code, j) = lag_json(&["--model", "rational:5", "reduce", "H-E1-E2-E3"]);
    assert_eq!(code, 0);
    assert_eq!(j["normal_form"]["kind"], "ternary");
    assert_eq!(j["binary_form"]["kind"], "binary");
    let (_, j) = lag_json(&["--model", "rational:3", "reduce", "H-E1-E2-E3"]);
    assert!(j.get("binary_form").is_none());
}

#[test]
fn crosscheck_is_seeded() {
    let args = ["--model", "rational:4", "--seed", "11", "crosscheck", "--predicate", "knull", "--bound", "2", "--sample", "8"];
    let (code, a) = lag_json(&args);
    let (_, b) = lag_json(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 11);
    assert_eq!(a["checked"], 8);
    assert_eq!(a["disagreements"], Value::Array(vec![]));
}

#[test]
fn seed_is_echoed() {
    let r = lag(&["--model", "rational:2", "--seed", "42", "classify", "H"]);
    assert!(r.stdout.contains("seed: 42"));
}

#[test]
fn parse_error_reports_position() {
    let (code, j) = lag_json(&["--model", "rational:3", "classify", "3H - E9"]);
    assert_eq!(code, 2);
    assert_eq!(j["error"]["kind"], "parse");
    assert!(j["error"]["position"].is_u64());

    let r = lag(&["--model", "rational:3", "classify", "H + Q"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("position"));
}

#[test]
fn bad_model_and_missing_model() {
    let r = lag(&["--model", "elliptic:3", "classify", "H"]);
    assert_eq!(r.code, 2);
    let r = lag(&["classify", "H"]);
    assert_eq!(r.code, 2);
    let r = lag(&["--model", "rational:2", "--degree-bound", "0", "classify", "H"]);
    assert_eq!(r.code, 2);
}

#[test]
fn class_from_json_file() {
    let f = temp_json(r#"{"model":{"type":"rational","n":3},"coeffs":[1,-1,-1,-1]}"#);
    let arg = format!("@{}", f.path().display());
    let (code, j) = lag_json(&["classify", &arg]);
    assert_eq!(code, 0);
    assert_eq!(j["characteristic"], true);
    let r = lag(&["--model", "rational:4", "classify", &arg]);
    assert_eq!(r.code, 2);
}

#[test]
fn json_output_round_trips() {
    let (_, j) = lag_json(&["--model", "rational:6", "classify", "2H-E1-E2-E3-E4-E5-E6"]);
    let cj: ClassJson = serde_json::from_value(j["class"].clone()).unwrap();
    assert_eq!(class_from_json(&cj).unwrap().to_string(), j["class"]["text"]);
    let rep: ClassJson = serde_json::from_value(j["normal_form"]["representative"].clone()).unwrap();
    assert_eq!(class_from_json(&rep).unwrap().to_string(), "H - E4 - E5 - E6");

    let (_, j) = lag_json(&["--model", "ruled:h=2,n=1", "cone", "--form", "2T + 3/2 F - 1/2 E1"]);
    let fj: ClassJson = serde_json::from_value(j["form"].clone()).unwrap();
    let f = form_from_json(&fj).unwrap();
    assert_eq!(f, parse_form("2T + 3/2 F - 1/2 E1", LatticeModel::ruled(2, 1)).unwrap());
}

#[test]
fn json_schema_round_trips() {
    let m = LatticeModel::ruled(2, 3);
    let x = parse_class("3T - 2F + E1 - 7E3", m).unwrap();
    let text = serde_json::to_string(&class_to_json(&x)).unwrap();
    assert!(text.contains(r#""type":"ruled""#) && text.contains(r#""genus":2"#));
    assert_eq!(parse_class_json(&text).unwrap(), x);

    let big = parse_class("123456789012345678901234567890 H", LatticeModel::rational(0)).unwrap();
    let text = serde_json::to_string(&class_to_json(&big)).unwrap();
    assert!(text.contains(r#""123456789012345678901234567890""#));
    assert_eq!(parse_class_json(&text).unwrap(), big);

    let f = parse_form("3H - 3/2 E1", LatticeModel::rational(1)).unwrap();
    let text = serde_json::to_string(&form_to_json(&f)).unwrap();
    assert_eq!(text, r#"{"model":{"type":"rational","n":1},"coeffs":[3,"-3/2"]}"#);
    assert_eq!(form_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), f);
}

#[test]
fn json_schema_rejects_bad_input() {
    let cases = [
        r#"{"model":{"type":"rational","n":1},"coeffs":[1,"1/2"]}"#,
        r#"{"model":{"type":"rational","n":1},"coeffs":[1,"x"]}"#,
        r#"{"model":{"type":"rational","n":1},"coeffs":[1,"1/0"]}"#,
        r#"{"model":{"type":"ruled","genus":0,"n":1},"coeffs":[1,0,0]}"#,
        r#"{"model":{"type":"rational","n":2},"coeffs":[1,0]}"#,
        r#"{"model":{"type":"rational"},"coeffs":[1]}"#,
    ];
    let kinds: Vec<JsonError> = cases.iter().map(|c| parse_class_json(c).unwrap_err()).collect();
    assert!(matches!(kinds[0], JsonError::NonInteger { index: 1 }));
    assert!(matches!(kinds[1], JsonError::BadCoefficient { index: 1, .. }));
    assert!(matches!(kinds[2], JsonError::BadCoefficient { .. }));
    assert!(matches!(kinds[3], JsonError::Model(_)));
    assert!(matches!(kinds[4], JsonError::Lattice(_)));
    assert!(matches!(kinds[5], JsonError::Syntax(_)));
    assert!(parse_matrix_json(r#"{"model":{"type":"rational","n":1},"matrix":[[1,0]]}"#).is_err());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lagsphere");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["--model", "rational:1", "cone", "--form", "3H-E1"]), Some(0));
    assert_eq!(status(&["--model", "rational:2", "lagrangian", "E1-E2", "3H-E1-3/2E2"]), Some(1));
    assert_eq!(status(&["--model", "rational:2", "classify", "H+"]), Some(2));
    let out = Command::new(bin).args(["--model", "rational:3", "enumerate", "--kind", "exceptional"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("6 exceptional classes"));
}
