use std::process::Command;

use serde_json::Value;

fn sl2cert(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sl2cert"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = sl2cert(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn group_reports_order_and_traces() {
    let v = json(&["group", "T"]);
    assert_eq!(v["order"], 24);
    assert_eq!(v["traces"]["0"], 6);
    assert_eq!(v["traces"]["-1"], 8);
    let s = json(&["group", "S"]);
    assert_eq!(s["order"], 48);
    assert_eq!(s["traces"]["1*sqrt2"], 6);
    let i = json(&["--prime", "241", "group", "I"]);
    assert_eq!(i["order"], 120);
    assert_eq!(i["prime"], 241);
}

#[test]
fn fixspace_gives_dimension_and_rref_basis() {
    let v = json(&["fixspace", "S", "37"]);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["basis"]["rows"], 2);
    assert_eq!(v["basis"]["cols"], 37);
    assert_eq!(v["basis"]["entries"].as_array().unwrap().len(), 74);
}

#[test]
fn decompose_dumps_projections() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("proj.json");
    let v = json(&["decompose", "7", "9", "--dump", path.to_str().unwrap()]);
    assert_eq!(v["degrees"], serde_json::json!([15, 13, 11, 9, 7, 5, 3]));
    let dump: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let projections = dump["projections"].as_array().unwrap();
    assert_eq!(projections.len(), 7);
    assert_eq!(projections[0]["matrix"]["rows"], 63);
    // traces of the projections are the summand dimensions
    let mut dims = Vec::new();
    for p in projections {
        let e = p["matrix"]["entries"].as_array().unwrap();
        let tr: u64 = (0..63)
            .map(|i| e[i * 63 + i].as_u64().unwrap())
            .sum::<u64>()
            % 101;
        dims.push(tr);
    }
    assert_eq!(dims, vec![15, 13, 11, 9, 7, 5, 3]);
}

#[test]
fn invariants_summary() {
    let v = json(&["invariants", "T", "--dmax", "24"]);
    assert_eq!(v["degrees"], serde_json::json!([6, 8, 12]));
    assert_eq!(v["dimensions"].as_array().unwrap().len(), 25);
    assert_eq!(v["dimensions"][24], 3);
    assert_eq!(v["syzygy"]["pass"], true);
    assert_eq!(v["generation"]["pass"], true);
}

#[test]
fn transvect_takes_coefficient_lists() {
    let v = json(&["transvect", "1,0,0", "0,0,1", "1"]);
    assert_eq!(v["coeffs"], serde_json::json!([0, 4, 0]));
    let w = json(&["transvect", "-1,2", "3,4", "0"]);
    assert_eq!(w["coeffs"], serde_json::json!([98, 2, 8]));
    let (code, _, err) = sl2cert(&["transvect", "1,0", "1,0", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("transvectant order"), "{err}");
}

#[test]
fn verify_all_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, out, _) = sl2cert(&[
        "verify-all",
        "--only",
        "distinct",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert_eq!(v["pass"], true);

    let (code, out, _) = sl2cert(&["--prime", "13", "verify-all", "--only", "group"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("ERROR"));

    let (code, _, err) = sl2cert(&["verify-all", "--only", "no.such.check"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown check"));
}

#[test]
fn bad_group_label_is_a_usage_error() {
    let (code, _, err) = sl2cert(&["group", "X"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown group"));
}
