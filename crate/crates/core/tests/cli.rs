use std::process::Command;

fn tracelab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tracelab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn zeta_json_report() {
    let (code, out) = tracelab(&["zeta", "--curve", "ell:q=3;a=1;b=0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "tracelab/1");
    assert_eq!(v["summary"]["numerator"], serde_json::json!(["1", "0", "3"]));
    assert_eq!(v["pass"], true);
    assert!(v.get("duration_ms").is_none());
}

#[test]
fn exit_codes() {
    assert_eq!(tracelab(&["zeta", "--curve", "ell:q=4;a=1"]).0, 2);
    assert_eq!(tracelab(&["zeta"]).0, 2);
    assert_eq!(tracelab(&["nonsense", "--curve", "p1:q=3"]).0, 2);
    assert_eq!(tracelab(&["zeta", "--curve", "p1:q=3", "--unknown", "1"]).0, 2);
    assert_eq!(tracelab(&["zeta", "--curve", "p1:q=3", "--format", "xml"]).0, 2);
    assert_eq!(tracelab(&["lfun", "--curve", "p1:q=3", "--dmax", "30"]).0, 3);
    assert_eq!(tracelab(&["hitchin-strata", "--curve", "ell2:q=2;f=x^3"]).0, 4);
    assert_eq!(tracelab(&["gl1-trace", "--curve", "p1:q=7", "--out", "/nonexistent/dir/r.json"]).0, 2);
}

#[test]
fn output_file_and_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gl1.tsv");
    let p = path.to_str().unwrap();
    let (code, out) = tracelab(&["gl1-trace", "--curve", "ell:q=3;a=1;b=0", "--format", "tsv", "--out", p]);
    assert_eq!((code, out.as_str()), (0, ""));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("curve\tjacobian_order\tclass_number\tvalue\texpected\tequal\nell:q=3;a=1;b=0\t4\t4\t2\t2\ttrue\n"));
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"curve":"p1:q=5","format":"tsv"}"#).unwrap();
    let (code, out) = tracelab(&["zeta", "--config", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# tracelab/1 zeta pass\n"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"curve":"p1:q=5","bogus":1}"#).unwrap();
    assert_eq!(tracelab(&["zeta", "--config", bad.to_str().unwrap()]).0, 2);
}

#[test]
fn reports_are_reproducible() {
    let args = ["hecke", "--curve", "ell2:q=2;f=x^3", "--dmax", "3", "--weights", "1,-1", "--seed", "5"];
    let (c1, a) = tracelab(&args);
    let (c2, b) = tracelab(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}
