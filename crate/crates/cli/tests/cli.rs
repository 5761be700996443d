use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    format!("{}/../core/corpus/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn coiso(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coiso")).args(args).current_dir(dir).output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = coiso(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"]["kind"], "usage");
    let out = coiso(dir.path(), &["fill", "--complex", "missing.json", "--omega", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"]["kind"], "input");
    let out = coiso(dir.path(), &["duality", "--complex", &corpus("c4"), "--k", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_coboundary_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("w.json"), r#"{ "k": 2, "ring": "int", "entries": [[0, "1"]] }"#).unwrap();
    let out = coiso(dir.path(), &["fill", "--complex", &corpus("s2"), "--omega", "w.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = json(&out.stderr);
    assert_eq!(err["error"]["kind"], "not_coboundary");
    let witness = &err["error"]["details"]["witness"];
    assert_eq!(witness["k"], 2);
    assert_eq!(witness["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn torsion_blocks_integral_filling() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("w.json"), r#"{ "k": 2, "ring": "int", "entries": [[0, "1"]] }"#).unwrap();
    let out = coiso(dir.path(), &["fill", "--complex", &corpus("rp2"), "--omega", "w.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stderr)["error"]["kind"], "not_integrally_fillable");
    let out = coiso(dir.path(), &["fill", "--complex", &corpus("rp2"), "--omega", "w.json", "--ring", "rat"]);
    assert!(out.status.success());
    assert_eq!(json(&out.stdout)["report"]["residual_zero"], true);
}

#[test]
fn fill_then_schedule() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("w.json"), r#"{ "k": 2, "ring": "int", "entries": [[0, "1"], [1, "1"]] }"#).unwrap();
    let out = coiso(dir.path(), &["fill", "--complex", &corpus("s2"), "--omega", "w.json", "--out", "a.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = json(&fs::read(dir.path().join("a.json")).unwrap());
    assert_eq!(a["ring"], "int");
    assert_eq!(a["k"], 1);
    assert_eq!(a["report"]["residual_zero"], true);
    assert_eq!(a["config"]["command"], "fill");
    assert!(a["tool_version"].is_string());

    let out = coiso(dir.path(), &["schedule", "--complex", &corpus("s2"), "--omega", "w.json", "--alpha", "a.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&out.stdout);
    assert_eq!(s["layers"], 1);
    assert_eq!(s["report"]["closedness"], true);

    // A cochain that is not a filling of ω is rejected.
    fs::write(dir.path().join("z.json"), r#"{ "k": 1, "ring": "int", "entries": [] }"#).unwrap();
    let out = coiso(dir.path(), &["schedule", "--complex", &corpus("s2"), "--omega", "w.json", "--alpha", "z.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stderr)["error"]["kind"], "not_a_filling");
}

#[test]
fn subdivide_writes_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = coiso(dir.path(), &["subdivide", "--in", &corpus("delta2"), "--L", "3", "--out", "d3.json"]);
    assert!(out.status.success());
    let x = json(&fs::read(dir.path().join("d3.json")).unwrap());
    assert_eq!(x["dim"], 2);
    assert_eq!(x["simplices"].as_array().unwrap().len(), 9);
    let prov = json(&fs::read(dir.path().join("d3.prov.json")).unwrap());
    assert_eq!(prov["L"], 3);
    assert!(prov["regularity"].is_object());
    let out = coiso(dir.path(), &["verify", "--complex", "d3.json", "--betti", "1,0,0"]);
    assert!(out.status.success());
    let out = coiso(dir.path(), &["verify", "--complex", "d3.json", "--betti", "1,1,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "cip-sweep",
        "--complex",
        &corpus("s2"),
        "--k",
        "2",
        "--L",
        "1,2",
        "--trials",
        "3",
        "--seed",
        "1",
        "--out",
        "s.csv",
    ];
    assert!(coiso(dir.path(), &args).status.success());
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("L,trial,norm_omega,norm_alpha,ratio"));
    assert_eq!(lines.count(), 6);
    let meta = json(&fs::read(dir.path().join("s.meta.json")).unwrap());
    assert_eq!(meta["summaries"].as_array().unwrap().len(), 2);
}

#[test]
fn tree_kinds() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.json"), r#"{ "n": 2, "r": 3 }"#).unwrap();
    let out = coiso(dir.path(), &["tree", "--in", "g.json", "--k", "1", "--kind", "cube"]);
    assert!(out.status.success());
    assert_eq!(json(&out.stdout)["recursive_agrees"], true);
    let out = coiso(dir.path(), &["tree", "--in", &corpus("c4"), "--k", "1", "--kind", "wrapping"]);
    assert_eq!(json(&out.stdout)["cells"].as_array().unwrap().len(), 4);
    let out = coiso(dir.path(), &["tree", "--in", &corpus("telescope"), "--k", "1", "--exact"]);
    assert_eq!(json(&out.stdout)["gnarledness_exact"]["value"], "2");
}
