use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

fn csft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csft")).args(args).output().expect("run csft")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("csft-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// The example corpus, written once per test run.
fn examples() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = scratch("examples");
        let out = csft(&["examples", "--dir", dir.to_str().unwrap(), "--seed", "7"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        dir
    })
}

fn path(rel: &str) -> String {
    examples().join(rel).to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn examples_writes_the_corpus() {
    let dir = scratch("corpus");
    let out = csft(&["examples", "--dir", dir.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let files = json(&out)["files"].as_array().unwrap().len();
    assert!(files >= 60, "{files}");
    assert!(Path::new(&path("algebras/m2f5_u12.json")).exists());
    assert!(Path::new(&path("graphs/Cyclic/b2p2.json")).exists());
}

#[test]
fn examples_are_deterministic() {
    let a = scratch("det-a");
    let b = scratch("det-b");
    for d in [&a, &b] {
        assert!(csft(&["examples", "--dir", d.to_str().unwrap(), "--seed", "3"]).status.success());
    }
    for rel in ["graphs/NDihedral2/random_1.json", "algebras/group_algebra_3_h2.json"] {
        assert_eq!(std::fs::read(a.join(rel)).unwrap(), std::fs::read(b.join(rel)).unwrap());
    }
}

#[test]
fn factorize_a_face() {
    let out = csft(&["factorize", "--in", &path("morphisms/face_Cyclic.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["group_is_identity"], Value::Bool(true));
    assert_eq!(v["delta"]["lift"], serde_json::json!([0, 2]));
    let text = csft(&["--format", "text", "factorize", "--in", &path("morphisms/face_Cyclic.json")]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("group part identity"));
}

#[test]
fn compose_checks_composability() {
    let rot = path("morphisms/rotation_NCyclic4.json");
    let out = csft(&["compose", "--first", &rot, "--second", &rot]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["lift"], serde_json::json!([2]));
    let face = path("morphisms/face_Cyclic.json");
    assert_eq!(csft(&["compose", "--first", &face, "--second", &face]).status.code(), Some(2));
}

#[test]
fn dualize_is_an_involution() {
    let dir = scratch("dual");
    let once = csft(&["dualize", "--in", &path("morphisms/face_Cyclic.json")]);
    assert_eq!(once.status.code(), Some(0));
    let file = dir.join("d.json");
    std::fs::write(&file, &once.stdout).unwrap();
    let twice = csft(&["dualize", "--in", file.to_str().unwrap()]);
    let original: Value = serde_json::from_str(&std::fs::read_to_string(path("morphisms/face_Cyclic.json")).unwrap()).unwrap();
    assert_eq!(json(&twice), original);
}

#[test]
fn chi2_of_the_reflection() {
    let out = csft(&["chi2", "--in", &path("morphisms/reflection_Dihedral.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["perm"], serde_json::json!([1, 0]));
}

#[test]
fn frob_check_exit_codes() {
    let alg = path("algebras/m2f5_u12.json");
    let pass = csft(&["frob-check", "--algebra", &alg, "--family", "NCyclic:4"]);
    assert_eq!(pass.status.code(), Some(0));
    assert_eq!(json(&pass)["generic"], Value::Bool(true));
    for fam in ["NCyclic:2", "NCyclic:3"] {
        let fail = csft(&["frob-check", "--algebra", &alg, "--family", fam]);
        assert_eq!(fail.status.code(), Some(1), "{fam}");
        assert_eq!(json(&fail)["internal_error"], Value::Null);
    }
    let bad_family = csft(&["frob-check", "--algebra", &alg, "--family", "Braid"]);
    assert_eq!(bad_family.status.code(), Some(2));
}

#[test]
fn equivariant_algebra_passes() {
    let out = csft(&["frob-check", "--algebra", &path("algebras/group_algebra_3_h2.json"), "--family", "Cyclic"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn eval_zigzag_is_the_identity() {
    let dir = scratch("eval");
    let out_file = dir.join("t.json");
    let out = csft(&[
        "eval",
        "--graph",
        &path("graphs/Paracyclic/b2p2.json"),
        "--algebra",
        &path("algebras/m2f5_u12.json"),
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(t["shape"], serde_json::json!([4, 4]));
    let entries: Vec<&str> = t["entries"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    for (k, e) in entries.iter().enumerate() {
        assert_eq!(*e, if k % 5 == 0 { "1 mod 5" } else { "0 mod 5" });
    }
}

#[test]
fn eval_m2_is_the_multiplication() {
    let out = csft(&["eval", "--graph", &path("graphs/Cyclic/m2.json"), "--algebra", &path("algebras/group_algebra_2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let t = json(&out);
    assert_eq!(t["shape"], serde_json::json!([2, 2, 2]));
    assert_eq!(t["entries"], serde_json::json!(["1", "0", "0", "1", "0", "1", "1", "0"]));
}

#[test]
fn contract_and_normalize() {
    let g = path("graphs/Cyclic/random_0.json");
    let out = csft(&["normalize", "--graph", &g]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["vertices"].as_array().unwrap().len(), 1);
    let corolla = path("graphs/Cyclic/m2.json");
    assert_eq!(csft(&["contract", "--graph", &corolla, "--edge", "0"]).status.code(), Some(2));
}

#[test]
fn oracle_and_harness() {
    let out = csft(&["oracle", "--family", "NCyclic:2", "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let unique: std::collections::HashSet<&str> = names.iter().copied().collect();
    assert_eq!(names.len(), unique.len());
    let out = csft(&["harness", "--algebra", &path("algebras/m2f5_u12.json"), "--family", "NCyclic:4", "--seed", "1", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = csft(&["harness", "--algebra", &path("algebras/m2f5_u12.json"), "--family", "Cyclic", "--seed", "1", "--trials", "30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = scratch("bad");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"family\": {\"kind\": \"Cyclic\"},\n  \"source\": [\n").unwrap();
    let out = csft(&["factorize", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column 12"), "{err}");
    assert!(out.stdout.is_empty());
    let missing = csft(&["factorize", "--in", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}
