use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(p: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(p).to_string_lossy().into_owned()
}

fn equik(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_equik")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let v = serde_json::from_str(&stdout).or_else(|_| serde_json::from_str(&stderr)).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stdout)
}

fn factors(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn cohomology_examples() {
    let (code, v, _) = equik(&["cohomology", "--builder", "cyclic:4", "--action", "inversion", "--complex", "a"]);
    assert_eq!(code, 0);
    assert_eq!(factors(&v["result"]["invariant_factors"]), vec![2, 4]);
    let (_, v, _) = equik(&["cohomology", "--builder", "cyclic:3", "--complex", "single"]);
    assert_eq!(factors(&v["result"]["invariant_factors"]), vec![3]);
    let (_, v, _) = equik(&["cohomology", "--builder", "cyclic:1", "--complex", "full"]);
    assert!(factors(&v["result"]["invariant_factors"]).is_empty());
    assert_eq!(v["tool"], "equik");
    assert_eq!(v["config"]["command"]["name"], "cohomology");
}

#[test]
fn group_and_action_files() {
    let (code, v, _) = equik(&["cohomology", "--group", &data("groups/z4.json"), "--action", &data("actions/z2_inverts_z4.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(factors(&v["result"]["invariant_factors"]), vec![2, 4]);
    let (_, v, _) = equik(&["ms", "--group", &data("groups/z4.json"), "--action", &data("actions/trivial_z2.json")]);
    assert_eq!(factors(&v["result"]["ms"]), vec![2]);
    let (_, v, _) = equik(&["cohomology", "--group", &data("groups/z3_table.json"), "--complex", "single"]);
    assert_eq!(factors(&v["result"]["invariant_factors"]), vec![3]);
}

#[test]
fn ms_examples() {
    let ms = |b: &str, a: &str| {
        let (code, v, _) = equik(&["ms", "--builder", b, "--action", a]);
        assert_eq!(code, 0);
        factors(&v["result"]["ms"])
    };
    assert!(ms("cyclic:5", "inversion").is_empty());
    assert_eq!(ms("cyclic:4", "conjugation"), vec![4]);
    assert_eq!(ms("cyclic:4", "inversion"), vec![2]);
    assert_eq!(ms("cyclic:6", "trivial:cyclic:4"), vec![2]);
}

#[test]
fn dpr_classes() {
    let class = |b: &str| {
        let (code, v, _) = equik(&["dpr", "--builder", b]);
        assert_eq!(code, 0);
        factors(&v["result"]["ms_class"])
    };
    assert_eq!(class("cyclic:4"), vec![2]);
    assert_eq!(class("cyclic:3"), vec![2]);
    let (code, v, _) = equik(&["dpr", "--builder", "cyclic:2", "--w-file", &data("cochains/z2_w.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(factors(&v["result"]["ms_class"]), vec![0]);
    assert_eq!(v["result"]["theta"]["entries"][0]["value"], "1/2");
}

#[test]
fn fusion_of_trivial_z2_is_klein_group_ring() {
    let (code, v, _) = equik(&["fusion", "--builder", "cyclic:2", "--action", "trivial", "--coquasi"]);
    assert_eq!(code, 0);
    let ring = &v["result"]["ring"];
    assert_eq!(ring["rank"], 4);
    assert_eq!(ring["unit"], 0);
    assert_eq!(factors(&ring["invertible_orders"]), vec![1, 2, 2, 2]);
    assert_eq!(v["result"]["coquasi"]["labels"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_suites_pass() {
    let (code, v, _) = equik(&["verify", "--builder", "symmetric:3", "--suite", "shuffle", "--samples", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);
    let (code, v, _) = equik(&["verify", "--builder", "cyclic:4", "--action", "inversion", "--suite", "complexes"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_deterministic() {
    let args = ["fusion", "--builder", "symmetric:3", "--twist", "dpr:1", "--seed", "7"];
    let (_, _, a) = equik(&args);
    let (_, _, b) = equik(&args);
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn errors_carry_kind_and_exit_code() {
    let (code, v, _) = equik(&["cohomology", "--builder", "cyclic:4", "--complex", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
    let (code, v, _) = equik(&["cohomology", "--builder", "cyclic:12", "--complex", "full", "--degree", "4", "--max-nnz", "1000"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "resource");
    let (code, _, _) = equik(&["dpr", "--builder", "cyclic:4", "--action", "inversion"]);
    assert_eq!(code, 2);
    let (code, v, _) = equik(&["cohomology", "--builder", "symmetric:3", "--action", "inversion"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn text_format_renders_table() {
    let (code, _, out) = equik(&["cohomology", "--builder", "cyclic:4", "--action", "inversion", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("invariant_factors") && l.ends_with("[2,4]")));
}
