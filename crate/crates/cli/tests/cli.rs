use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn chaindyn(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaindyn"))
        .args(args)
        .env("CHAINDYN_STORE", store)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stored_key(out: &Output) -> String {
    let err = String::from_utf8_lossy(&out.stderr);
    let line = err.lines().find(|l| l.starts_with("stored")).expect("run was stored");
    line.split_whitespace().last().unwrap().to_string()
}

#[test]
fn doubling_decomposes_into_one_aperiodic_component() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = data("doubling.toml");
    let v = json(&chaindyn(tmp.path(), &["decompose", "--system", &sys, "--boxes", "64", "--delta", "1/64"]));
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["period"], 1);
    assert_eq!(v["chain_recurrent"].as_array().unwrap().len(), 64);
}

#[test]
fn discretize_emits_dot_and_json() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = data("tent.toml");
    let dot = chaindyn(tmp.path(), &["discretize", "--system", &sys, "--boxes", "4", "--emit", "dot"]);
    assert!(dot.status.success());
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("digraph"));
    let v = json(&chaindyn(tmp.path(), &["discretize", "--system", &sys, "--boxes", "4"]));
    assert_eq!(v["boxes"], 4);
    assert_eq!(v["delta"], "1/4");
}

#[test]
fn full_shift_certificate() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = data("fullshift.toml");
    let out = chaindyn(tmp.path(), &["dc1", "certify", "--system", &sys, "--u", "01010101", "--v", "00000000", "--r", "1/2"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["verdict"], "finite-scale DC1 evidence to level 8");
}

#[test]
fn identity_points_are_unrelated_without_chain_slack() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = data("identity.toml");
    let v = json(&chaindyn(
        tmp.path(),
        &["relate", "--system", &sys, "--x", "0.1", "--y", "0.7", "--boxes", "8", "--schedule", "0"],
    ));
    assert_eq!(v["related_for_all_tested"], false);
    assert_eq!(v["records"][0]["u_box"], 0);
    assert_eq!(v["records"][0]["v_box"], 5);
}

#[test]
fn pstar_and_dc1_pipeline_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let sys = data("golden.toml");
    let v = json(&chaindyn(tmp.path(), &["pstar", "--system", &sys, "--x", "(0)", "--y", "(01)", "--r", "1/4"]));
    assert_eq!(v["found"], true);
    assert_eq!(v["witness"]["k"], 2);
    let g = json(&chaindyn(tmp.path(), &["dc1", "gather", "--system", &sys, "--z", "(0)", "--w", "(01)", "--r", "1/4", "--nmax", "3"]));
    assert_eq!(g["verified"], true);
    assert_eq!(g["levels"][0]["gamma1"], serde_json::json!(["01", "10", "01"]));
    let out = chaindyn(tmp.path(), &["dc1", "schedule", "--system", &data("fullshift.toml"), "--r", "1/2", "--nmax", "2"]);
    assert_eq!(json(&out)["rows"][1]["m"], "6");
    let xi = json(&chaindyn(tmp.path(), &["dc1", "build-xi", "--system", &data("fullshift.toml"), "--r", "1/2", "--u", "01"]));
    assert_eq!(xi["len"], 9);

    let dir = tmp.path().join("stats");
    let out = chaindyn(
        tmp.path(),
        &["dc1", "stats", "--system", &data("fullshift.toml"), "--r", "1/2", "--u", "0000", "--v", "0101", "--plot",
          "--out", dir.to_str().unwrap()],
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("stats.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("n,c,phi_1/2"));
    assert!(std::fs::read_to_string(dir.join("stats.gp")).unwrap().contains("'stats.csv'"));

    let f = json(&chaindyn(tmp.path(), &["dc1", "factor", "--system", &sys, "--x", "(0)", "--y", "(01)", "--epsilon", "1/8", "--s", "0110"]));
    assert_eq!(f["a"], 2);
    assert_eq!(f["sample"]["in_cylinder"], serde_json::json!([true, true, true, true]));
}

#[test]
fn tracking_classification_and_thick_profiles() {
    let tmp = tempfile::tempdir().unwrap();
    let out = chaindyn(tmp.path(), &["track", "--system", &data("golden.toml"), "--po", &data("golden_po.jsonl"), "--horizon", "5"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("m,eps_m"));
    assert_eq!(csv.lines().count(), 6);

    let sys = data("fullshift.toml");
    let v = json(&chaindyn(
        tmp.path(),
        &["classify", "--system", &sys, "--x", "110(1)", "--y", "001(1)", "--horizon", "40", "--relate", "1/2,1/4"],
    ));
    assert_eq!(v["labels"], serde_json::json!(["ProximalEvidence"]));
    assert!(v["relation"]["inconclusive"].is_string());

    let v = json(&chaindyn(tmp.path(), &["classify", "--system", &sys, "--x", "1(0)", "--y", "(0)", "--horizon", "20", "--extract"]));
    assert!(v["extraction"]["refused"].is_string());

    let v = json(&chaindyn(tmp.path(), &["thick", "--bits", &data("bits.txt")]));
    assert_eq!(v["max_run"], 5);
    assert_eq!(v["max_run_start"], 10);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(chaindyn(tmp.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(chaindyn(tmp.path(), &["decompose", "--bogus"]).status.code(), Some(2));
    let sys = data("doubling.toml");
    assert_eq!(chaindyn(tmp.path(), &["decompose", "--system", &sys]).status.code(), Some(1));
    assert_eq!(chaindyn(tmp.path(), &["decompose", "--system", "/no/such.toml", "--boxes", "4"]).status.code(), Some(1));
    let bad = chaindyn(tmp.path(), &["relate", "--system", &sys, "--x", "2", "--y", "0", "--schedule", "1/8"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(chaindyn(tmp.path(), &["--version"]).status.code(), Some(0));
}

#[test]
fn store_hashes_and_replays() {
    let tmp = tempfile::tempdir().unwrap();
    let store = tmp.path().join("store");
    let sys = data("doubling.toml");
    let run = |delta: &str| chaindyn(&store, &["decompose", "--system", &sys, "--boxes", "16", "--delta", delta, "--store"]);
    let (a, b, c) = (run("1/16"), run("1/16"), run("1/8"));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stored_key(&a), stored_key(&b));
    assert_ne!(stored_key(&a), stored_key(&c));

    let key = stored_key(&a);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(store.join(&key).join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["resolution"]["delta"], "1/16");
    assert!(manifest["system_hash"].is_string());

    let replay = json(&chaindyn(&store, &["replay", &key]));
    assert_eq!(replay["identical"], true);
    assert_eq!(replay["differences"], serde_json::json!([]));

    let out: PathBuf = store.join(&key).join("outputs/decomposition.json");
    std::fs::write(&out, "{}\n").unwrap();
    let tampered = chaindyn(&store, &["replay", &key]);
    assert_eq!(tampered.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&tampered.stderr).contains("integrity"));
    assert_eq!(chaindyn(&store, &["replay", "0000"]).status.code(), Some(1));
}
