use std::path::{Path, PathBuf};
use std::process::Command;

use fsr_cli::{body_hash, WitnessFile};
use serde_json::{json, Value};

fn spec(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(format!("{name}.json")).display().to_string()
}

fn fsr(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fsr")).args(args).output().expect("run fsr");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

/// In-process run, for cases that do not need a real exit status.
fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("fsr").chain(args.iter().copied());
    let code = fsr_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Writes `v` back with a body hash that matches its (possibly edited) body.
fn write_rehashed(path: &Path, mut v: Value) {
    let file: WitnessFile = serde_json::from_value(v.clone()).unwrap();
    v["header"]["body_sha256"] = json!(body_hash(&file.body));
    std::fs::write(path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn out_path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn fan_type_b_with_five_leaves_round_trips() {
    let dir = tmp();
    let w = out_path(&dir, "w.json");
    let (code, _, err) = fsr(&["detect", "--spec", &spec("fan"), "--pattern", "type_b", "--leaves", "5", "-o", w.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v = read(&w);
    assert_eq!(v["body"]["kind"], "forbidden");
    assert_eq!(v["body"]["witness"]["pattern"], "type_b");
    assert_eq!(v["body"]["witness"]["exactness"], "exact_for_family");
    assert_eq!(v["verified"], true);
    assert_eq!(fsr(&["verify", w.to_str().unwrap()]).0, 0);
}

#[test]
fn fan_coloring_has_no_monochromatic_pair() {
    let (code, _, err) = fsr(&["hindman", "--spec", &spec("fan"), "--coloring", "paper-fan", "--k", "2", "--horizon", "100"]);
    assert_eq!(code, 1, "{err}");
    assert!(err.starts_with("negative"), "{err}");
}

#[test]
fn naturals_one_two_three_is_not_proper() {
    let (code, out, _) = run(&["proper", "--spec", &spec("naturals"), "--prefix", "1,2,3"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["body"]["result"], json!({ "status": "violation", "first": [1, 2], "second": [3] }));
}

#[test]
fn inline_specs_are_accepted() {
    let (code, out, err) = run(&["fs", "--spec", r#"{"family": "nat_mod_k", "params": {"k": 4}}"#, "--prefix", "1,1"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["body"]["kind"], "finite_sums");
}

#[test]
fn tampered_sum_names_the_identity() {
    let dir = tmp();
    let w = out_path(&dir, "c.json");
    assert_eq!(run(&["detect", "--spec", &spec("type_c"), "--pattern", "type_c", "-o", w.to_str().unwrap()]).0, 0);
    assert_eq!(fsr(&["verify", w.to_str().unwrap()]).0, 0);

    let mut v = read(&w);
    let lhs = v["body"]["witness"]["identities"][1]["lhs"].as_str().unwrap().to_string();
    v["body"]["witness"]["identities"][1]["value"] = json!([1, 1]);
    // a stale hash is caught before replay
    std::fs::write(&w, serde_json::to_string(&v).unwrap()).unwrap();
    let (code, _, err) = fsr(&["verify", w.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("body_sha256"), "{err}");
    // with a matching hash the replay itself fails on that identity
    write_rehashed(&w, v);
    let (code, _, err) = fsr(&["verify", w.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains(&lhs), "{err} should name {lhs}");
}

#[test]
fn tampered_coloring_claim_fails() {
    let dir = tmp();
    let w = out_path(&dir, "h.json");
    let (code, _, err) = run(&["hindman", "--spec", &spec("naturals"), "--coloring", "mod:2", "--k", "2", "-o", w.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let mut v = read(&w);
    v["body"]["witness"]["color"] = json!(1 - v["body"]["witness"]["color"].as_u64().unwrap());
    write_rehashed(&w, v);
    assert_eq!(fsr(&["verify", w.to_str().unwrap()]).0, 1);
}

#[test]
fn malformed_files_exit_two() {
    let dir = tmp();
    let w = out_path(&dir, "t.json");
    assert_eq!(run(&["classify", "--spec", &spec("fan"), "--horizon", "50", "-o", w.to_str().unwrap()]).0, 0);
    let text = std::fs::read_to_string(&w).unwrap();
    std::fs::write(&w, &text[..text.len() / 2]).unwrap();
    assert_eq!(fsr(&["verify", w.to_str().unwrap()]).0, 2);
    assert_eq!(fsr(&["verify", out_path(&dir, "missing.json").to_str().unwrap()]).0, 2);
}

#[test]
fn usage_and_spec_errors_exit_two() {
    assert_eq!(fsr(&["no-such-verb"]).0, 2);
    assert_eq!(fsr(&["fs", "--spec", r#"{"family": "nope"}"#, "--prefix", "1"]).0, 2);
    assert_eq!(fsr(&["fs", "--spec", &spec("naturals"), "--prefix", "0"]).0, 2);
    assert_eq!(fsr(&["hindman", "--spec", &spec("naturals"), "--coloring", "stripes"]).0, 2);
    let (code, _, err) = fsr(&["fs", "--spec", "/nonexistent/spec.json", "--prefix", "1"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error["), "{err}");
}

#[test]
fn unmet_construction_preconditions_are_negatives() {
    // the fan has a nonempty tail intersection, so no proper subsequence is built
    let (code, _, err) = run(&["construct", "--spec", &spec("fan"), "--op", "tail-to-proper", "--skip", "1"]);
    assert_eq!(code, 1, "{err}");
    // the naturals are not a group
    assert_eq!(run(&["construct", "--spec", &spec("naturals"), "--op", "group-proper"]).0, 2);
}

#[test]
fn identical_arguments_give_identical_output() {
    let args = ["threshold", "--spec", &spec("naturals"), "--k", "2", "--colors", "2", "--max-n", "10"];
    let first = run(&args);
    assert_eq!(first.0, 0, "{}", first.2);
    assert_eq!(run(&args), first);
}

#[test]
fn enumerate_oracle_round_trips() {
    let dir = tmp();
    let w = out_path(&dir, "e.json");
    assert_eq!(run(&["enumerate-oracle", "--max-order", "3", "-o", w.to_str().unwrap()]).0, 0);
    assert_eq!(read(&w)["body"]["counts"], json!([1, 8, 113]));
    assert_eq!(fsr(&["verify", w.to_str().unwrap()]).0, 0);
}

#[test]
fn every_verb_round_trips_through_verify() {
    let dir = tmp();
    let cases: Vec<Vec<String>> = [
        vec!["fs", "--spec", &spec("naturals"), "--prefix", "1,2,4"],
        vec!["fs2", "--spec", &spec("fan"), "--prefix", "1,2,3"],
        vec!["disjoint-proper", "--spec", &spec("naturals"), "--prefix", "1,2,4,8"],
        vec!["tails", "--spec", &spec("nat_mod_5"), "--len", "64"],
        vec!["construct", "--spec", &spec("direct_sum_2"), "--op", "group-proper", "--k", "6"],
        vec!["construct", "--spec", &spec("fan"), "--op", "dichotomy", "--skip", "1"],
        vec!["construct", "--spec", &spec("left_zero"), "--op", "length-determined"],
        vec!["detect", "--spec", &spec("truncated_nat_10"), "--pattern", "type_a"],
        vec!["classify", "--spec", &spec("steinberg"), "--horizon", "60"],
        vec!["disjoint-families", "--spec", &spec("naturals"), "--coloring", "mod:2", "--horizon", "40"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for (i, args) in cases.iter().enumerate() {
        let w = out_path(&dir, &format!("{i}.json"));
        let mut argv: Vec<&str> = args.iter().map(String::as_str).collect();
        argv.extend(["-o", w.to_str().unwrap()]);
        let (code, _, err) = run(&argv);
        assert!(code <= 1, "{args:?}: {err}");
        // negatives are recorded too, and their claims hold
        let (vcode, _, verr) = run(&["verify", w.to_str().unwrap()]);
        assert_eq!(vcode, 0, "{args:?}: {verr}");
    }
}
