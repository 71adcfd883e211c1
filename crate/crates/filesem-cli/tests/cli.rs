//! Black-box checks of the installed binary: exit codes, stream selection,
//! JSON mirroring, and byte-for-byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("filesem")
        .join("corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filesem"))
        .args(args)
        .output()
        .expect("spawning the binary")
}

fn path_arg(rel: &str) -> String {
    corpus().join(rel).to_string_lossy().into_owned()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_true_formula_exits_zero() {
    let out = run(&[
        "eval",
        "--model",
        &path_arg("models/hotel.model"),
        "--formula",
        &path_arg("formulas/hotel_open.fml"),
        "--against",
        "m2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).starts_with("verdict: true"));
}

#[test]
fn eval_false_formula_exits_one() {
    let out = run(&[
        "eval",
        "--model",
        &path_arg("models/hotel.model"),
        "--formula",
        &path_arg("formulas/hotel_open.fml"),
        "--against",
        "m1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).starts_with("verdict: false"));
}

#[test]
fn eval_presupposition_failure_exits_two() {
    let out = run(&[
        "eval",
        "--model",
        &path_arg("models/hotel.model"),
        "--discourse",
        &path_arg("boxes/memo_unfamiliar.box"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout_of(&out);
    assert!(text.starts_with("verdict: presup-failure"));
    assert!(text.contains("kind: dref-domain"));
}

#[test]
fn missing_model_reports_on_stderr_and_exits_three() {
    let out = run(&[
        "eval",
        "--model",
        &path_arg("models/no_such.model"),
        "--formula",
        &path_arg("formulas/hotel_open.fml"),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr.clone()).unwrap().starts_with("error:"));
}

#[test]
fn eval_json_mirrors_the_verdict() {
    let out = run(&[
        "eval",
        "--model",
        &path_arg("models/hotel.model"),
        "--formula",
        &path_arg("formulas/hotel_settled.fml"),
        "--against",
        "m1",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["verdict"], "true");
}

#[test]
fn readings_reports_every_candidate() {
    let out = run(&[
        "readings",
        "--model",
        &path_arg("models/team.model"),
        "--skeleton",
        &path_arg("skeletons/team_unspecified.skel"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("narrow/p1/agreement,p2 => SURVIVES"));
    assert!(text.trim_end().ends_with("scopes: wide narrow"));

    let json = run(&[
        "readings",
        "--model",
        &path_arg("models/team.model"),
        "--skeleton",
        &path_arg("skeletons/team_unspecified.skel"),
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(v["lines"].as_array().unwrap().len(), 4);
    assert_eq!(v["scopes"], serde_json::json!(["wide", "narrow"]));
}

#[test]
fn shipped_scenarios_all_pass() {
    let out = run(&["scenarios", "--corpus", &path_arg("")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("26 scenarios, 26 ok, 0 failed"), "{text}");
}

#[test]
fn oracle_agrees_and_is_deterministic() {
    let args = [
        "oracle",
        "--seed",
        "17",
        "--cases",
        "60",
        "--skeletons",
        "4",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout_of(&first);
    assert!(text.starts_with("seed: 17"));
    assert!(text.trim_end().ends_with("agreement: total"));

    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);

    let json = run(&[
        "oracle",
        "--seed",
        "17",
        "--cases",
        "60",
        "--skeletons",
        "4",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    assert_eq!(v["agreement"], "total");
}
