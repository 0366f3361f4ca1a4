use std::io::Write;
use std::process::Command;

use serde_json::{json, Value};

const MOVIES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/movies.kb");
const CLASH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/clash.kb");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn lealc(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_lealc")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn kb_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn check_reports_consistency_and_stats() {
    let r = lealc(&["check", MOVIES]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["command"], "check");
    assert_eq!(v["consistent"], true);
    assert!(v["stats"]["steps"].as_u64().unwrap() > 0);
    assert!(v.get("certificate").is_none());
}

#[test]
fn check_on_clash_exits_one_with_certificate() {
    let r = lealc(&["check", CLASH]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["consistent"], false);
    let ids: Vec<&str> = v["certificate"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["rule_id"].as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), 3);
    assert_eq!(ids[0], "create");
}

#[test]
fn ask_answers_in_flag_order() {
    let r = lealc(&[
        "ask",
        MOVIES,
        "--list-related",
        "m3",
        "I",
        "--member",
        "m4",
        ":",
        "IM",
        "--rel",
        "m1",
        "I",
        "f3",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let answers: Vec<Value> = r.json()["answers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["answer"].clone())
        .collect();
    assert_eq!(answers, [json!(["f4", "f6"]), json!(true), json!(true)]);
}

#[test]
fn ask_reports_bad_queries_in_place() {
    let r = lealc(&["ask", MOVIES, "--rel", "m1", "I", "nobody", "--rel", "m1", "I", "f3"]);
    assert_eq!(r.code, 2);
    let v = r.json();
    assert_eq!(v["answers"][0]["error"]["kind"], "unknown-name");
    assert_eq!(v["answers"][1]["answer"], true);
}

#[test]
fn ask_on_inconsistent_kb_fails() {
    let r = lealc(&["ask", CLASH, "--rel", "b", "I", "b"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["error"]["kind"], "inconsistent");
}

#[test]
fn batch_file_queries() {
    let q = kb_file("rel m3 I f4\nlist-related m3 I\n");
    let r = lealc(&["ask", MOVIES, "--batch", q.path().to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["answers"][0]["answer"], true);
    assert_eq!(v["answers"][1]["answer"], json!(["f4", "f6"]));
}

#[test]
fn text_format() {
    let r = lealc(&["--format", "text", "ask", MOVIES, "--rel", "m1", "I", "f3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.trim_end().ends_with("\tyes"), "{}", r.stdout);
}

#[test]
fn parse_errors_carry_positions() {
    let f = kb_file("obj b.\nb : box3 D.\n");
    let r = lealc(&["check", f.path().to_str().unwrap()]);
    assert_eq!(r.code, 2);
    let e = &r.json()["error"];
    assert_eq!(e["kind"], "parse");
    assert_eq!((e["line"].as_u64(), e["col"].as_u64()), (Some(2), Some(5)));
    assert!(!r.stderr.is_empty());
}

#[test]
fn usage_and_io_errors_are_json() {
    for args in [&[][..], &["check"][..], &["check", "/nonexistent/kb"][..]] {
        let r = lealc(args);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(
            r.json()["error"]["message"].as_str().is_some_and(|m| !m.is_empty()),
            "{args:?}"
        );
    }
}

#[test]
fn step_budget_is_a_resource_error() {
    let r = lealc(&["--max-steps", "1", "check", MOVIES]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json()["error"]["kind"], "resource");
}

#[test]
fn model_export() {
    let v = lealc(&["model", MOVIES]).json();
    let objects: Vec<&str> = v["objects"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o.as_str().unwrap())
        .collect();
    assert!(objects.contains(&"m3") && objects.contains(&"a⊤"));
    assert_eq!(v["diamond"]["2"]["f3"], json!(["m3"]));
    let csv = lealc(&["model", "--csv", MOVIES]).stdout;
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with(',') && header.contains("x⊥"));
    assert_eq!(lealc(&["model", CLASH]).code, 1);
}

#[test]
fn trace_is_ndjson() {
    let r = lealc(&["trace", MOVIES]);
    assert_eq!(r.code, 0);
    let steps: Vec<Value> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!steps.is_empty());
    assert!(steps.iter().enumerate().all(|(i, s)| s["step"] == i));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["check", MOVIES][..],
        &["model", MOVIES][..],
        &["ask", MOVIES, "--dif", "m2", "m4", "--trace"][..],
    ] {
        assert_eq!(lealc(args).stdout, lealc(args).stdout, "{args:?}");
    }
}
