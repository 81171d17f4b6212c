use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn copossible(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copossible"))
        .args(args)
        .env_remove("COPOSSIBLE_REPORT_DIR")
        .output()
        .expect("binary runs")
}

fn json_run(task: &str, name: &str) -> (i32, Value) {
    let path = fixture(name);
    let out = copossible(&[task, "--input", path.to_str().unwrap()]);
    let report = serde_json::from_slice(&out.stdout).expect("json report on stdout");
    (out.status.code().expect("exit code"), report)
}

#[test]
fn decided_requests_exit_zero() {
    for (task, name) in [
        ("decide", "finset_disjoint.json"),
        ("decide", "finset_overlap.json"),
        ("decide", "finvect_lines.json"),
        ("decide", "pregeom_uniform.json"),
        ("decide", "bool_pair.json"),
        ("decide", "oml_mo2.json"),
        ("decide", "opalg_tensor_factors.json"),
        ("compat", "finvect_lines.json"),
        ("tensor", "opalg_tensor_factors.json"),
        ("adjudicate", "bool_split.json"),
        ("audit", "site_two_factor.json"),
        ("enumerate", "pregeom_uniform.json"),
    ] {
        let (code, report) = json_run(task, name);
        assert_eq!(code, 0, "{task} {name}: {report}");
        assert_eq!(report["outcome"], "decided", "{task} {name}");
        assert_eq!(report["task"], task);
    }
}

#[test]
fn verdicts_match_the_oracles() {
    let (_, disjoint) = json_run("decide", "finset_disjoint.json");
    assert_eq!(disjoint["result"]["oracle"], true);
    assert_eq!(disjoint["result"]["verdict"]["decision"]["outcome"], "independent");

    let (_, overlap) = json_run("decide", "finset_overlap.json");
    assert_eq!(overlap["result"]["oracle"], false);
    assert_ne!(overlap["result"]["verdict"]["decision"]["outcome"], "independent");

    let (_, listing) = json_run("enumerate", "finvect_lines.json");
    let summary = listing["summary"][0].as_str().unwrap();
    assert!(summary.contains("0 differ from the oracle"), "{summary}");
}

#[test]
fn site_audits_distinguish_the_assignments() {
    let (_, good) = json_run("audit", "site_two_factor.json");
    let text = good["summary"].to_string();
    assert!(text.contains("einstein causality: Pass"), "{text}");
    assert!(text.contains("span 16 of 16"), "{text}");

    let (code, bad) = json_run("audit", "site_same_image.json");
    assert_eq!(code, 0);
    assert!(bad["summary"].to_string().contains("einstein causality: Fail"));
}

#[test]
fn exhausted_feasibility_search_exits_two() {
    let (code, report) = json_run("decide", "opalg_no_iterations.json");
    assert_eq!(code, 2);
    assert_eq!(report["outcome"], "open");
}

#[test]
fn invalid_requests_exit_one_with_an_error_report() {
    let (code, report) = json_run("decide", "oml_not_orthomodular.json");
    assert_eq!(code, 1);
    assert_eq!(report["outcome"], "error");
    assert!(report["error"].as_str().unwrap().contains("orthomodular law fails"));

    // the request names a different task than the subcommand
    let (code, report) = json_run("decide", "bool_split.json");
    assert_eq!(code, 1);
    assert_eq!(report["outcome"], "error");

    let out = copossible(&["decide", "--input", fixture("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn reports_can_be_written_as_text_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.txt");
    let out = copossible(&[
        "decide",
        "--input",
        fixture("finset_disjoint.json").to_str().unwrap(),
        "--report",
        "text",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("copossible "), "{text}");
    assert!(text.contains("outcome: decided"));
}

#[test]
fn report_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_copossible"))
        .args(["compat", "--input", fixture("oml_mo2.json").to_str().unwrap()])
        .env("COPOSSIBLE_REPORT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("compat.json")).unwrap()).unwrap();
    assert_eq!(report["kind"], "oml");
}

#[test]
fn stdin_input_with_a_starved_budget_is_open() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_copossible"))
        .args(["decide", "--input", "-"])
        .env_remove("COPOSSIBLE_REPORT_DIR")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let request = r#"{"kind": "finvect", "budget": {"max_pairs": 4},
        "payload": {"p": 2, "dim": 3, "a": [[1, 0, 0]], "b": [[0, 1, 0], [0, 0, 1]]}}"#;
    child.stdin.take().unwrap().write_all(request.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(2), "{report}");
    assert_eq!(report["outcome"], "open");
}

#[test]
fn budget_flag_overrides_the_request() {
    // 512 x 2 endomorphism pairs span four chunks; a single check runs out after the first
    let request = r#"{"kind": "finvect",
        "payload": {"p": 2, "dim": 4, "a": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], "b": [[0, 0, 0, 1]]}}"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("req.json");
    std::fs::write(&path, request).unwrap();
    let out = copossible(&["decide", "--input", path.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = copossible(&["decide", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn suite_subset_is_reproducible_across_thread_counts() {
    let run = |jobs: &str| {
        copossible(&["suite", "--claim", "tensor-regularity", "--claim", "site-audit", "--jobs", jobs])
    };
    let (one, four) = (run("1"), run("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let report: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(report["result"]["claims"].as_array().unwrap().len(), 2);
}

#[test]
fn unknown_claim_is_an_error() {
    let out = copossible(&["suite", "--claim", "no-such-claim"]);
    assert_eq!(out.status.code(), Some(1));
}
