use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn evcoder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evcoder")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn built_config(dir: &Path) -> PathBuf {
    let kb = dir.join("kb");
    let gaz = dir.join("gaz");
    let o = evcoder(&["build-index", "--input", s(&fixture("kb.jsonl")), "--output", s(&kb)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"articles\": 50"));
    let o = evcoder(&["ingest-gazetteer", "--input", s(&fixture("gazetteer.tsv")), "--output", s(&gaz)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "entity_index = \"kb\"\ngazetteer = \"gaz\"\nbatch_size = 10\n").unwrap();
    cfg
}

#[test]
fn code_then_resume_matches_a_clean_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = built_config(dir.path());
    let out = dir.path().join("events.jsonl");
    let corpus = fixture("corpus.jsonl");
    let o = evcoder(&["--config", s(&cfg), "code", "--input", s(&corpus), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let full = std::fs::read(&out).unwrap();
    assert!(!full.is_empty());
    assert!(!dir.path().join("events.jsonl.ckpt.json").exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("events.jsonl.report.json")).unwrap()).unwrap();
    assert_eq!(report["documents"], 100);

    // a run over the first batch alone yields the bytes and report a crash
    // after that batch would have left behind
    let ten = dir.path().join("ten.jsonl");
    let o = evcoder(&["--config", s(&cfg), "code", "--input", s(&first_ten(dir.path(), &corpus)), "--output", s(&ten)]);
    assert!(o.status.success());
    let head = std::fs::read(&ten).unwrap();
    assert!(full.starts_with(&head));
    let mut partial = head.clone();
    partial.extend_from_slice(b"{\"doc_id\":\"trunc");
    std::fs::write(&out, partial).unwrap();
    let ckpt = serde_json::json!({
        "docs_done": 10,
        "bytes_written": head.len(),
        "report": serde_json::from_str::<serde_json::Value>(
            &std::fs::read_to_string(dir.path().join("ten.jsonl.report.json")).unwrap()
        ).unwrap(),
    });
    std::fs::write(dir.path().join("events.jsonl.ckpt.json"), ckpt.to_string()).unwrap();

    let o = evcoder(&["--config", s(&cfg), "code", "--input", s(&corpus), "--output", s(&out), "--resume"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&out).unwrap(), full);
    let resumed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("events.jsonl.report.json")).unwrap()).unwrap();
    assert_eq!(resumed["resumed_from"], 10);
    assert_eq!(resumed["records"], report["records"]);
}

fn first_ten(dir: &Path, corpus: &Path) -> PathBuf {
    let p = dir.join("ten_docs.jsonl");
    let body: String = std::fs::read_to_string(corpus).unwrap().lines().take(10).map(|l| format!("{l}\n")).collect();
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn evaluate_and_sorted_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("events.jsonl");
    let o = evcoder(&["code", "--input", s(&fixture("corpus.jsonl")), "--output", s(&out), "--sort-by-doc-id"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let ids: Vec<String> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["doc_id"].as_str().unwrap().to_string())
        .collect();
    assert!(!ids.is_empty());
    assert!(ids.windows(2).all(|w| w[0] <= w[1]));

    let o = evcoder(&["evaluate", "--predicted", s(&out), "--gold", s(&out), "--task", "category"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("1.0"), "{text}");
}

#[test]
fn calibrate_from_scores_and_documents() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("scores.tsv");
    let body: String = std::fs::read_to_string(fixture("calibration_scores.txt"))
        .unwrap()
        .lines()
        .map(|l| format!("PROTEST\t{l}\n"))
        .chain(["RIOT\t0.7\n".to_string()])
        .collect();
    std::fs::write(&scores, body).unwrap();
    let out = dir.path().join("cal.toml");
    let o = evcoder(&["calibrate", "--scores", s(&scores), "--output", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let toml = std::fs::read_to_string(&out).unwrap();
    assert!(toml.contains("PROTEST"), "{toml}");
    assert!(toml.contains("0.9"), "{toml}");

    let o = evcoder(&[
        "calibrate", "--input", s(&fixture("corpus.jsonl")), "--min-sample", "5", "--output", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&out).unwrap().contains("PROTEST"));
}

#[test]
fn annotation_batch_lists_requested_documents() {
    let o = evcoder(&[
        "select-annotation-batch", "--input", s(&fixture("corpus.jsonl")), "--label", "PROTEST", "-n", "5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("doc-") && l.contains('\t')));

    let o = evcoder(&["select-annotation-batch", "--input", s(&fixture("corpus.jsonl")), "--label", "NOPE"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_inputs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.jsonl");
    let o = evcoder(&["code", "--input", "/no/such/file", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "workers = 0\n").unwrap();
    let o = evcoder(&["--config", s(&cfg), "code", "--input", s(&fixture("corpus.jsonl")), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("workers"));
    let o = evcoder(&["code", "--input", s(&fixture("corpus.jsonl")), "--output", s(&out), "--resume"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unreachable_model_server_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("remote.toml");
    std::fs::write(
        &cfg,
        "max_retries = 1\nretry_backoff_ms = 1\n[backends.categories]\nkind = \"service\"\nurl = \"http://127.0.0.1:9\"\n",
    )
    .unwrap();
    let out = dir.path().join("o.jsonl");
    let o = evcoder(&["--config", s(&cfg), "code", "--input", s(&fixture("corpus.jsonl")), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}
