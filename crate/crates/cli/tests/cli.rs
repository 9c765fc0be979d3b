use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hamtsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamtsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_theta() {
    let out = hamtsp(&["solve", data("theta.edges").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("tour: 0 2 1 3"), "{text}");
    assert!(text.contains("weight: 4"), "{text}");
}

#[test]
fn solve_json_has_trace() {
    let out = hamtsp(&["solve", data("k4.edges").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "ok");
    assert!(v["weight"].as_i64().unwrap() >= 14);
    assert!(v["trace"].as_array().is_some());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| hamtsp(args).status.code();
    assert_eq!(code(&["solve", data("petersen.edges").to_str().unwrap()]), Some(3));
    assert_eq!(code(&["oracle", data("petersen.edges").to_str().unwrap()]), Some(3));
    assert_eq!(code(&["solve", data("malformed.edges").to_str().unwrap()]), Some(2));
    assert_eq!(code(&["solve", data("disconnected.edges").to_str().unwrap()]), Some(2));
    assert_eq!(code(&["solve", "/nonexistent/graph.edges"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["solve"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn oracle_k4() {
    let out = hamtsp(&["oracle", data("k4.edges").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("weight: 14"), "{text}");
    assert!(text.contains("distinct tours: 3"), "{text}");
}

#[test]
fn compare_records() {
    let out = hamtsp(&["compare", data("triangle.edges").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(v["algo_weight"], 6);
    assert_eq!(v["opt_weight"], 6);

    let k4 = hamtsp(&["compare", data("k4.edges").to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&k4.stdout).unwrap();
    assert_eq!(v["opt_weight"], 14);
    assert_eq!(v["match"], serde_json::json!(v["algo_weight"] == 14));

    let pet = hamtsp(&["compare", data("petersen.edges").to_str().unwrap(), "--json"]);
    assert_eq!(pet.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&pet.stdout).unwrap();
    assert_eq!(v["status"], "not_hamiltonian_input");
    assert!(v["match"].is_null());
}

fn mine_into(dir: &std::path::Path, seed: &str, extra: &[&str]) -> Output {
    let report = dir.join("report.jsonl");
    let mut args = vec![
        "mine",
        "--count",
        "10",
        "--n-min",
        "6",
        "--n-max",
        "6",
        "--edge-prob",
        "0.6",
        "--seed",
        seed,
        "--report",
        report.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    hamtsp(&args)
}

#[test]
fn mine_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(mine_into(a.path(), "7", &[]).status.code(), Some(0));
    assert_eq!(mine_into(b.path(), "7", &[]).status.code(), Some(0));
    let ra = std::fs::read_to_string(a.path().join("report.jsonl")).unwrap();
    let rb = std::fs::read_to_string(b.path().join("report.jsonl")).unwrap();
    assert!(ra == rb, "reports differ");
    let text = ra;
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["kind"], "summary");
}

#[test]
fn mine_counterexamples_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = mine_into(dir.path(), "11", &["--weights", "uniform:1:50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("report.jsonl")).unwrap();
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .filter(|v: &serde_json::Value| v.get("kind").is_none())
        .collect();
    let mut replayed = 0;
    for rec in &records {
        let id = rec["instance_id"].as_str().unwrap();
        let dumped = dir.path().join(format!("{id}.edges"));
        let is_counterexample = rec["match"] == false || rec["status"] == "stuck" || rec["status"] == "no_solution";
        assert_eq!(dumped.exists(), is_counterexample, "{id}");
        if !is_counterexample {
            continue;
        }
        let replay = hamtsp(&["compare", dumped.to_str().unwrap(), "--json"]);
        let v: serde_json::Value = serde_json::from_slice(&replay.stdout).unwrap();
        for key in ["status", "algo_weight", "opt_weight", "match", "deletions", "candidates_tested"] {
            assert_eq!(v[key], rec[key], "{id} {key}");
        }
        replayed += 1;
    }
    // This seed is known to produce counterexamples.
    assert!(replayed > 0);
}

#[test]
fn mine_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let r = report.to_str().unwrap();
    let code = |args: &[&str]| hamtsp(args).status.code();
    assert_eq!(code(&["mine", "--count", "0", "--n-min", "5", "--n-max", "6", "--report", r]), Some(1));
    assert_eq!(code(&["mine", "--count", "3", "--n-min", "5", "--n-max", "13", "--report", r]), Some(1));
    assert_eq!(
        code(&["mine", "--count", "3", "--n-min", "5", "--n-max", "6", "--weights", "gauss", "--report", r]),
        Some(1)
    );
    assert_eq!(
        code(&["mine", "--count", "3", "--n-min", "5", "--n-max", "6", "--edge-prob", "1.5", "--report", r]),
        Some(1)
    );
}
