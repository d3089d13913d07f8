use std::process::{Command, Output};

use serde_json::Value;

fn faultdiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faultdiag"))
        .args(args)
        .env_remove("FAULTDIAG_OUT_DIR")
        .output()
        .unwrap()
}

#[test]
fn simulate_knights_with_always_no() {
    let out = faultdiag(&[
        "simulate",
        "--world",
        "KNV",
        "--algorithm",
        "find_all_knights",
        "--strategy",
        "always_no",
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["knights"], serde_json::json!([0]));
    assert_eq!(doc["questions"], 4);
    assert_eq!(doc["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_rejects_bad_world_with_usage_code() {
    let out = faultdiag(&["simulate", "--world", "KQ", "--algorithm", "line_scan"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 1"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        faultdiag(&["simulate", "--world", "KV", "--algorithm", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        faultdiag(&["simulate", "--world", "KV"]).status.code(),
        Some(2)
    );
    assert_eq!(faultdiag(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        faultdiag(&[
            "simulate",
            "--world",
            "KVN",
            "--algorithm",
            "line_scan",
            "--strategy",
            "scripted"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        faultdiag(&[
            "simulate",
            "--world",
            "KVN",
            "--algorithm",
            "identify_normals",
            "--budget",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        faultdiag(&["verify", "--n-max", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        faultdiag(&[
            "sweep",
            "--n-from",
            "5",
            "--n-to",
            "2",
            "--algorithm",
            "line_scan"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn exhausted_script_is_a_runtime_failure() {
    let out = faultdiag(&[
        "simulate",
        "--world",
        "NNKKV",
        "--algorithm",
        "find_all_knights",
        "--strategy",
        "scripted",
        "--script",
        "no",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exhausted"));
}

#[test]
fn normal_majority_warns_but_runs() {
    let out = faultdiag(&[
        "simulate",
        "--world",
        "NNK",
        "--algorithm",
        "find_reliable_pairing",
        "--strategy",
        "always_yes",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn sweep_produces_one_row_per_trial() {
    let out = faultdiag(&[
        "sweep",
        "--n-from",
        "2",
        "--n-to",
        "20",
        "--algorithm",
        "find_reliable_pairing",
        "--trials",
        "100",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,algorithm,seed,questions,bound,within_bound,majority_ok,result"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1900);
    assert!(rows.iter().all(|r| r[5] == "true" && r[6] == "true"));
}

#[test]
fn sweep_is_reproducible() {
    let args = [
        "sweep",
        "--n-from",
        "3",
        "--n-to",
        "9",
        "--algorithm",
        "identify_normals",
        "--trials",
        "30",
        "--seed",
        "11",
    ];
    assert_eq!(faultdiag(&args).stdout, faultdiag(&args).stdout);
}

#[test]
fn single_processor_sweep_asks_nothing() {
    let out = faultdiag(&[
        "sweep",
        "--n-from",
        "1",
        "--n-to",
        "1",
        "--algorithm",
        "line_scan",
        "--trials",
        "1",
        "--seed",
        "5",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert_eq!(row[3], "0");
    assert!(row[2].parse::<u64>().is_ok());
}

#[test]
fn out_dir_env_var_is_the_default_destination() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_faultdiag"))
        .args(["simulate", "--world", "KVN", "--algorithm", "line_scan"])
        .env("FAULTDIAG_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let written = dir.path().join("simulate-line_scan-KVN.json");
    let doc: Value = serde_json::from_slice(&std::fs::read(written).unwrap()).unwrap();
    assert_eq!(doc["world"], "KVN");
}

#[test]
fn scenario_file_drives_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(
        &path,
        r#"{"world":"NKV","algorithm":"identify_normals","strategy":"scripted","script":["yes","no","yes"],"normal_budget":1}"#,
    )
    .unwrap();
    let out = faultdiag(&["simulate", "--config", path.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["normals"], serde_json::json!([0]));
    assert!(doc["questions"].as_u64().unwrap() <= 4);

    std::fs::write(
        &path,
        r#"{"world":"NKV","algorithm":"magic","strategy":"always_no"}"#,
    )
    .unwrap();
    assert_eq!(
        faultdiag(&["simulate", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn trace_prints_each_question() {
    let out = faultdiag(&["trace", "--world", "KKNK", "--algorithm", "line_scan"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with('#')).count(), 3);
    assert!(text.contains("P1 (knight)"));
    assert!(text.contains("within bound"));
}

#[test]
fn verify_small_report() {
    let out = faultdiag(&["verify", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["worlds_checked"], 26);
    assert_eq!(report["per_size"][2]["worlds"], 20);
    assert_eq!(report["failures"], serde_json::json!([]));
}
