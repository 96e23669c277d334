use std::process::{Command, Output};

use serde_json::Value;

fn pplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pplab"))
        .args(args)
        .env_remove("PPLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_theorem_passes() {
    let o = pplab(&[
        "verify-theorem",
        "--N",
        "1",
        "--n",
        "3",
        "--k",
        "1",
        "--trials",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equivariance 100/100"));
}

#[test]
fn verify_corollary_reports_splitting() {
    let o = pplab(&["verify-corollary", "--N", "2", "--n", "2", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("splitting {1,1,1} ✓"));
}

#[test]
fn usage_errors_exit_2() {
    let o = pplab(&["verify-theorem", "--N", "1", "--n", "2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("k < n"));
    assert_eq!(pplab(&["sweep", "--N", "2..1"]).status.code(), Some(2));
    assert_eq!(pplab(&["sweep", "--n", "1"]).status.code(), Some(2));
    assert_eq!(
        pplab(&["dims", "--N", "0", "--n", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(pplab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        pplab(&["export-transition", "--N", "1", "--n", "2..3", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_report_shape() {
    let o = pplab(&[
        "sweep", "--N", "1..2", "--n", "2..4", "--trials", "10", "--output", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["overall_pass"], true);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 12);
    let triples: Vec<(u64, u64, u64)> = results
        .iter()
        .map(|r| {
            (
                r["N"].as_u64().unwrap(),
                r["n"].as_u64().unwrap(),
                r["k"].as_u64().unwrap(),
            )
        })
        .collect();
    let mut sorted = triples.clone();
    sorted.sort();
    assert_eq!(triples, sorted);
    assert!(results.iter().all(|r| r.get("matrices").is_none()));
    assert_eq!(
        results[0]["splitting"]["observed"],
        serde_json::json!([1, 1])
    );
}

#[test]
fn verbose_includes_matrices() {
    let o = pplab(&[
        "verify-theorem",
        "--N",
        "1",
        "--n",
        "2",
        "--trials",
        "3",
        "--output",
        "json",
        "--verbose",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["results"][0]["matrices"]["phi"],
        serde_json::json!([["2", "0", "0"], ["0", "1", "0"]])
    );
}

#[test]
fn seed_env_overrides_flag() {
    let o = Command::new(env!("CARGO_BIN_EXE_pplab"))
        .args([
            "verify-theorem",
            "--N",
            "1",
            "--n",
            "2",
            "--trials",
            "2",
            "--seed",
            "5",
            "--output",
            "json",
        ])
        .env("PPLAB_SEED", "-41")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["seed"], -41);
}

#[test]
fn out_path_and_export_transition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let o = pplab(&[
        "export-transition",
        "--N",
        "1",
        "--n",
        "2",
        "--k",
        "1",
        "--output",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["variable"], "t");
    assert_eq!(
        v["entries"],
        serde_json::json!([[[2, "1/1"]], [], [[1, "2/1"]], [[0, "-1/1"]]])
    );
}

#[test]
fn repeated_runs_are_identical_apart_from_timing() {
    let args = [
        "sweep", "--N", "1", "--n", "2..3", "--trials", "20", "--seed", "9", "--output", "json",
    ];
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(strip(pplab(&args)), strip(pplab(&args)));
}
