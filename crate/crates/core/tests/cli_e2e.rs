//! End-to-end CLI contract: determinism, exit-code semantics, and
//! CSV/JSON value agreement, exercised through the real binary.

use std::collections::BTreeMap;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dedekind-cluster"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "expected success for {args:?}");
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("no signal")
}

fn csv_rows(text: &str) -> Vec<BTreeMap<String, String>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    lines
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), header.len(), "ragged CSV row: {line}");
            header.iter().map(|h| h.to_string()).zip(cells.iter().map(|c| c.to_string())).collect()
        })
        .collect()
}

fn json_rows(text: &str) -> Vec<BTreeMap<String, String>> {
    let value: serde_json::Value = serde_json::from_str(text).expect("valid JSON");
    value["rows"]
        .as_array()
        .expect("rows array")
        .iter()
        .map(|row| {
            row.as_object()
                .unwrap()
                .iter()
                .map(|(k, v)| (k.clone(), v.as_str().unwrap().to_string()))
                .collect()
        })
        .collect()
}

#[test]
fn byte_identical_reruns() {
    for args in [
        vec!["expand", "--b", "3", "--j", "5", "--format", "csv"],
        vec!["trace", "--b", "4", "--max-k", "20", "--format", "json"],
        vec!["sum", "--b", "3", "--k", "9", "--format", "text"],
        vec!["cluster", "--b", "3", "--i", "0", "--r", "2", "--nhat-max", "256", "--format", "csv"],
        vec!["verify", "--b", "3", "--max-n", "32", "--format", "json"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "stdout differs for {args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn exit_code_semantics() {
    // 0: checks pass
    assert_eq!(exit_code(&["expand", "--b", "3", "--j", "1"]), 0);
    assert_eq!(exit_code(&["sum", "--m", "5", "--n", "11"]), 0);
    // 2: invalid input
    assert_eq!(exit_code(&["expand", "--b", "2", "--j", "3"]), 2);
    assert_eq!(exit_code(&["sum", "--m", "4", "--n", "10"]), 2);
    assert_eq!(exit_code(&["sum", "--m", "5"]), 2);
    assert_eq!(exit_code(&["cluster", "--b", "3", "--i", "0", "--r", "8", "--nhat-max", "64"]), 2);
    assert_eq!(exit_code(&["verify", "--b", "x", "--max-n", "16"]), 2);
    assert_eq!(exit_code(&["nonsense"]), 2);
    // 1: a mathematical check fails (injected fault)
    assert_eq!(
        exit_code(&["verify", "--b", "3", "--max-n", "16", "--corrupt", "11"]),
        1
    );
}

#[test]
fn csv_and_json_carry_identical_values() {
    for args in [
        vec!["expand", "--b", "5", "--j", "4"],
        vec!["trace", "--b", "3", "--max-k", "12"],
        vec!["sum", "--b", "4", "--k", "7"],
        vec!["cluster", "--b", "3", "--i", "1", "--r", "2", "--nhat-max", "128"],
        vec!["verify", "--b", "3..4", "--max-n", "16"],
    ] {
        let mut csv_args = args.clone();
        csv_args.extend(["--format", "csv"]);
        let mut json_args = args.clone();
        json_args.extend(["--format", "json"]);
        let from_csv = csv_rows(&stdout(&csv_args));
        let from_json = json_rows(&stdout(&json_args));
        assert_eq!(from_csv, from_json, "row mismatch for {args:?}");
    }
}

#[test]
fn expand_examples() {
    let csv = stdout(&["expand", "--b", "3", "--j", "3", "--format", "csv"]);
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[7]["k"], "8");
    assert_eq!(rows[7]["a_k"], "3");
    let csv = stdout(&["expand", "--b", "3", "--j", "1", "--format", "csv"]);
    let rows = csv_rows(&csv);
    assert_eq!((rows[0]["a_k"].as_str(), rows[1]["a_k"].as_str()), ("2", "5"));
}

#[test]
fn trace_example_rows() {
    let csv = stdout(&["trace", "--b", "3", "--max-k", "8", "--format", "csv"]);
    let rows = csv_rows(&csv);
    // contiguous k with no gaps
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["k"], i.to_string());
    }
    assert_eq!(rows[8]["L"], "-3");
    assert_eq!(rows[2]["S"], "-30/11");
    assert!(rows[2]["S_decimal"].starts_with("-2.7272"));
}

#[test]
fn sum_convergent_agreement_flag() {
    let csv = stdout(&["sum", "--b", "3", "--k", "10", "--format", "csv"]);
    let rows = csv_rows(&csv);
    assert_eq!(rows[0]["agree"], "true");
    assert_eq!(rows[0]["methods"], "bhk+reciprocity+naive");
    assert_eq!(rows[0]["n"], "72322");
    // deep convergent: defining sum out of reach, two methods remain
    let csv = stdout(&["sum", "--b", "3", "--k", "40", "--format", "csv"]);
    let rows = csv_rows(&csv);
    assert_eq!(rows[0]["methods"], "bhk+reciprocity");
    assert_eq!(rows[0]["agree"], "true");
}

#[test]
fn cluster_interval_endpoints() {
    let csv = stdout(&[
        "cluster", "--b", "3", "--i", "0", "--r", "3", "--nhat-max", "1024", "--format", "csv",
    ]);
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row["predicted_lo"], "-20/3");
        assert_eq!(row["predicted_hi"], "-11/2");
        assert_eq!(row["in_interval"], "true");
        assert_eq!(row["disjoint"], "true");
    }
}

#[test]
fn verify_row_count_matches_grid() {
    let csv = stdout(&["verify", "--b", "3..4", "--max-n", "64", "--format", "csv"]);
    let rows = csv_rows(&csv);
    // per base: reflection+mirror at n in {4,...,64} (5 sizes), four more
    // checks at n in {8,...,64} (4 sizes), and one shifted-ksequence row per
    // (i, r, nhat) with 2^(i+r+3) <= nhat <= 64
    let n_sizes = 5;
    let n_sizes_ge8 = 4;
    let mut prop_rows = 0;
    for i in 0..=4u32 {
        for r in 1..=4u32 {
            let mut nhat = 1usize << (i + r + 3);
            while nhat <= 64 {
                prop_rows += 1;
                nhat *= 2;
            }
        }
    }
    let expected_per_base = 2 * n_sizes + 4 * n_sizes_ge8 + prop_rows;
    assert_eq!(rows.len(), 2 * expected_per_base);
    assert!(rows.iter().all(|r| r["pass"] == "true"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("dedekind-cluster-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("expand.csv");
    let out = run(&[
        "expand", "--b", "3", "--j", "2", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, "k,a_k\n1,2\n2,5\n3,3\n4,3\n");
    std::fs::remove_file(&path).unwrap();
}
