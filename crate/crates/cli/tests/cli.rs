//! End-to-end tests of the command-line surface: exit codes, output
//! schemas, CSV/JSON value agreement, and byte-level reproducibility.

use std::process::{Command, Output};

fn fmdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn pmf_generalized_reference_rows() {
    let out = fmdist(&[
        "pmf",
        "--dist",
        "generalized",
        "--n",
        "2",
        "--lambda",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], vec!["j", "exact", "decimal"]);
    assert_eq!(rows[1], vec!["0", "5/8", "0.625"]);
    assert_eq!(rows[2], vec!["1", "1/4", "0.25"]);
    assert_eq!(rows[3], vec!["2", "1/8", "0.125"]);
}

#[test]
fn pmf_classical_single_element() {
    let out = fmdist(&["pmf", "--dist", "classical", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[1], vec!["0", "0", "0"]);
    assert_eq!(rows[2], vec!["1", "1", "1"]);
}

#[test]
fn pmf_lambda_out_of_range_is_usage_error() {
    let out = fmdist(&[
        "pmf",
        "--dist",
        "generalized",
        "--n",
        "2",
        "--lambda",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("(0, 1]"), "must cite the valid range");
}

#[test]
fn pmf_rejects_scientific_notation() {
    let out = fmdist(&[
        "pmf",
        "--dist",
        "generalized",
        "--n",
        "2",
        "--lambda",
        "5e-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("scientific notation"));
}

#[test]
fn dist_tv_reference_value() {
    let out = fmdist(&["dist", "--metric", "tv", "--n", "3", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let header = &rows[0];
    let exact_idx = header.iter().position(|c| c == "exact").unwrap();
    assert!(rows[1][exact_idx].starts_with("0.237473985"));
    let integral_idx = header.iter().position(|c| c == "integral_check").unwrap();
    assert!(rows[1][integral_idx].starts_with("0.237473985"));
}

#[test]
fn dist_fm_requires_alpha() {
    let out = fmdist(&["dist", "--metric", "fm", "--n", "3", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha"));
}

#[test]
fn dist_fm_reference_value() {
    let out = fmdist(&[
        "dist", "--metric", "fm", "--n", "1", "--lambda", "1", "--alpha", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let exact_idx = rows[0].iter().position(|c| c == "exact").unwrap();
    assert!(rows[1][exact_idx].starts_with("2.194528049"));
}

#[test]
fn bounds_tv_full_range_passes() {
    let out = fmdist(&[
        "bounds",
        "--metric",
        "tv",
        "--lambda",
        "1",
        "--n-range",
        "1:30",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 31); // header + 30 rows
    let sandwich_idx = rows[0].iter().position(|c| c == "sandwich").unwrap();
    assert!(rows[1..].iter().all(|r| r[sandwich_idx] == "pass"));
}

#[test]
fn bounds_fm_with_workers_is_deterministic() {
    let args = [
        "bounds",
        "--metric",
        "fm",
        "--alpha",
        "2",
        "--lambda",
        "0.5",
        "--n-range",
        "1:20",
    ];
    let one = fmdist(&args);
    let four = fmdist(&[&args[..], &["--workers", "4"][..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(four.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn bounds_reference_columns_are_ordered() {
    let out = fmdist(&["bounds", "--reference", "--n-range", "1:10"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let header = &rows[0];
    let dia = header.iter().position(|c| c == "diaconis_exact").unwrap();
    let das = header.iter().position(|c| c == "dasgupta_exact").unwrap();
    for row in &rows[1..] {
        let diaconis = fmdist::numerics::parse_rational(&row[dia]).unwrap();
        let dasgupta = fmdist::numerics::parse_rational(&row[das]).unwrap();
        assert!(diaconis >= dasgupta);
    }
}

#[test]
fn bounds_malformed_range_is_usage_error() {
    let out = fmdist(&[
        "bounds",
        "--metric",
        "tv",
        "--lambda",
        "1",
        "--n-range",
        "5-9",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = fmdist(&[
        "bounds",
        "--metric",
        "tv",
        "--lambda",
        "1",
        "--n-range",
        "0:5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = fmdist(&[
        "bounds",
        "--metric",
        "tv",
        "--lambda",
        "1",
        "--n-range",
        "9:5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_byte_identical_across_reruns() {
    let args = [
        "simulate",
        "--n",
        "3",
        "--lambda",
        "1",
        "--samples",
        "1000",
        "--seed",
        "7",
        "--workers",
        "4",
    ];
    let a = fmdist(&args);
    let b = fmdist(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    // impossible bin j = n-1 stays empty for lambda = 1
    let rows = csv_rows(&stdout(&a));
    assert_eq!(rows[3][1], "0");
}

#[test]
fn simulate_zero_samples_is_usage_error() {
    let out = fmdist(&["simulate", "--n", "3", "--lambda", "1", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_impossible_threshold_fails_with_code_1() {
    let out = fmdist(&[
        "simulate",
        "--n",
        "4",
        "--lambda",
        "0.5",
        "--samples",
        "100000",
        "--z-threshold",
        "0.001",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("pass=false"));
}

#[test]
fn csv_and_json_encode_identical_values() {
    let base = [
        "dist", "--metric", "fm", "--n", "4", "--lambda", "0.5", "--alpha", "2",
    ];
    let csv = fmdist(&base);
    let json = fmdist(&[&base[..], &["--format", "json"][..]].concat());
    assert_eq!(csv.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));

    let rows = csv_rows(&stdout(&csv));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let json_rows = doc["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), rows.len() - 1);
    for (csv_row, json_row) in rows[1..].iter().zip(json_rows) {
        for (column, csv_cell) in rows[0].iter().zip(csv_row) {
            assert_eq!(
                json_row[column].as_str().unwrap(),
                csv_cell,
                "column {column} differs between formats"
            );
        }
    }
    assert_eq!(doc["meta"]["precision"], 50); // 15 digits + 35 headroom
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join("fmdist-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pmf.csv");
    let piped = fmdist(&["pmf", "--dist", "classical", "--n", "4"]);
    let to_file = fmdist(&[
        "pmf",
        "--dist",
        "classical",
        "--n",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}

#[test]
fn verify_single_check_passes() {
    let out = fmdist(&["verify", "--only", "classical-support-gap"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], vec!["property", "status", "detail"]);
    assert_eq!(rows[1][0], "classical-support-gap");
    assert_eq!(rows[1][1], "pass");
}

#[test]
fn verify_unknown_filter_is_usage_error() {
    let out = fmdist(&["verify", "--only", "no-such-check"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_higher_precision_same_verdicts() {
    let fast = fmdist(&["verify", "--only", "min-tv-sandwich"]);
    let precise = fmdist(&["verify", "--only", "min-tv-sandwich", "--digits", "30"]);
    assert_eq!(fast.status.code(), Some(0));
    assert_eq!(precise.status.code(), Some(0));
    let verdict = |o: &Output| csv_rows(&stdout(o))[1][1].clone();
    assert_eq!(verdict(&fast), verdict(&precise));
}

#[test]
fn digits_bounds_are_enforced() {
    let out = fmdist(&["pmf", "--dist", "classical", "--n", "2", "--digits", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fmdist(&["pmf", "--dist", "classical", "--n", "2", "--digits", "61"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dist_methods_agree_on_the_value() {
    let base = [
        "dist", "--metric", "fm", "--n", "4", "--lambda", "0.5", "--alpha", "2",
    ];
    let value_of = |method: &str| {
        let out = fmdist(&[&base[..], &["--method", method][..]].concat());
        assert_eq!(out.status.code(), Some(0), "method {method}");
        let rows = csv_rows(&stdout(&out));
        let col = if method == "integral" {
            "integral_check"
        } else {
            "exact"
        };
        let idx = rows[0].iter().position(|c| c == col).unwrap();
        rows[1][idx].clone()
    };
    let all = value_of("all");
    assert_eq!(value_of("series"), all);
    assert_eq!(value_of("generic"), all);
    assert_eq!(value_of("integral"), all);
}

#[test]
fn moments_poisson_closed_form() {
    let out = fmdist(&[
        "moments", "--dist", "poisson", "--lambda", "1/2", "--kmax", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[1], vec!["0", "1", "1"]);
    assert_eq!(rows[2], vec!["1", "1/2", "0.5"]);
    assert_eq!(rows[3], vec!["2", "1/4", "0.25"]);
    assert_eq!(rows[4], vec!["3", "1/8", "0.125"]);
}
