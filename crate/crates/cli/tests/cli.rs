use std::fs;
use std::path::PathBuf;

use qhb_cli::{run, CheckReport, CssVerifyReport, DeriveReport};
use qhb_core::{Category, OracleReport, ScanReport};

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qecc-bounds").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const HAMMING_7_4: &str = "q=2^1 modulus=0,1\n1 0 0 0 1 1 0\n0 1 0 0 1 0 1\n0 0 1 0 0 1 1\n0 0 0 1 1 1 1\n";
const SIMPLEX_7_3: &str = "q=2^1 modulus=0,1\n1 1 0 1 1 0 0\n1 0 1 1 0 1 0\n0 1 1 1 0 0 1\n";

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn steane_check_passes() {
    let (code, out, err) = exec(&["check", "--n", "7", "--k", "1", "--d", "3", "--q", "2", "--css"]);
    assert_eq!(code, 0, "{err}");
    let report: CheckReport = serde_json::from_str(&out).unwrap();
    assert!(report.all_satisfied());
    assert_eq!(report.classification.category, Category::SatisfiesHamming);
}

#[test]
fn structural_violation_exits_one() {
    let (code, out, _) = exec(&["check", "--n", "5", "--k", "3", "--d", "3", "--q", "3", "--css"]);
    assert_eq!(code, 1);
    let report: CheckReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.classification.category, Category::ImpossibleCssStructural);
    assert_eq!(
        report.classification.reasons.last().unwrap().bound,
        qhb_core::BoundKind::CombinedCssHamming
    );
}

#[test]
fn big_integers_are_json_strings() {
    let (_, out, _) = exec(&["check", "--n", "60", "--k", "40", "--d", "5", "--q", "3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["bounds"][0]["rhs"],
        serde_json::json!("42391158275216203514294433201")
    );
    assert!(v["params"]["K"].is_string());
}

#[test]
fn explicit_dimension() {
    let (code, out, _) = exec(&[
        "check", "--n", "5", "--K", "6", "--d", "3", "--q", "2", "--format", "human",
    ]);
    assert_eq!(code, 1);
    assert!(out.starts_with("((5,6,3))_2"));
    assert!(out.contains("quantum Hamming: 96 ≤ 32 : FAIL"));
}

#[test]
fn human_lines() {
    let (_, out, _) = exec(&[
        "check", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--format", "human",
    ]);
    assert!(out.contains("quantum Hamming: 32 ≤ 32 : OK (equality)"), "{out}");
}

#[test]
fn usage_errors_are_single_line() {
    for args in [
        &["check", "--n", "5", "--d", "3", "--q", "2"][..],
        &["check", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--frobnicate"],
        &["check", "--n", "0", "--k", "1", "--d", "3", "--q", "2"],
        &["check", "--n", "5", "--k", "1", "--K", "2", "--d", "3", "--q", "2"],
        &["scan", "--n-max", "65", "--q", "2"],
        &["oracle", "--q", "7", "--n-max", "3"],
        &["nonsense"],
    ] {
        let (code, out, err) = exec(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn malformed_matrix_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_tmp(&dir, "bad.txt", "q=2^1 modulus=0,1\n1 0 2\n");
    let good = write_tmp(&dir, "good.txt", HAMMING_7_4);
    let (code, _, err) = exec(&["css-verify", bad.to_str().unwrap(), good.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: ") && err.contains("bad.txt"), "{err}");
    let missing = dir.path().join("nope.txt");
    let (code, _, _) = exec(&["css-verify", missing.to_str().unwrap(), good.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn css_verify_steane() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = write_tmp(&dir, "c1.txt", SIMPLEX_7_3);
    let c2 = write_tmp(&dir, "c2.txt", HAMMING_7_4);
    let (code, out, err) = exec(&["css-verify", c1.to_str().unwrap(), c2.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let report: CssVerifyReport = serde_json::from_str(&out).unwrap();
    assert!(report.nested && report.passed);
    assert_eq!(report.params.unwrap().to_string(), "[[7,1,3]]_2");
    assert_eq!(report.coset_weights, Some((3, 3)));

    // reversed order is not nested
    let (code, out, _) = exec(&["css-verify", c2.to_str().unwrap(), c1.to_str().unwrap()]);
    assert_eq!(code, 1);
    let report: CssVerifyReport = serde_json::from_str(&out).unwrap();
    assert!(!report.nested);
}

#[test]
fn derive_writes_both_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = write_tmp(&dir, "c1.txt", SIMPLEX_7_3);
    let c2 = write_tmp(&dir, "c2.txt", HAMMING_7_4);
    let d = dir.path().join("d.txt");
    let dp = dir.path().join("dp.txt");
    let (code, out, err) = exec(&[
        "derive",
        c1.to_str().unwrap(),
        c2.to_str().unwrap(),
        "--out-d",
        d.to_str().unwrap(),
        "--out-dprime",
        dp.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let report: DeriveReport = serde_json::from_str(&out).unwrap();
    assert_eq!((report.d.length, report.d.dimension), (4, 1));
    assert_eq!((report.d_prime.length, report.d_prime.dimension), (4, 1));
    assert!(report.d.min_weight >= 3 && report.d_prime.min_weight >= 3);
    for path in [&d, &dp] {
        let m = qhb_core::CodeMatrix::from_text(&fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 4));
    }
}

#[test]
fn scan_streams_open_entries() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("open.jsonl");
    let (code, out, _) = exec(&[
        "scan",
        "--n-max",
        "6",
        "--q",
        "2,3",
        "--output",
        lines.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: ScanReport = serde_json::from_str(&out).unwrap();
    assert!(report.runtime_ms.is_none());
    let streamed: Vec<qhb_core::QuantumParams> = fs::read_to_string(&lines)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(streamed, report.open);
    assert!(!streamed.is_empty());
    assert_eq!(report.counts.values().sum::<u64>(), report.total);

    let (_, timed, _) = exec(&["scan", "--n-max", "4", "--q", "2", "--timing"]);
    let timed: ScanReport = serde_json::from_str(&timed).unwrap();
    assert!(timed.runtime_ms.is_some());
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["scan", "--n-max", "8", "--q", "2,3,4", "--css"][..],
        &["oracle", "--q", "2", "--n-max", "7", "--samples", "50", "--seed", "9"],
        &["check", "--n", "5", "--k", "2", "--d", "3", "--q", "2"],
        &["table1", "--format", "json"],
    ] {
        assert_eq!(exec(args), exec(args), "{args:?}");
    }
}

#[test]
fn oracle_report_round_trips() {
    let (code, out, _) = exec(&["oracle", "--q", "3", "--n-max", "5", "--samples", "30", "--seed", "1"]);
    assert_eq!(code, 0);
    let report: OracleReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.exhaustive_lengths, vec![1, 2, 3, 4]);
    assert_eq!(report.sampled_lengths, vec![5]);
    assert_eq!(
        serde_json::to_string_pretty(&report).unwrap().trim_end(),
        out.trim_end()
    );
}

#[test]
fn budget_flag() {
    // check does no enumeration; the oracle has to skip every pair
    let (code, _, err) = exec(&["--budget", "1", "check", "--n", "5", "--k", "1", "--d", "3", "--q", "2"]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = exec(&["oracle", "--q", "2", "--n-max", "3", "--budget", "1"]);
    assert_eq!(code, 0);
    let report: OracleReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.pairs_checked, 0);
    assert!(report.pairs_skipped > 0);
}

#[test]
fn table1_formats() {
    let (code, out, _) = exec(&["table1"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 10));
    assert_eq!(rows[1][1], "0.605");
    assert_eq!(rows[2][9], "0.955");
    let (_, json, _) = exec(&["table1", "--format", "json"]);
    let parsed: Vec<qhb_core::threshold::Table1Row> = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.len(), 9);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = exec(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("table1"));
}

#[test]
fn budget_environment_variable() {
    let bin = env!("CARGO_BIN_EXE_qecc-bounds");
    let run_with = |value: &str, extra: &[&str]| {
        std::process::Command::new(bin)
            .args(["oracle", "--q", "2", "--n-max", "3"])
            .args(extra)
            .env("QECC_BOUNDS_BUDGET", value)
            .output()
            .unwrap()
    };
    let out = run_with("1", &[]);
    let report: OracleReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.config.budget, 1);
    // the flag wins over the environment
    let out = run_with("1", &["--budget", "1000"]);
    let report: OracleReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.config.budget, 1000);
    assert_eq!(report.pairs_skipped, 0);
    let out = run_with("lots", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
}
