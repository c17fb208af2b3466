//! End-to-end runs of the `entspec` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn entspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entspec")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = entspec(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn six_site_chain_space() {
    let v = json(&["space", "--L", "6"]);
    assert_eq!(v["D"], serde_json::json!([13, 8]));
    assert_eq!(v["N"], 8);
    assert_eq!(v["allowed_pairs"], 377);
}

#[test]
fn invalid_sizes_exit_with_one() {
    for args in [&["space", "--L", "0"][..], &["space", "--L", "31"], &["dos", "--phi", "-1"], &["space", "--bogus"]] {
        assert_eq!(entspec(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn balanced_sz_sectors() {
    let text = stdout(&["space", "--model", "diagonal-sz", "--L", "4", "--format", "csv"]);
    let dims: Vec<String> = csv_rows(&text).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(dims, ["1", "4", "6", "4", "1"]);
}

#[test]
fn golden_dos_cdf_is_monotone_and_complete() {
    let rows = csv_rows(&stdout(&["dos", "--phi", "golden", "--grid", "200"]));
    let cdf: Vec<f64> = rows.iter().map(|r| r.last().unwrap().parse().unwrap()).collect();
    assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
    assert!(*cdf.last().unwrap() > 0.999);
    assert_eq!(rows[0].len(), 5);
}

#[test]
fn golden_entropy_table() {
    let rows = csv_rows(&stdout(&["entropy", "--phi", "golden", "--n", "1,2"]));
    let delta: Vec<f64> = rows[..2].iter().map(|r| r[4].parse().unwrap()).collect();
    assert!((delta[0] - 0.5136).abs() < 1e-4);
    assert!((delta[1] - 2f64.ln()).abs() < 1e-9);
    assert_eq!(rows[2][0], "inf");
}

#[test]
fn phase_scan() {
    let rows = csv_rows(&stdout(&["scan", "--phi-min", "0.5", "--phi-max", "2", "--steps", "4"]));
    let phases: Vec<&str> = rows.iter().map(|r| r[5].as_str()).collect();
    assert_eq!(phases, ["gapped", "multicritical", "MP", "MP"]);
}

#[test]
fn non_convergence_exits_with_two() {
    let out = entspec(&["dos", "--method", "fixed-point", "--max-iter", "1", "--grid", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eta"));
}

#[test]
fn exact_finite_moments() {
    let v = json(&["moments", "--finite-L", "6", "--exact", "--n-max", "2"]);
    assert_eq!(v["finite"]["exact"][1], 27.67578125);
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn replay_reproduces_checksums() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let second = tmp.path().join("second");
    stdout(&["sample", "--phi", "2", "--N", "30", "--samples", "3", "--seed", "4", "--compare", "--out", first.to_str().unwrap()]);
    let manifest = first.join("manifest.json");
    stdout(&["replay", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(read(&first, "sample.csv"), read(&second, "sample.csv"));
    assert_eq!(read(&first, "sample.json"), read(&second, "sample.json"));

    let tampered = read(&first, "manifest.json").replace("\"seed\": 4", "\"seed\": 5");
    fs::write(&manifest, tampered).unwrap();
    assert_eq!(entspec(&["replay", manifest.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn help_lists_defaults() {
    let text = stdout(&["dos", "--help"]);
    assert!(text.contains("2000") && text.contains("1e-6"), "{text}");
}
