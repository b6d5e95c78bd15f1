//! End-to-end runs of the `fracburst` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracburst::cli::output::{format_g, CSV_DIGITS};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracburst"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> Vec<f64> {
    text.lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.next().unwrap().parse().unwrap())
        })
        .collect()
}

#[test]
fn bound_prints_certificates() {
    let o = run(&["bound", config("example1.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "tau_ub"), vec![0.72096, 0.999037, 1.1693, 1.41618]);
    assert_eq!(field(&text, "lambda_m")[0], -0.802354);

    let o = run(&["bound", config("example2.cfg").to_str().unwrap()]);
    assert_eq!(field(&stdout(&o), "tau_ub")[0], 8.89974);
}

#[test]
fn all_ones_is_not_applicable() {
    let o = run(&["bound", config("all_ones.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("p22 ≥ 3 + p11") && err.contains("p12 ≥ 3 + p21"), "{err}");
}

#[test]
fn usage_and_config_errors() {
    assert_eq!(run(&["frob"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "[system]\nalpha = 0.5\n").unwrap();
    let o = run(&["bound", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("q1"));

    let missing = dir.path().join("absent.cfg");
    assert_eq!(run(&["bound", missing.to_str().unwrap()]).status.code(), Some(1));

    let o = run(&[
        "b-curve",
        config("example1.cfg").to_str().unwrap(),
        "--alpha",
        "0.9",
        "--lambda-min",
        "-0.9",
        "--lambda-max",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "solve",
        config("all_ones.cfg").to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("all_ones_alpha0.5.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x1,x2"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[0], vec![0.0, 1.0, 1.0]);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0] && w[1][1] >= w[0][1]));
    assert!(rows.last().unwrap()[1] + rows.last().unwrap()[2] > 1e8);
    let plot = fs::read_to_string(dir.path().join("all_ones_alpha0.5.plot")).unwrap();
    assert!(plot.contains("all_ones_alpha0.5.csv"));
}

#[test]
fn b_curve_stays_above_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "b-curve",
        config("example1.cfg").to_str().unwrap(),
        "--alpha",
        "0.9",
        "--lambda-min",
        "0.11",
        "--lambda-max",
        "1",
        "--points",
        "50",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("example1_bcurve_alpha0.9.csv")).unwrap();
    let values: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(values.len(), 50);
    assert!(values.iter().all(|(_, b)| *b >= 7.2845 - 1e-4));
    assert_eq!(values.last().unwrap().0, 1.0);
}

#[test]
fn reproduce_is_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(threads);
        let o = bin()
            .args(["reproduce", "--out-dir", out.to_str().unwrap()])
            .env("FRACBURST_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let mut files: Vec<_> = fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        let contents: Vec<(String, Vec<u8>)> = files
            .iter()
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(p).unwrap()))
            .collect();
        outputs.push(contents);
    }
    assert!(outputs[0].iter().any(|(n, _)| n == "tables.txt"));
    assert_eq!(outputs[0], outputs[1]);
}

proptest! {
    #[test]
    fn csv_numbers_round_trip(v in prop::num::f64::NORMAL) {
        let back: f64 = format_g(v, CSV_DIGITS).parse().unwrap();
        prop_assert!(((back - v) / v).abs() <= 5e-12, "{v} -> {back}");
    }
}
