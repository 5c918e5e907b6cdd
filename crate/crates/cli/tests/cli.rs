use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mingc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mingc")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_row(o: &Output) -> Vec<(String, String)> {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    header.iter().zip(row).map(|(h, v)| (h.to_string(), v.to_string())).collect()
}

fn field<'a>(row: &'a [(String, String)], name: &str) -> &'a str {
    &row.iter().find(|(h, _)| h == name).unwrap().1
}

#[test]
fn greedy_picks_the_two_cheap_sets() {
    let o = mingc(&["solve", &data("three-sets.txt"), "--kind", "setcover", "--alg", "greedy", "--oracle", "--format", "csv"]);
    assert!(o.status.success());
    let row = csv_row(&o);
    assert_eq!(field(&row, "cost"), "2");
    assert_eq!(field(&row, "members"), "1 2");
    assert_eq!(field(&row, "opt"), "2");
    assert_eq!(field(&row, "within_bound"), "true");
}

#[test]
fn gsemo_solves_the_path_cds() {
    let o = mingc(&["solve", &data("p4.txt"), "--kind", "cds", "--seed", "7", "--oracle", "--format", "csv"]);
    assert!(o.status.success());
    let row = csv_row(&o);
    assert_eq!(field(&row, "status"), "feasible");
    assert_eq!(field(&row, "cost"), "2");
    assert_eq!(field(&row, "iterations"), "653");
}

#[test]
fn real_valued_output_is_nearly_feasible() {
    let o = mingc(&["solve", &data("two-items.txt"), "--kind", "wcoverage", "--format", "csv"]);
    assert!(o.status.success());
    let row = csv_row(&o);
    let g: f64 = field(&row, "g").parse().unwrap();
    let total: f64 = field(&row, "g_total").parse().unwrap();
    let delta: f64 = field(&row, "delta").parse().unwrap();
    assert!(g > total - delta);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(mingc(&["solve", "/nonexistent/file", "--kind", "setcover"]).status.code(), Some(2));
    assert_eq!(mingc(&["solve", &data("p4.txt"), "--kind", "setcover"]).status.code(), Some(2));
    assert_eq!(mingc(&["solve", &data("three-sets.txt"), "--kind", "setcover", "--iterations", "0"]).status.code(), Some(2));
    assert_eq!(mingc(&["gen", "--family", "graph", "--p", "1.5"]).status.code(), Some(2));
}

#[test]
fn trace_on_feasible_start_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t");
    let o = mingc(&["trace", &data("empty3.txt"), "--kind", "vertexcover", "--out", out.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bins = std::fs::read_to_string(out.join("bintrack.csv")).unwrap();
    assert_eq!(bins.lines().count(), 1);
    assert!(out.join("manifest.json").exists());
}

#[test]
fn trace_ends_with_tracker_zero() {
    let o = mingc(&["trace", &data("three-sets.txt"), "--kind", "setcover", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let summary = text.split("\n\n").last().unwrap();
    let mut lines = summary.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let tracker = header.iter().position(|h| *h == "tracker").unwrap();
    assert_eq!(row[tracker], "0");
}

#[test]
fn gen_is_reproducible_and_hashes_its_output() {
    let a = mingc(&["gen", "--family", "setcover", "--n", "12", "--m", "9", "--seed", "4"]);
    let b = mingc(&["gen", "--family", "setcover", "--n", "12", "--m", "9", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let c = mingc(&["gen", "--family", "setcover", "--n", "12", "--m", "9", "--seed", "5"]);
    assert_ne!(a.stdout, c.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).starts_with("sha256 "));
}

#[test]
fn dense_instances_put_every_element_in_every_set() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dense.txt");
    let o = mingc(&["gen", "--family", "setcover", "--n", "5", "--m", "3", "--density", "1.0", "--out", file.to_str().unwrap()]);
    assert!(o.status.success());
    let solved = mingc(&["solve", file.to_str().unwrap(), "--kind", "setcover", "--alg", "greedy", "--format", "csv"]);
    let row = csv_row(&solved);
    assert_eq!(field(&row, "cost"), "1");
}

#[test]
fn verify_suite_passes_and_bench_reports_rows() {
    let v = mingc(&["verify", "--suite", "delta", "--cases", "20"]);
    assert!(v.status.success(), "{}", stdout(&v));
    let b = mingc(&["bench", "--family", "setcover", "--sizes", "4,5", "--trials", "3", "--format", "csv"]);
    assert!(b.status.success());
    assert_eq!(stdout(&b).lines().count(), 3);
}
