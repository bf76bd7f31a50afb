use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nnforecast::timeseries::{synthetic_ar_series, write_csv};

fn prices(dir: &Path, n: usize) -> PathBuf {
    let path = dir.join("prices.csv");
    let series = synthetic_ar_series::<f64>(n, 50.0, 0.95, 0.5, 3).unwrap();
    write_csv(&series, std::fs::File::create(&path).unwrap()).unwrap();
    path
}

fn nnforecast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnforecast")).args(args).output().unwrap()
}

fn run(cmd: &str, data: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--data", data.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    nnforecast(&args)
}

fn csv_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn benchmark_writes_one_row_per_model() {
    let tmp = tempfile::tempdir().unwrap();
    let data = prices(tmp.path(), 100);
    let out = tmp.path().join("out");
    let o = run("benchmark", &data, &out, &["--models", "bp,svr", "--seed", "42", "--epochs", "50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines = csv_lines(&out.join("results.csv"));
    assert!(lines[0].starts_with("# command=benchmark"));
    assert!(lines[0].contains("models=bp,svr") && lines[0].contains("seed=42"));
    assert_eq!(lines[1], "model,mse,mape");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("bp,") && lines[3].starts_with("svr,"));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("model") && stdout.contains("naive baseline"));
}

#[test]
fn kernels_rows_are_in_fixed_order() {
    let tmp = tempfile::tempdir().unwrap();
    let data = prices(tmp.path(), 100);
    let o = run("kernels", &data, tmp.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let kernels: Vec<String> = csv_lines(&tmp.path().join("kernels.csv"))[2..]
        .iter()
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(kernels, ["linear", "poly", "sigmoid-mlp", "rbf"]);
}

#[test]
fn stability_writes_single_summary_row() {
    let tmp = tempfile::tempdir().unwrap();
    let data = prices(tmp.path(), 80);
    let o = run("stability", &data, tmp.path(), &["--runs", "3", "--seed", "7", "--epochs", "30"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines = csv_lines(&tmp.path().join("stability.csv"));
    assert!(lines[0].contains("runs=3"));
    assert_eq!(lines[1], "runs,mse_mean,mse_std,mape_mean,mape_std");
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[2].split(',').count(), 5);
    assert!(lines[2].starts_with("3,"));
}

#[test]
fn lag_series_has_one_row_fewer_than_test_split() {
    let tmp = tempfile::tempdir().unwrap();
    let data = prices(tmp.path(), 103);
    let o = run("lag", &data, tmp.path(), &["--models", "bp,grnn", "--epochs", "30"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // 100 samples, 80 train, 20 test
    for model in ["bp", "grnn"] {
        let lines = csv_lines(&tmp.path().join(format!("lag_{model}.csv")));
        assert_eq!(lines[1], "t,e");
        assert_eq!(lines.len() - 2, 19);
        assert!(lines[2].starts_with("1,"));
    }
}

#[test]
fn single_stability_run_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let data = prices(tmp.path(), 60);
    let out = tmp.path().join("out");
    let o = run("stability", &data, &out, &["--runs", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(nnforecast(&["benchmark"]).status.code(), Some(1));
    assert_eq!(nnforecast(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        nnforecast(&["benchmark", "--data", "x.csv", "--models", "bp,knn"]).status.code(),
        Some(1)
    );
    assert_eq!(nnforecast(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_data_exits_two_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = run("benchmark", &tmp.path().join("nope.csv"), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.csv"));
    assert!(!out.exists());
}

#[test]
fn malformed_data_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("bad.csv");
    std::fs::write(&data, "date,close\n2006-01-03,1.0\n2006-01-10,oops\n").unwrap();
    let o = run("benchmark", &data, tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 3"));
    assert!(!tmp.path().join("results.csv").exists());
}

#[test]
fn invalid_hyperparameter_fails_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let data = prices(tmp.path(), 60);
    let o = run("benchmark", &data, tmp.path(), &["--models", "grnn", "--grnn-beta=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!tmp.path().join("results.csv").exists());
}

#[test]
fn failing_model_leaves_blank_row() {
    let tmp = tempfile::tempdir().unwrap();
    let data = prices(tmp.path(), 60);
    let o = run("benchmark", &data, tmp.path(), &["--models", "grnn,rbf", "--rbf-centers", "500"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: rbf failed"));
    let lines = csv_lines(&tmp.path().join("results.csv"));
    assert_eq!(lines[3], "rbf,,");
}
