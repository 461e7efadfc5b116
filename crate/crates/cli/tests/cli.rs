#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use common::fixture_path;

fn regen() -> Command {
    Command::new(env!("CARGO_BIN_EXE_regen"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn max_ones_grid_reaches_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"problem": "max_ones", "runs": 5, "iterations": 400, "crossover_rates": [0.6, 1.0]}"#,
    );
    let out = dir.path().join("out");
    let status = regen()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let summary = read_csv(&out.join("summary.csv"));
    assert_eq!(summary[0], ["label", "median", "std", "iteration_of_best"]);
    let labels: Vec<_> = summary[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(labels, ["GGAX06", "GGAX10", "ReGenGGAX06", "ReGenGGAX10"]);
    for row in &summary[1..] {
        assert_eq!(row[1], "360", "{row:?}");
    }
    let best = read_csv(&out.join("best.csv"));
    assert_eq!(best.len(), 6);
    let trace = read_csv(&out.join("traces/ReGenGGAX10/run_04.csv"));
    assert_eq!(trace[0], ["iteration", "best_fitness"]);
    assert_eq!(trace.len(), 401);
}

#[test]
fn stats_modes_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let anova = dir.path().join("anova.csv");
    let ok = regen()
        .args(["stats", "--mode", "anova", "--input"])
        .arg(fixture_path("b1_deceptive3.csv"))
        .arg("--out")
        .arg(&anova)
        .status()
        .unwrap();
    assert!(ok.success());
    let rows = read_csv(&anova);
    assert_eq!(rows[0], ["source", "ss", "df", "ms", "f", "p_value"]);
    let f: f64 = rows[1][4].parse().unwrap();
    assert!((f - 1240.0941).abs() < 0.01);

    let wilcoxon = dir.path().join("wilcoxon.csv");
    let ok = regen()
        .args(["stats", "--mode", "wilcoxon", "--input"])
        .arg(fixture_path("b5_rastrigin.csv"))
        .arg("--out")
        .arg(&wilcoxon)
        .status()
        .unwrap();
    assert!(ok.success());
    let rows = read_csv(&wilcoxon);
    let pooled = rows
        .iter()
        .find(|r| r[0] == "GGA" && r[1] == "ReGenGGA")
        .unwrap();
    assert_eq!(pooled[2], "150");
    assert_eq!(pooled[3], "11325");

    let pairwise = dir.path().join("pairwise.csv");
    let ok = regen()
        .args(["stats", "--mode", "pairwise", "--input"])
        .arg(fixture_path("b1_deceptive3.csv"))
        .arg("--out")
        .arg(&pairwise)
        .status()
        .unwrap();
    assert!(ok.success());
    let rows = read_csv(&pairwise);
    assert_eq!(rows.len(), 21);
    assert_eq!(rows[1][0], "GGAX06");
    assert_eq!(rows[1][1], "");
    let p: f64 = rows[1][2].parse().unwrap();
    assert!((p - 0.17764919).abs() < 1e-4);
}

#[test]
fn stats_errors() {
    let dir = tempfile::tempdir().unwrap();
    let identical = dir.path().join("same.csv");
    fs::write(&identical, "a,b\n1,1\n2,2\n3,3\n").unwrap();
    let out = dir.path().join("r.csv");
    let status = regen()
        .args(["stats", "--mode", "wilcoxon", "--input"])
        .arg(&identical)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("differences are zero"));

    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "a,b\n1,2\n3\n").unwrap();
    let status = regen()
        .args(["stats", "--mode", "anova", "--input"])
        .arg(&ragged)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stderr).contains("ragged"));

    let status = regen()
        .args(["stats", "--mode", "kruskal", "--input"])
        .arg(&ragged)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn eval_command() {
    let bits = format!("111000011{}", "111".repeat(117));
    let output = regen()
        .args(["eval", "--problem", "deceptive3", "--bits", &bits])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "3568");

    let output = regen()
        .args(["eval", "--problem", "max_ones", "--bits", "0101"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(
        regen_cli::eval("rastrigin", &"0".repeat(320)).unwrap(),
        regen_core::problems::eval_rastrigin(&[-5.12; 10])
    );

    let output = regen()
        .args(["eval", "--problem", "sphere", "--bits", "01"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let output = regen()
        .args(["eval", "--problem", "max_ones", "--bits", "01x"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "{\n  \"problem\": \"max_ones\",\n  \"engine\": \"pso\"\n}",
    );
    let output = regen()
        .args(["run", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown engine"));

    let config = write_config(
        dir.path(),
        "{\n  \"problem\": \"max_ones\",\n  \"runs\": 3,\n}",
    );
    let output = regen()
        .args(["run", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 4"));

    let missing = dir.path().join("nope.json");
    let output = regen()
        .args(["run", "--config"])
        .arg(&missing)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unwritable_output_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let config = write_config(
        dir.path(),
        r#"{"problem": "max_ones", "runs": 1, "iterations": 2, "pop_size": 4, "regen": false, "crossover_rates": [1.0]}"#,
    );
    let output = regen()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
