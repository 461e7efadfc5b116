//! Executes an experiment grid and writes its CSV outputs.
//!
//! Layout under the output directory:
//! - `summary.csv`: one row per cell with `label,median,std,iteration_of_best`
//! - `best.csv`: one column per cell, one row per run, holding final bests
//! - `traces/<label>/run_<NN>.csv`: `iteration,best_fitness` per run

use std::fs;
use std::path::Path;

use rayon::ThreadPoolBuilder;
use regen_core::stats::median;
use regen_core::{run_experiment, RunTrace};

use crate::config::{Cell, ExperimentSpec};
use crate::error::{CliError, Result};

/// FNV-1a over the base seed's little-endian bytes followed by the label.
pub fn cell_seed(base_seed: u64, label: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    base_seed
        .to_le_bytes()
        .iter()
        .chain(label.as_bytes())
        .fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub label: String,
    pub median: f64,
    pub std: f64,
    pub iteration_of_best: f64,
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

pub fn summarize(label: &str, traces: &[RunTrace]) -> CellSummary {
    let finals: Vec<f64> = traces.iter().map(RunTrace::final_fitness).collect();
    let iterations: Vec<f64> = traces.iter().map(|t| t.best_iteration as f64).collect();
    CellSummary {
        label: label.to_string(),
        median: median(&finals).unwrap_or(f64::NAN),
        std: sample_std(&finals),
        iteration_of_best: median(&iterations).unwrap_or(f64::NAN),
    }
}

/// Runs every cell, then writes all files. Runs execute on up to `jobs`
/// threads; results are merged in (cell, run) order.
pub fn run_grid(spec: &ExperimentSpec, jobs: usize) -> Result<Vec<CellSummary>> {
    let pool = ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker threads: {e}")))?;
    let cells = spec.cells();
    let results: Vec<(Cell, Vec<RunTrace>)> = pool.install(|| {
        cells
            .into_iter()
            .map(|mut cell| {
                cell.config.seed = cell_seed(spec.seed, &cell.label);
                let traces = run_experiment(&cell.config, &spec.problem, spec.runs)?;
                Ok((cell, traces))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    write_outputs(&spec.output_dir, &results)
}

fn write_outputs(out: &Path, results: &[(Cell, Vec<RunTrace>)]) -> Result<Vec<CellSummary>> {
    fs::create_dir_all(out)?;
    let summaries: Vec<CellSummary> = results
        .iter()
        .map(|(c, t)| summarize(&c.label, t))
        .collect();

    let mut w = csv::Writer::from_path(out.join("summary.csv"))?;
    w.write_record(["label", "median", "std", "iteration_of_best"])?;
    for s in &summaries {
        w.write_record([
            s.label.clone(),
            s.median.to_string(),
            s.std.to_string(),
            s.iteration_of_best.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(out.join("best.csv"))?;
    w.write_record(results.iter().map(|(c, _)| c.label.as_str()))?;
    let runs = results.first().map_or(0, |(_, t)| t.len());
    for run in 0..runs {
        w.write_record(
            results
                .iter()
                .map(|(_, t)| t[run].final_fitness().to_string()),
        )?;
    }
    w.flush()?;

    for (cell, traces) in results {
        let dir = out.join("traces").join(&cell.label);
        fs::create_dir_all(&dir)?;
        for (run, trace) in traces.iter().enumerate() {
            let mut w = csv::Writer::from_path(dir.join(format!("run_{run:02}.csv")))?;
            w.write_record(["iteration", "best_fitness"])?;
            for (it, f) in trace.best_fitness_per_iteration.iter().enumerate() {
                w.write_record([it.to_string(), f.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(summaries)
}
