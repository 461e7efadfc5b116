//! Experiment configuration files.
//!
//! A configuration is a JSON object of flat keys. Only `problem` is required:
//!
//! ```json
//! {
//!   "problem": "deceptive3",
//!   "engine": "ga",
//!   "replacement": ["generational", "steady_state"],
//!   "regen": [false, true],
//!   "crossover_rates": [0.6, 0.7, 0.8, 0.9, 1.0],
//!   "runs": 30,
//!   "iterations": 1000,
//!   "pop_size": 100,
//!   "tournament": 4,
//!   "mark_rate": 0.02,
//!   "p_add": 0.35,
//!   "p_remove": 0.35,
//!   "p_modify": 0.30,
//!   "periods": [[200, 350], [500, 650], [800, 950]],
//!   "seed": 0,
//!   "output_dir": "results"
//! }
//! ```

use std::path::{Path, PathBuf};

use regen_core::engines::default_periods;
use regen_core::{EngineConfig, EngineKind, MarkingParams, MarkingPeriod, Problem, Replacement};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: String,
    engine: Option<String>,
    replacement: Option<OneOrMany<String>>,
    regen: Option<OneOrMany<bool>>,
    crossover_rates: Option<Vec<f64>>,
    runs: Option<usize>,
    iterations: Option<usize>,
    pop_size: Option<usize>,
    tournament: Option<usize>,
    mark_rate: Option<f64>,
    p_add: Option<f64>,
    p_remove: Option<f64>,
    p_modify: Option<f64>,
    periods: Option<Vec<(usize, usize)>>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
}

/// A validated experiment grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: Problem,
    pub engine: EngineKind,
    pub replacements: Vec<Replacement>,
    pub regen: Vec<bool>,
    pub crossover_rates: Vec<f64>,
    pub runs: usize,
    pub iterations: usize,
    pub pop_size: usize,
    pub tournament_k: usize,
    pub marking: MarkingParams,
    pub periods: Vec<MarkingPeriod>,
    pub seed: u64,
    pub output_dir: PathBuf,
}

/// One (variant, crossover rate) combination of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub label: String,
    pub config: EngineConfig,
}

impl ExperimentSpec {
    /// Expands the grid. GA variants get one cell per crossover rate, labelled
    /// like `ReGenGGAX08`; HAEA variants get a single cell.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &replacement in &self.replacements {
            for &regen in &self.regen {
                let mut base = match self.engine {
                    EngineKind::Ga => EngineConfig::ga(replacement, regen, 1.0),
                    EngineKind::Haea => EngineConfig::haea(replacement, regen),
                };
                base.pop_size = self.pop_size;
                base.iterations = self.iterations;
                base.tournament_k = self.tournament_k;
                base.marking = self.marking;
                base.periods = self.periods.clone();
                match self.engine {
                    EngineKind::Ga => {
                        for &rate in &self.crossover_rates {
                            let mut config = base.clone();
                            config.crossover_rate = rate;
                            let label =
                                format!("{}X{:02}", base.label(), (rate * 10.0).round() as u32);
                            cells.push(Cell { label, config });
                        }
                    }
                    EngineKind::Haea => cells.push(Cell {
                        label: base.label(),
                        config: base,
                    }),
                }
            }
        }
        cells
    }
}

fn parse_engine(name: &str) -> Result<EngineKind> {
    match name {
        "ga" => Ok(EngineKind::Ga),
        "haea" => Ok(EngineKind::Haea),
        other => Err(CliError::Config(format!(
            "unknown engine '{other}' (expected ga or haea)"
        ))),
    }
}

fn parse_replacement(name: &str) -> Result<Replacement> {
    match name {
        "generational" => Ok(Replacement::Generational),
        "steady_state" => Ok(Replacement::SteadyState),
        other => Err(CliError::Config(format!(
            "unknown replacement '{other}' (expected generational or steady_state)"
        ))),
    }
}

/// Parses and validates configuration text.
pub fn parse_config_str(text: &str) -> Result<ExperimentSpec> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;

    let problem = Problem::from_name(&raw.problem)?;
    let engine = parse_engine(raw.engine.as_deref().unwrap_or("ga"))?;
    let replacements = raw
        .replacement
        .map(OneOrMany::into_vec)
        .unwrap_or_else(|| vec!["generational".into()])
        .iter()
        .map(|s| parse_replacement(s))
        .collect::<Result<Vec<_>>>()?;
    let regen = raw
        .regen
        .map(OneOrMany::into_vec)
        .unwrap_or_else(|| vec![false, true]);
    let crossover_rates = raw
        .crossover_rates
        .unwrap_or_else(|| vec![0.6, 0.7, 0.8, 0.9, 1.0]);
    let defaults = MarkingParams::default();
    let marking = MarkingParams {
        mark_rate: raw.mark_rate.unwrap_or(defaults.mark_rate),
        p_add: raw.p_add.unwrap_or(defaults.p_add),
        p_remove: raw.p_remove.unwrap_or(defaults.p_remove),
        p_modify: raw.p_modify.unwrap_or(defaults.p_modify),
    };
    let periods = match raw.periods {
        Some(p) => p
            .into_iter()
            .map(|(s, e)| MarkingPeriod::new(s, e))
            .collect::<regen_core::Result<Vec<_>>>()?,
        None => default_periods(),
    };

    let spec = ExperimentSpec {
        problem,
        engine,
        replacements,
        regen,
        crossover_rates,
        runs: raw.runs.unwrap_or(30),
        iterations: raw.iterations.unwrap_or(1000),
        pop_size: raw.pop_size.unwrap_or(100),
        tournament_k: raw.tournament.unwrap_or(4),
        marking,
        periods,
        seed: raw.seed.unwrap_or(0),
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("results")),
    };
    validate(&spec)?;
    Ok(spec)
}

fn validate(spec: &ExperimentSpec) -> Result<()> {
    let fail = |msg: &str| Err(CliError::Config(msg.to_string()));
    if spec.runs == 0 {
        return fail("runs must be at least 1");
    }
    if spec.replacements.is_empty() || spec.regen.is_empty() {
        return fail("replacement and regen lists must not be empty");
    }
    if spec.engine == EngineKind::Ga && spec.crossover_rates.is_empty() {
        return fail("crossover_rates must not be empty");
    }
    let mut labels = Vec::new();
    for cell in spec.cells() {
        cell.config.validate()?;
        if labels.contains(&cell.label) {
            return Err(CliError::Config(format!(
                "duplicate grid cell '{}'",
                cell.label
            )));
        }
        labels.push(cell.label);
    }
    Ok(())
}

pub fn parse_config(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
