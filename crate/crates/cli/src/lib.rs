//! Experiment runner behind the `regen` binary.

pub mod config;
pub mod error;
pub mod grid;
pub mod report;

pub use config::{parse_config, parse_config_str, ExperimentSpec};
pub use error::{CliError, Result};
pub use grid::{cell_seed, run_grid, CellSummary};
pub use report::{stats_report, Mode};

use regen_core::{BitString, Problem};

/// Evaluates a single bit string on the named problem.
pub fn eval(problem: &str, bits: &str) -> Result<f64> {
    let problem = Problem::from_name(problem)?;
    let bits: BitString = bits.parse()?;
    Ok(problem.evaluate(&bits)?)
}
