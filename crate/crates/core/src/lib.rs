//! Genetic algorithms and HAEA extended with an epigenetic tag layer.
//!
//! Each individual carries a bit-string genotype and a parallel epigenotype
//! of optional 8-bit tags. Tags are added, removed and modified by a marking
//! process during fixed iteration windows, and a left-to-right decoder grows
//! the phenotype that gets evaluated.

pub mod engines;
pub mod epigenome;
pub mod error;
pub mod genome;
pub mod operators;
pub mod problems;
pub mod stats;

pub use engines::{
    marking_period_on, run, run_experiment, run_ga, run_haea, run_observed, EngineConfig,
    EngineKind, MarkingPeriod, Mutation, Replacement, RunTrace,
};
pub use epigenome::{grow, Epigenotype, MarkingParams, Tag, TagOp};
pub use error::{Error, Result};
pub use genome::{decode_real, decode_vector, encode_real, BitString, RealInterval};
pub use operators::{Direction, Individual};
pub use problems::{eval_problem, Problem, ProblemKind};
