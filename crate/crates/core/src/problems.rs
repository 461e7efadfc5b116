//! Benchmark fitness functions.
//!
//! Binary problems score the bit string directly and are maximized. Real
//! problems decode the bit string into ten 32-bit values and are minimized.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::genome::{decode_vector, RealInterval, DEFAULT_BITS_PER_VALUE};
use crate::operators::Direction;

/// Genome length of every binary problem.
pub const BINARY_GENOME_LENGTH: usize = 360;
/// Dimension of every real problem.
pub const REAL_DIMENSION: usize = 10;

const DECEPTIVE3: [u32; 8] = [28, 26, 22, 0, 14, 0, 0, 30];
const DECEPTIVE4: [u32; 16] = [5, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4];
const ROYAL_ROAD_BLOCK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    MaxOnes,
    Deceptive3,
    Deceptive4,
    RoyalRoad,
    Rastrigin,
    Rosenbrock,
    Schwefel,
    Griewank,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 8] = [
        ProblemKind::MaxOnes,
        ProblemKind::Deceptive3,
        ProblemKind::Deceptive4,
        ProblemKind::RoyalRoad,
        ProblemKind::Rastrigin,
        ProblemKind::Rosenbrock,
        ProblemKind::Schwefel,
        ProblemKind::Griewank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::MaxOnes => "max_ones",
            ProblemKind::Deceptive3 => "deceptive3",
            ProblemKind::Deceptive4 => "deceptive4",
            ProblemKind::RoyalRoad => "royal_road",
            ProblemKind::Rastrigin => "rastrigin",
            ProblemKind::Rosenbrock => "rosenbrock",
            ProblemKind::Schwefel => "schwefel",
            ProblemKind::Griewank => "griewank",
        }
    }

    pub fn is_real(self) -> bool {
        matches!(
            self,
            ProblemKind::Rastrigin
                | ProblemKind::Rosenbrock
                | ProblemKind::Schwefel
                | ProblemKind::Griewank
        )
    }

    /// Search interval of a real problem.
    pub fn interval(self) -> Option<(f64, f64)> {
        match self {
            ProblemKind::Rastrigin => Some((-5.12, 5.12)),
            ProblemKind::Rosenbrock => Some((-2.048, 2.048)),
            ProblemKind::Schwefel => Some((-500.0, 500.0)),
            ProblemKind::Griewank => Some((-600.0, 600.0)),
            _ => None,
        }
    }

    /// Best attainable objective value.
    pub fn optimum(self) -> f64 {
        match self {
            ProblemKind::MaxOnes | ProblemKind::RoyalRoad => 360.0,
            ProblemKind::Deceptive3 => 3600.0,
            ProblemKind::Deceptive4 => 450.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown problem '{s}'")))
    }
}

/// A benchmark instance with its encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    kind: ProblemKind,
    genome_length: usize,
    direction: Direction,
    interval: Option<RealInterval>,
    dimension: Option<usize>,
}

impl Problem {
    pub fn new(kind: ProblemKind) -> Self {
        match kind.interval() {
            Some((lo, hi)) => Self {
                kind,
                genome_length: REAL_DIMENSION * DEFAULT_BITS_PER_VALUE as usize,
                direction: Direction::Minimize,
                interval: Some(RealInterval::with_default_bits(lo, hi).expect("static interval")),
                dimension: Some(REAL_DIMENSION),
            },
            None => Self {
                kind,
                genome_length: BINARY_GENOME_LENGTH,
                direction: Direction::Maximize,
                interval: None,
                dimension: None,
            },
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        name.parse().map(Self::new)
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn genome_length(&self) -> usize {
        self.genome_length
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn interval(&self) -> Option<&RealInterval> {
        self.interval.as_ref()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    /// Decodes a phenotype into real values; `None` for binary problems.
    pub fn decode(&self, phenotype: &[bool]) -> Result<Option<Vec<f64>>> {
        match (&self.interval, self.dimension) {
            (Some(iv), Some(d)) => decode_vector(phenotype, iv, d).map(Some),
            _ => Ok(None),
        }
    }

    /// Objective value of a phenotype.
    pub fn evaluate(&self, phenotype: &[bool]) -> Result<f64> {
        eval_problem(self, phenotype)
    }
}

pub fn eval_max_ones(x: &[bool]) -> f64 {
    x.iter().filter(|&&b| b).count() as f64
}

fn block_sum(x: &[bool], width: usize, score: impl Fn(usize) -> u32) -> Result<f64> {
    if !x.len().is_multiple_of(width) {
        return Err(invalid(format!(
            "length {} is not a multiple of the block width {width}",
            x.len()
        )));
    }
    let total: u32 = x
        .chunks_exact(width)
        .map(|block| score(block.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)))
        .sum();
    Ok(total as f64)
}

pub fn eval_deceptive3(x: &[bool]) -> Result<f64> {
    block_sum(x, 3, |v| DECEPTIVE3[v])
}

pub fn eval_deceptive4(x: &[bool]) -> Result<f64> {
    block_sum(x, 4, |v| DECEPTIVE4[v])
}

pub fn eval_royal_road(x: &[bool]) -> Result<f64> {
    let full = (1usize << ROYAL_ROAD_BLOCK) - 1;
    block_sum(x, ROYAL_ROAD_BLOCK, |v| {
        if v == full {
            ROYAL_ROAD_BLOCK as u32
        } else {
            0
        }
    })
}

pub fn eval_rastrigin(v: &[f64]) -> f64 {
    10.0 * v.len() as f64
        + v.iter()
            .map(|&x| x * x - 10.0 * (2.0 * PI * x).cos())
            .sum::<f64>()
}

pub fn eval_rosenbrock(v: &[f64]) -> Result<f64> {
    if v.len() < 2 {
        return Err(invalid("rosenbrock needs at least two values"));
    }
    Ok(v.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum())
}

pub fn eval_schwefel(v: &[f64]) -> f64 {
    418.9829 * v.len() as f64 - v.iter().map(|&x| x * x.abs().sqrt().sin()).sum::<f64>()
}

pub fn eval_griewank(v: &[f64]) -> f64 {
    let sum: f64 = v.iter().map(|x| x * x / 4000.0).sum();
    let prod: f64 = v
        .iter()
        .enumerate()
        .map(|(i, &x)| (x / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + sum - prod
}

/// Evaluates `phenotype` on `problem`, decoding real problems first.
pub fn eval_problem(problem: &Problem, phenotype: &[bool]) -> Result<f64> {
    if phenotype.len() != problem.genome_length {
        return Err(invalid(format!(
            "{} expects {} bits, got {}",
            problem.name(),
            problem.genome_length,
            phenotype.len()
        )));
    }
    match problem.kind {
        ProblemKind::MaxOnes => Ok(eval_max_ones(phenotype)),
        ProblemKind::Deceptive3 => eval_deceptive3(phenotype),
        ProblemKind::Deceptive4 => eval_deceptive4(phenotype),
        ProblemKind::RoyalRoad => eval_royal_road(phenotype),
        real => {
            let v = problem
                .decode(phenotype)?
                .expect("real problem has an interval");
            match real {
                ProblemKind::Rastrigin => Ok(eval_rastrigin(&v)),
                ProblemKind::Rosenbrock => eval_rosenbrock(&v),
                ProblemKind::Schwefel => Ok(eval_schwefel(&v)),
                _ => Ok(eval_griewank(&v)),
            }
        }
    }
}
