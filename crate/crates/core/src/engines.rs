//! Evolutionary loops: GA (generational and steady state) and HAEA, each in a
//! classic and a ReGen flavour.
//!
//! A ReGen run marks offspring during marking periods and evaluates the
//! phenotype obtained by growing the genotype through its tags. A classic run
//! evaluates the genotype directly and never marks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::epigenome::{grow, MarkingParams};
use crate::error::{Error, Result};
use crate::operators::{
    best_index, per_bit_mutation, single_bit_mutation, single_point_crossover,
    tournament_select_index, worst_index, Direction, Individual,
};
use crate::problems::Problem;

/// Inclusive range of iterations during which marking is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkingPeriod {
    pub start: usize,
    pub end: usize,
}

impl MarkingPeriod {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start > end {
            return Err(Error::Config(format!(
                "marking period start {start} after end {end}"
            )));
        }
        Ok(Self { start, end })
    }

    /// A period of `duration` iterations past `start`, end included.
    pub fn with_duration(start: usize, duration: usize) -> Self {
        Self {
            start,
            end: start + duration,
        }
    }

    pub fn contains(&self, it: usize) -> bool {
        self.start <= it && it <= self.end
    }
}

/// Periods starting at 200, 500 and 800, each lasting 150 iterations.
pub fn default_periods() -> Vec<MarkingPeriod> {
    [200, 500, 800]
        .into_iter()
        .map(|s| MarkingPeriod::with_duration(s, 150))
        .collect()
}

pub fn marking_period_on(it: usize, periods: &[MarkingPeriod]) -> bool {
    periods.iter().any(|p| p.contains(it))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Ga,
    Haea,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Replacement {
    Generational,
    SteadyState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Each bit flips with probability 1/L.
    PerBit,
    /// Exactly one uniformly chosen bit flips.
    SingleBit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub engine: EngineKind,
    pub replacement: Replacement,
    pub regen_enabled: bool,
    pub pop_size: usize,
    pub iterations: usize,
    /// Probability that a GA pair is recombined rather than copied. Unused by HAEA.
    pub crossover_rate: f64,
    pub mutation: Mutation,
    pub tournament_k: usize,
    pub marking: MarkingParams,
    pub periods: Vec<MarkingPeriod>,
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self::ga(Replacement::Generational, false, 0.7)
    }
}

impl EngineConfig {
    /// GA with the standard settings and per-bit mutation.
    pub fn ga(replacement: Replacement, regen_enabled: bool, crossover_rate: f64) -> Self {
        Self {
            engine: EngineKind::Ga,
            replacement,
            regen_enabled,
            pop_size: 100,
            iterations: 1000,
            crossover_rate,
            mutation: Mutation::PerBit,
            tournament_k: 4,
            marking: MarkingParams::default(),
            periods: default_periods(),
            seed: 0,
        }
    }

    /// HAEA with the standard settings and single-bit mutation.
    pub fn haea(replacement: Replacement, regen_enabled: bool) -> Self {
        Self {
            engine: EngineKind::Haea,
            mutation: Mutation::SingleBit,
            crossover_rate: 1.0,
            ..Self::ga(replacement, regen_enabled, 1.0)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.pop_size < 2 {
            return fail(format!(
                "population size {} must be at least 2",
                self.pop_size
            ));
        }
        if self.engine == EngineKind::Ga && !self.pop_size.is_multiple_of(2) {
            return fail(format!("GA population size {} must be even", self.pop_size));
        }
        if self.iterations == 0 {
            return fail("iterations must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return fail(format!(
                "crossover rate {} not in [0, 1]",
                self.crossover_rate
            ));
        }
        if self.tournament_k == 0 {
            return fail("tournament size must be positive".into());
        }
        self.marking
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        for w in self.periods.windows(2) {
            if w[1].start <= w[0].end {
                return fail(format!(
                    "marking periods {:?} and {:?} overlap or are unsorted",
                    w[0], w[1]
                ));
            }
        }
        if self.periods.iter().any(|p| p.start > p.end) {
            return fail("marking period with start after end".into());
        }
        Ok(())
    }

    /// Short label such as `ReGenSSGA` or `GHAEA`.
    pub fn label(&self) -> String {
        let prefix = if self.regen_enabled { "ReGen" } else { "" };
        match (self.engine, self.replacement) {
            (EngineKind::Ga, Replacement::Generational) => format!("{prefix}GGA"),
            (EngineKind::Ga, Replacement::SteadyState) => format!("{prefix}SSGA"),
            (EngineKind::Haea, Replacement::Generational) => format!("{prefix}GHAEA"),
            (EngineKind::Haea, Replacement::SteadyState) => format!("{prefix}SSHAEA"),
        }
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// Best objective value in the population after each iteration.
    pub best_fitness_per_iteration: Vec<f64>,
    /// Best individual seen at the end of any iteration.
    pub final_best: Individual,
    /// First iteration whose population held `final_best`'s fitness.
    pub best_iteration: usize,
}

impl RunTrace {
    pub fn final_fitness(&self) -> f64 {
        self.final_best.fitness.expect("final best is evaluated")
    }
}

struct Context<'a> {
    config: &'a EngineConfig,
    problem: &'a Problem,
    direction: Direction,
}

impl Context<'_> {
    fn check(config: &EngineConfig, problem: &Problem) -> Result<()> {
        config.validate()?;
        if problem.genome_length() < 2 {
            return Err(Error::Config(format!(
                "genome length {} too short for crossover",
                problem.genome_length()
            )));
        }
        Ok(())
    }

    fn evaluate(&self, ind: &mut Individual) -> Result<()> {
        let fitness = if self.config.regen_enabled {
            let phenotype = grow(&ind.genotype, &ind.epigenotype)?;
            self.problem.evaluate(&phenotype)?
        } else {
            self.problem.evaluate(&ind.genotype)?
        };
        ind.fitness = Some(fitness);
        Ok(())
    }

    fn mutate<R: Rng>(&self, ind: &mut Individual, rng: &mut R) -> Result<()> {
        match self.config.mutation {
            Mutation::PerBit => per_bit_mutation(ind, 1.0 / ind.len() as f64, rng),
            Mutation::SingleBit => single_bit_mutation(ind, rng),
        }
    }

    fn initial_population<R: Rng>(&self, rng: &mut R) -> Result<Vec<Individual>> {
        (0..self.config.pop_size)
            .map(|_| {
                let mut ind = Individual::random(self.problem.genome_length(), rng);
                self.evaluate(&mut ind)?;
                Ok(ind)
            })
            .collect()
    }

    /// Marks when the run is ReGen and `it` lies in a period, then evaluates.
    fn finish_offspring<R: Rng>(&self, ind: &mut Individual, it: usize, rng: &mut R) -> Result<()> {
        if self.config.regen_enabled && marking_period_on(it, &self.config.periods) {
            ind.epigenotype.mark(&self.config.marking, rng);
        }
        self.evaluate(ind)
    }
}

struct Recorder {
    direction: Direction,
    trace: Vec<f64>,
    best: Option<(Individual, usize)>,
}

impl Recorder {
    fn new(direction: Direction, iterations: usize) -> Self {
        Self {
            direction,
            trace: Vec::with_capacity(iterations),
            best: None,
        }
    }

    fn record(&mut self, population: &[Individual], it: usize) {
        let i = best_index(population, self.direction).expect("population is non-empty");
        let f = population[i].fitness_or_worst(self.direction);
        self.trace.push(f);
        let improved = match &self.best {
            Some((b, _)) => self
                .direction
                .is_better(f, b.fitness_or_worst(self.direction)),
            None => true,
        };
        if improved {
            self.best = Some((population[i].clone(), it));
        }
    }

    fn finish(self) -> RunTrace {
        let (final_best, best_iteration) = self.best.expect("at least one iteration");
        RunTrace {
            best_fitness_per_iteration: self.trace,
            final_best,
            best_iteration,
        }
    }
}

/// Called with the iteration index and the population after replacement.
pub type Observer<'a> = &'a mut dyn FnMut(usize, &[Individual]);

/// Runs the GA described by `config` on `problem`.
pub fn run_ga(config: &EngineConfig, problem: &Problem) -> Result<RunTrace> {
    ga_loop(config, problem, &mut |_, _| {})
}

fn ga_loop(config: &EngineConfig, problem: &Problem, observer: Observer) -> Result<RunTrace> {
    Context::check(config, problem)?;
    if config.engine != EngineKind::Ga {
        return Err(Error::Config("run_ga needs a GA configuration".into()));
    }
    let ctx = Context {
        config,
        problem,
        direction: problem.direction(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut population = ctx.initial_population(&mut rng)?;
    let mut recorder = Recorder::new(ctx.direction, config.iterations);

    for it in 0..config.iterations {
        let mut offspring = Vec::with_capacity(config.pop_size);
        for _ in 0..config.pop_size / 2 {
            let a =
                tournament_select_index(&population, config.tournament_k, &mut rng, ctx.direction)?;
            let b =
                tournament_select_index(&population, config.tournament_k, &mut rng, ctx.direction)?;
            let (mut c1, mut c2) = if rng.random::<f64>() < config.crossover_rate {
                single_point_crossover(&population[a], &population[b], &mut rng)?
            } else {
                (population[a].clone(), population[b].clone())
            };
            for child in [&mut c1, &mut c2] {
                ctx.mutate(child, &mut rng)?;
                ctx.finish_offspring(child, it, &mut rng)?;
            }
            offspring.push(c1);
            offspring.push(c2);
        }
        match config.replacement {
            Replacement::Generational => population = offspring,
            Replacement::SteadyState => {
                let best = best_index(&offspring, ctx.direction).expect("offspring non-empty");
                let worst = worst_index(&population, ctx.direction).expect("population non-empty");
                let child = offspring.swap_remove(best);
                if ctx.direction.is_better(
                    child.fitness_or_worst(ctx.direction),
                    population[worst].fitness_or_worst(ctx.direction),
                ) {
                    population[worst] = child;
                }
            }
        }
        observer(it, &population);
        recorder.record(&population, it);
    }
    Ok(recorder.finish())
}

/// Multiplies the rate of operator `op` by `1 + delta` on reward or
/// `1 - delta` on punishment, then renormalizes to sum 1.
pub fn update_rates(rates: &mut [f64], op: usize, delta: f64, reward: bool) {
    rates[op] *= if reward { 1.0 + delta } else { 1.0 - delta };
    let total: f64 = rates.iter().sum();
    if total > 0.0 && total.is_finite() {
        rates.iter_mut().for_each(|r| *r /= total);
    } else {
        let uniform = 1.0 / rates.len() as f64;
        rates.iter_mut().for_each(|r| *r = uniform);
    }
}

fn roulette<R: Rng>(rates: &[f64], rng: &mut R) -> usize {
    let x = rng.random::<f64>() * rates.iter().sum::<f64>();
    let mut acc = 0.0;
    for (i, &r) in rates.iter().enumerate() {
        acc += r;
        if x < acc {
            return i;
        }
    }
    rates.len() - 1
}

const HAEA_CROSSOVER: usize = 0;
const HAEA_OPERATORS: usize = 2;

/// Runs HAEA with per-individual adaptation between crossover and
/// single-bit mutation.
pub fn run_haea(config: &EngineConfig, problem: &Problem) -> Result<RunTrace> {
    haea_loop(config, problem, &mut |_, _| {})
}

fn haea_loop(config: &EngineConfig, problem: &Problem, observer: Observer) -> Result<RunTrace> {
    Context::check(config, problem)?;
    if config.engine != EngineKind::Haea {
        return Err(Error::Config("run_haea needs a HAEA configuration".into()));
    }
    let ctx = Context {
        config,
        problem,
        direction: problem.direction(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut population = ctx.initial_population(&mut rng)?;
    for ind in &mut population {
        ind.op_rates = Some(vec![1.0 / HAEA_OPERATORS as f64; HAEA_OPERATORS]);
    }
    let mut recorder = Recorder::new(ctx.direction, config.iterations);

    for it in 0..config.iterations {
        let mut next = Vec::with_capacity(population.len());
        for parent in &population {
            let mut rates = parent
                .op_rates
                .clone()
                .expect("HAEA individuals carry rates");
            let op = roulette(&rates, &mut rng);
            let mut offspring = if op == HAEA_CROSSOVER {
                let mate = tournament_select_index(
                    &population,
                    config.tournament_k,
                    &mut rng,
                    ctx.direction,
                )?;
                let (c1, c2) = single_point_crossover(parent, &population[mate], &mut rng)?;
                vec![c1, c2]
            } else {
                let mut c = parent.clone();
                ctx.mutate(&mut c, &mut rng)?;
                vec![c]
            };
            for child in &mut offspring {
                ctx.finish_offspring(child, it, &mut rng)?;
            }
            if config.replacement == Replacement::SteadyState {
                offspring.push(parent.clone());
            }
            let best = best_index(&offspring, ctx.direction).expect("offspring non-empty");
            let mut child = offspring.swap_remove(best);
            let delta = rng.random::<f64>();
            let improved = ctx.direction.is_better(
                child.fitness_or_worst(ctx.direction),
                parent.fitness_or_worst(ctx.direction),
            );
            update_rates(&mut rates, op, delta, improved);
            child.op_rates = Some(rates);
            next.push(child);
        }
        population = next;
        observer(it, &population);
        recorder.record(&population, it);
    }
    Ok(recorder.finish())
}

/// Dispatches on `config.engine`.
pub fn run(config: &EngineConfig, problem: &Problem) -> Result<RunTrace> {
    match config.engine {
        EngineKind::Ga => run_ga(config, problem),
        EngineKind::Haea => run_haea(config, problem),
    }
}

/// Like [`run`], calling `observer` after every iteration.
pub fn run_observed(
    config: &EngineConfig,
    problem: &Problem,
    observer: Observer,
) -> Result<RunTrace> {
    match config.engine {
        EngineKind::Ga => ga_loop(config, problem, observer),
        EngineKind::Haea => haea_loop(config, problem, observer),
    }
}

/// Executes `runs` independent runs, run `i` seeded with `config.seed + i`.
/// Runs execute in parallel; results are ordered by run index.
pub fn run_experiment(
    config: &EngineConfig,
    problem: &Problem,
    runs: usize,
) -> Result<Vec<RunTrace>> {
    if runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    Context::check(config, problem)?;
    (0..runs)
        .into_par_iter()
        .map(|i| {
            let cfg = config.clone().with_seed(config.seed.wrapping_add(i as u64));
            run(&cfg, problem)
        })
        .collect()
}
