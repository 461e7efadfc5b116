//! Individuals and the variation operators shared by every engine.

use std::cmp::Ordering;

use rand::Rng;

use crate::epigenome::Epigenotype;
use crate::error::{invalid, Result};
use crate::genome::BitString;

/// Whether larger or smaller objective values are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// True when `a` is strictly better than `b`.
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }

    /// The value every real fitness beats.
    pub fn worst(self) -> f64 {
        match self {
            Direction::Maximize => f64::NEG_INFINITY,
            Direction::Minimize => f64::INFINITY,
        }
    }

    /// Orders fitness values so that the best one compares greatest.
    pub fn compare(self, a: f64, b: f64) -> Ordering {
        let ord = a.total_cmp(&b);
        match self {
            Direction::Maximize => ord,
            Direction::Minimize => ord.reverse(),
        }
    }
}

/// A chromosome with its tag layer, cached fitness and, for HAEA, its
/// operator rates.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genotype: BitString,
    pub epigenotype: Epigenotype,
    /// Objective value of the decoded phenotype; `None` until evaluated.
    pub fitness: Option<f64>,
    pub op_rates: Option<Vec<f64>>,
}

impl Individual {
    /// An unevaluated individual with an empty epigenotype.
    pub fn new(genotype: BitString) -> Self {
        let len = genotype.len();
        Self {
            genotype,
            epigenotype: Epigenotype::empty(len),
            fitness: None,
            op_rates: None,
        }
    }

    pub fn with_epigenotype(genotype: BitString, epigenotype: Epigenotype) -> Result<Self> {
        if genotype.len() != epigenotype.len() {
            return Err(invalid(format!(
                "genotype has {} alleles, epigenotype {}",
                genotype.len(),
                epigenotype.len()
            )));
        }
        Ok(Self {
            genotype,
            epigenotype,
            fitness: None,
            op_rates: None,
        })
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self::new(BitString::random(len, rng))
    }

    pub fn len(&self) -> usize {
        self.genotype.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genotype.is_empty()
    }

    /// Fitness, or the worst possible value when not yet evaluated.
    pub fn fitness_or_worst(&self, direction: Direction) -> f64 {
        self.fitness.unwrap_or(direction.worst())
    }
}

/// Index of the best of `population` under `direction`; first wins on ties.
pub fn best_index(population: &[Individual], direction: Direction) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, ind) in population.iter().enumerate() {
        let f = ind.fitness_or_worst(direction);
        match best {
            Some((_, bf)) if !direction.is_better(f, bf) => {}
            _ => best = Some((i, f)),
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the worst of `population`; first wins on ties.
pub fn worst_index(population: &[Individual], direction: Direction) -> Option<usize> {
    let mut worst: Option<(usize, f64)> = None;
    for (i, ind) in population.iter().enumerate() {
        let f = ind.fitness_or_worst(direction);
        match worst {
            Some((_, wf)) if !direction.is_better(wf, f) => {}
            _ => worst = Some((i, f)),
        }
    }
    worst.map(|(i, _)| i)
}

/// Draws `k` contestants uniformly with replacement and returns the index of
/// the fittest. Ties go to the contestant drawn first.
pub fn tournament_select_index<R: Rng + ?Sized>(
    population: &[Individual],
    k: usize,
    rng: &mut R,
    direction: Direction,
) -> Result<usize> {
    if population.is_empty() {
        return Err(invalid("tournament over an empty population"));
    }
    if k == 0 {
        return Err(invalid("tournament size must be at least 1"));
    }
    let mut winner = rng.random_range(0..population.len());
    let mut winner_fitness = population[winner].fitness_or_worst(direction);
    for _ in 1..k {
        let c = rng.random_range(0..population.len());
        let f = population[c].fitness_or_worst(direction);
        if direction.is_better(f, winner_fitness) {
            winner = c;
            winner_fitness = f;
        }
    }
    Ok(winner)
}

pub fn tournament_select<'a, R: Rng + ?Sized>(
    population: &'a [Individual],
    k: usize,
    rng: &mut R,
    direction: Direction,
) -> Result<&'a Individual> {
    tournament_select_index(population, k, rng, direction).map(|i| &population[i])
}

/// Single-point crossover at a fixed cut: the first `cut` alleles come from
/// one parent and the rest from the other. Tags travel with their alleles.
pub fn crossover_at(
    p1: &Individual,
    p2: &Individual,
    cut: usize,
) -> Result<(Individual, Individual)> {
    let len = p1.len();
    if p2.len() != len {
        return Err(invalid(format!(
            "parents differ in length: {len} vs {}",
            p2.len()
        )));
    }
    if cut == 0 || cut >= len {
        return Err(invalid(format!("cut point {cut} not in 1..{len}")));
    }
    let splice = |a: &Individual, b: &Individual| {
        let mut genes = a.genotype[..cut].to_vec();
        genes.extend_from_slice(&b.genotype[cut..]);
        let mut tags = a.epigenotype.slots()[..cut].to_vec();
        tags.extend_from_slice(&b.epigenotype.slots()[cut..]);
        Individual {
            genotype: genes.into(),
            epigenotype: tags.into(),
            fitness: None,
            op_rates: None,
        }
    };
    Ok((splice(p1, p2), splice(p2, p1)))
}

/// Single-point crossover with the cut drawn uniformly from `1..len`.
pub fn single_point_crossover<R: Rng + ?Sized>(
    p1: &Individual,
    p2: &Individual,
    rng: &mut R,
) -> Result<(Individual, Individual)> {
    if p1.len() != p2.len() {
        return Err(invalid(format!(
            "parents differ in length: {} vs {}",
            p1.len(),
            p2.len()
        )));
    }
    if p1.len() < 2 {
        return Err(invalid("crossover needs chromosomes of length at least 2"));
    }
    let cut = rng.random_range(1..p1.len());
    crossover_at(p1, p2, cut)
}

/// Flips each genotype bit independently with probability `rate`.
pub fn per_bit_mutation<R: Rng + ?Sized>(
    ind: &mut Individual,
    rate: f64,
    rng: &mut R,
) -> Result<()> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(invalid(format!("mutation rate {rate} not in [0, 1]")));
    }
    let mut changed = false;
    for bit in ind.genotype.iter_mut() {
        if rng.random::<f64>() < rate {
            *bit = !*bit;
            changed = true;
        }
    }
    if changed {
        ind.fitness = None;
    }
    Ok(())
}

/// Flips exactly one uniformly chosen genotype bit.
pub fn single_bit_mutation<R: Rng + ?Sized>(ind: &mut Individual, rng: &mut R) -> Result<()> {
    if ind.is_empty() {
        return Err(invalid("cannot mutate an empty chromosome"));
    }
    let pos = rng.random_range(0..ind.len());
    ind.genotype.flip(pos);
    ind.fitness = None;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epigenome::Tag;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn with_fitness(f: f64) -> Individual {
        let mut ind = Individual::new(BitString::zeros(4));
        ind.fitness = Some(f);
        ind
    }

    #[test]
    fn tournament_on_clones() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pop = vec![with_fitness(3.0); 5];
        let winner = tournament_select(&pop, 4, &mut rng, Direction::Maximize).unwrap();
        assert_eq!(winner, &pop[0]);
    }

    #[test]
    fn tournament_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(tournament_select(&[], 4, &mut rng, Direction::Maximize).is_err());
        let pop = vec![with_fitness(1.0)];
        assert!(tournament_select(&pop, 0, &mut rng, Direction::Maximize).is_err());
    }

    #[test]
    fn tournament_k1_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pop: Vec<_> = (0..4).map(|i| with_fitness(i as f64)).collect();
        let mut counts = [0usize; 4];
        let trials = 40_000;
        for _ in 0..trials {
            counts[tournament_select_index(&pop, 1, &mut rng, Direction::Maximize).unwrap()] += 1;
        }
        let sigma = (trials as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!(
                (c as f64 - trials as f64 / 4.0).abs() < 4.0 * sigma,
                "{counts:?}"
            );
        }
    }

    #[test]
    fn tournament_full_size_wins_often() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10;
        let pop: Vec<_> = (0..n).map(|i| with_fitness(i as f64)).collect();
        let trials = 10_000;
        let wins = (0..trials)
            .filter(|_| {
                tournament_select_index(&pop, n, &mut rng, Direction::Maximize).unwrap() == n - 1
            })
            .count();
        let p = 1.0 - (1.0 - 1.0 / n as f64).powi(n as i32);
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (wins as f64 - p * trials as f64).abs() < 4.0 * sigma,
            "wins {wins}"
        );
    }

    #[test]
    fn tournament_minimize_prefers_low() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pop = vec![with_fitness(5.0), with_fitness(-1.0)];
        let mut low = 0;
        for _ in 0..1000 {
            if tournament_select_index(&pop, 4, &mut rng, Direction::Minimize).unwrap() == 1 {
                low += 1;
            }
        }
        // P(at least one draw of index 1 in 4) = 15/16
        assert!(low > 900);
    }

    /// Parents shaped after the worked recombination figure: parent 1 tagged
    /// at 1-based positions 1, 9, 10, 13, 16 and parent 2 at 4, 9, 11, 15, 22.
    fn figure_parents() -> (Individual, Individual) {
        let tag = Tag::from_byte(0b0100_0011);
        let mut p1 = Individual::new(BitString::ones(24));
        let mut p2 = Individual::new(BitString::zeros(24));
        for pos in [1, 9, 10, 13, 16] {
            p1.epigenotype.set(pos - 1, Some(tag));
        }
        for pos in [4, 9, 11, 15, 22] {
            p2.epigenotype.set(pos - 1, Some(tag));
        }
        (p1, p2)
    }

    fn tagged_positions(ind: &Individual) -> Vec<usize> {
        (0..ind.len())
            .filter(|&i| ind.epigenotype.get(i).is_some())
            .map(|i| i + 1)
            .collect()
    }

    #[test]
    fn crossover_carries_tags_with_alleles() {
        let (p1, p2) = figure_parents();
        let (c1, c2) = crossover_at(&p1, &p2, 10).unwrap();
        assert_eq!(tagged_positions(&c1), vec![1, 9, 10, 11, 15, 22]);
        assert_eq!(tagged_positions(&c2), vec![4, 9, 13, 16]);
        assert_eq!(
            c1.genotype.to_string(),
            format!("{}{}", "1".repeat(10), "0".repeat(14))
        );
        assert_eq!(
            c1.epigenotype.tag_count() + c2.epigenotype.tag_count(),
            p1.epigenotype.tag_count() + p2.epigenotype.tag_count()
        );
    }

    #[test]
    fn crossover_of_identical_parents() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (p1, _) = figure_parents();
        let (c1, c2) = single_point_crossover(&p1, &p1, &mut rng).unwrap();
        assert_eq!(c1.genotype, p1.genotype);
        assert_eq!(c2.epigenotype, p1.epigenotype);
    }

    #[test]
    fn crossover_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = Individual::new(BitString::zeros(1));
        assert!(single_point_crossover(&a, &a, &mut rng).is_err());
        let b = Individual::new(BitString::zeros(3));
        let c = Individual::new(BitString::zeros(4));
        assert!(single_point_crossover(&b, &c, &mut rng).is_err());
        assert!(crossover_at(&c, &c, 0).is_err());
        assert!(crossover_at(&c, &c, 4).is_err());
    }

    #[test]
    fn per_bit_mutation_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let original = Individual::random(50, &mut rng);
        let mut same = original.clone();
        per_bit_mutation(&mut same, 0.0, &mut rng).unwrap();
        assert_eq!(same, original);
        let mut flipped = original.clone();
        per_bit_mutation(&mut flipped, 1.0, &mut rng).unwrap();
        assert_eq!(flipped.genotype.hamming_distance(&original.genotype), 50);
        assert!(per_bit_mutation(&mut flipped, 1.5, &mut rng).is_err());
    }

    #[test]
    fn per_bit_mutation_mean_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let base = Individual::new(BitString::zeros(360));
        let trials = 10_000;
        let mut total = 0usize;
        for _ in 0..trials {
            let mut m = base.clone();
            per_bit_mutation(&mut m, 1.0 / 360.0, &mut rng).unwrap();
            total += m.genotype.count_ones();
        }
        let mean = total as f64 / trials as f64;
        let var = 360.0 * (1.0 / 360.0) * (359.0 / 360.0);
        assert!(
            (mean - 1.0).abs() < 3.0 * (var / trials as f64).sqrt(),
            "mean {mean}"
        );
    }

    #[test]
    fn single_bit_mutation_flips_exactly_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut one = Individual::new(BitString::zeros(1));
        single_bit_mutation(&mut one, &mut rng).unwrap();
        assert_eq!(one.genotype.to_string(), "1");
        let base = Individual::random(40, &mut rng);
        for _ in 0..200 {
            let mut m = base.clone();
            single_bit_mutation(&mut m, &mut rng).unwrap();
            assert_eq!(m.genotype.hamming_distance(&base.genotype), 1);
        }
        assert!(single_bit_mutation(&mut Individual::new(BitString::zeros(0)), &mut rng).is_err());
    }

    #[test]
    fn best_and_worst() {
        let pop: Vec<_> = [3.0, 7.0, 1.0, 7.0]
            .iter()
            .map(|&f| with_fitness(f))
            .collect();
        assert_eq!(best_index(&pop, Direction::Maximize), Some(1));
        assert_eq!(worst_index(&pop, Direction::Maximize), Some(2));
        assert_eq!(best_index(&pop, Direction::Minimize), Some(2));
        assert_eq!(worst_index(&pop, Direction::Minimize), Some(1));
    }
}
