//! Generational genetic algorithms AGA-1PX and AGA-UX.
//!
//! Both use tournament selection, per-bit mutation at rate `1/n`, a
//! replacement that keeps only the best current member, and a restart with an
//! adapted sampling probability after a long run of offspring without
//! improvement of the best-ever solution.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::budget::{rng_from_seed, Budget, Meter, SearchResult, SearchRng};
use crate::conductance::Conductance;
use crate::graph::Graph;
use crate::local_search::{is_degenerate, AdaptiveSampler, SamplerConfig};
use crate::partition::conductance_of;

/// A genotype with its cached conductance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub genotype: Vec<bool>,
    pub fitness: Conductance,
}

impl Individual {
    /// Evaluates `genotype` from scratch.
    pub fn evaluate(graph: &Graph, genotype: Vec<bool>) -> Self {
        let fitness = conductance_of(graph, &genotype);
        Individual { genotype, fitness }
    }
}

/// Flips one uniformly chosen bit if all bits are equal.
pub fn repair_degenerate(genotype: &mut [bool], rng: &mut impl Rng) {
    if genotype.len() >= 2 && is_degenerate(genotype) {
        let v = rng.random_range(0..genotype.len());
        genotype[v] = !genotype[v];
    }
}

/// Draws `t` members uniformly with replacement and returns the index of the
/// fittest; ties go to the earliest draw.
pub fn tournament_select(population: &[Individual], t: usize, rng: &mut impl Rng) -> usize {
    assert!(t >= 1 && !population.is_empty());
    let mut winner = rng.random_range(0..population.len());
    for _ in 1..t {
        let c = rng.random_range(0..population.len());
        if population[c].fitness < population[winner].fitness {
            winner = c;
        }
    }
    winner
}

/// One-point crossover at a fixed cut point `k`, without repair.
pub fn one_point_crossover_at(a: &[bool], b: &[bool], k: usize) -> (Vec<bool>, Vec<bool>) {
    assert_eq!(a.len(), b.len());
    let mut first = a[..k].to_vec();
    first.extend_from_slice(&b[k..]);
    let mut second = b[..k].to_vec();
    second.extend_from_slice(&a[k..]);
    (first, second)
}

/// One-point crossover with the cut point uniform in `1..n`; degenerate
/// offspring are repaired.
pub fn one_point_crossover(a: &[bool], b: &[bool], rng: &mut impl Rng) -> (Vec<bool>, Vec<bool>) {
    let n = a.len();
    let k = if n >= 2 { rng.random_range(1..n) } else { 0 };
    let (mut x, mut y) = one_point_crossover_at(a, b, k);
    repair_degenerate(&mut x, rng);
    repair_degenerate(&mut y, rng);
    (x, y)
}

/// Each bit taken from `a` with probability 1/2, otherwise from `b`.
pub fn uniform_crossover(a: &[bool], b: &[bool], rng: &mut impl Rng) -> Vec<bool> {
    assert_eq!(a.len(), b.len());
    let mut child: Vec<bool> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| if rng.random_bool(0.5) { x } else { y })
        .collect();
    repair_degenerate(&mut child, rng);
    child
}

/// Flips each bit independently with probability `rate`, then repairs.
pub fn mutate(genotype: &mut [bool], rate: f64, rng: &mut impl Rng) {
    let rate = rate.clamp(0.0, 1.0);
    for bit in genotype.iter_mut() {
        if rng.random_bool(rate) {
            *bit = !*bit;
        }
    }
    repair_degenerate(genotype, rng);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossover {
    /// Two offspring per parent pair (AGA-1PX).
    OnePoint,
    /// One offspring per parent pair (AGA-UX).
    Uniform,
}

#[derive(Clone, Copy, Debug)]
pub struct GaConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    pub crossover: Crossover,
    pub sampler: SamplerConfig,
    /// Per-bit mutation probability; `None` means `1/n`.
    pub mutation_rate: Option<f64>,
}

impl GaConfig {
    pub fn new(graph: &Graph, crossover: Crossover) -> Self {
        GaConfig {
            population_size: 100,
            tournament_size: 2,
            crossover,
            sampler: SamplerConfig::for_graph(graph.n()),
            mutation_rate: None,
        }
    }
}

/// Runs AGA-1PX or AGA-UX until the budget is exhausted and returns the best
/// individual ever evaluated.
///
/// Each generation breeds `p` offspring. The next population is the best
/// current member plus `p - 1` offspring: with one-point crossover one
/// offspring chosen at random is dropped. After `budget.stagnation_limit`
/// consecutive offspring without a new best-ever, the population is
/// resampled; the sampling probability is halved when the finished epoch
/// matched or beat the previous best-ever and reset otherwise.
pub fn aga_run(graph: &Graph, config: &GaConfig, budget: &Budget) -> SearchResult {
    let p = config.population_size;
    let t = config.tournament_size;
    assert!(p >= 2, "population size must be at least 2");
    assert!(t >= 1 && t <= p, "tournament size must lie in 1..=p");
    let n = graph.n();
    let rate = config.mutation_rate.unwrap_or(1.0 / n as f64);
    let mut rng = rng_from_seed(budget.seed);
    let mut meter = budget.start();
    let mut sampler = AdaptiveSampler::new(config.sampler);

    let mut best_ever: Option<Individual> = None;
    let mut restarts = 0u64;

    'epochs: loop {
        let before_epoch = best_ever.as_ref().map(|b| b.fitness);
        let mut population: Vec<Individual> = (0..p)
            .map(|_| Individual::evaluate(graph, sampler.sample(n, &mut rng)))
            .collect();
        meter.count(p as u64);
        let mut epoch_best = population
            .iter()
            .min_by_key(|i| i.fitness)
            .cloned()
            .expect("p >= 2");
        consider(&mut best_ever, &epoch_best, &mut meter);
        let mut stagnant = 0u64;

        while !meter.expired() {
            let offspring = breed(graph, &population, config.crossover, t, rate, &mut rng);
            for child in &offspring {
                meter.count(1);
                if child.fitness < epoch_best.fitness {
                    epoch_best = child.clone();
                }
                if consider(&mut best_ever, child, &mut meter) {
                    stagnant = 0;
                } else {
                    stagnant += 1;
                }
            }
            replace_generation(&mut population, offspring, &mut rng);

            if stagnant >= budget.stagnation_limit {
                match before_epoch {
                    Some(prev) if epoch_best.fitness > prev => sampler.reset(),
                    _ => sampler.halve(),
                }
                restarts += 1;
                continue 'epochs;
            }
        }
        break;
    }
    let best = best_ever.expect("initial population evaluated");
    meter.finish(best.genotype, best.fitness, restarts)
}

fn consider(best: &mut Option<Individual>, candidate: &Individual, meter: &mut Meter) -> bool {
    meter.observe(candidate.fitness);
    if best.as_ref().is_none_or(|b| candidate.fitness < b.fitness) {
        *best = Some(candidate.clone());
        true
    } else {
        false
    }
}

fn breed(
    graph: &Graph,
    population: &[Individual],
    crossover: Crossover,
    t: usize,
    rate: f64,
    rng: &mut SearchRng,
) -> Vec<Individual> {
    let p = population.len();
    let mut out = Vec::with_capacity(p);
    while out.len() < p {
        let a = &population[tournament_select(population, t, rng)].genotype;
        let b = &population[tournament_select(population, t, rng)].genotype;
        match crossover {
            Crossover::OnePoint => {
                let (mut x, mut y) = one_point_crossover(a, b, rng);
                mutate(&mut x, rate, rng);
                mutate(&mut y, rate, rng);
                out.push(Individual::evaluate(graph, x));
                if out.len() < p {
                    out.push(Individual::evaluate(graph, y));
                }
            }
            Crossover::Uniform => {
                let mut x = uniform_crossover(a, b, rng);
                mutate(&mut x, rate, rng);
                out.push(Individual::evaluate(graph, x));
            }
        }
    }
    out
}

/// Keeps the best current member and fills the other `p - 1` slots with
/// offspring, dropping one uniformly chosen offspring.
fn replace_generation(
    population: &mut Vec<Individual>,
    mut offspring: Vec<Individual>,
    rng: &mut SearchRng,
) {
    let p = population.len();
    let elite_idx = (0..p)
        .min_by_key(|&i| population[i].fitness)
        .expect("non-empty");
    let elite = population.swap_remove(elite_idx);
    let drop = rng.random_range(0..offspring.len());
    offspring.swap_remove(drop);
    offspring.shuffle(rng);
    population.clear();
    population.push(elite);
    population.extend(offspring.into_iter().take(p - 1));
}
