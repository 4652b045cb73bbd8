//! Steady-state adaptive memetic algorithm (StS AMA).
//!
//! The population holds flip-local optima only. Each generation crosses two
//! distinct tournament winners with one-point crossover, improves both
//! offspring with RLS1,2 followed by a full LS1 descent, and lets each
//! offspring that is not already present replace the worst member.

use rand::Rng;

use crate::budget::{rng_from_seed, Budget, Meter, SearchResult, SearchRng};
use crate::genetic::{one_point_crossover, tournament_select, Individual};
use crate::graph::Graph;
use crate::local_search::{
    ls1_descend_to_optimum, rls12_run, AdaptiveSampler, SamplerConfig, DEFAULT_FLIP_PROBABILITY,
};
use crate::partition::PartitionState;

/// How offspring are compared against the population for novelty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DuplicatePolicy {
    /// Only identical genotypes are duplicates.
    Strict,
    /// A genotype also duplicates its complement, which has the same
    /// conductance.
    #[default]
    ComplementAware,
}

#[derive(Clone, Copy, Debug)]
pub struct AmaConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    /// RLS1,2 iterations applied to each offspring.
    pub ls_length: u64,
    pub duplicates: DuplicatePolicy,
    pub flip_probability: f64,
    /// Reseeding attempts for a slot whose seed duplicates an earlier one.
    pub seeding_retries: usize,
}

impl Default for AmaConfig {
    fn default() -> Self {
        AmaConfig {
            population_size: 100,
            tournament_size: 2,
            ls_length: 1_000_000,
            duplicates: DuplicatePolicy::ComplementAware,
            flip_probability: DEFAULT_FLIP_PROBABILITY,
            seeding_retries: 3,
        }
    }
}

/// Upper bound on seeding iterations for one individual: `max(1, ⌈log2 n⌉)`.
pub fn seeding_iteration_cap(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize
}

/// Seeds one individual. Starting from `ps = 1/2`, sample, descend to a
/// local optimum and halve `ps`, repeating while the new candidate is at
/// least as good as the best earlier one (capped by
/// [`seeding_iteration_cap`]). Returns the best candidate.
pub fn adaptive_seed_individual(
    graph: &Graph,
    meter: &mut Meter,
    rng: &mut SearchRng,
) -> Individual {
    let n = graph.n();
    let mut sampler = AdaptiveSampler::new(SamplerConfig::for_graph(n));
    let mut best: Option<Individual> = None;
    for _ in 0..seeding_iteration_cap(n) {
        let bits = sampler.sample(n, rng);
        let mut state =
            PartitionState::from_membership(graph, bits).expect("sample has graph length");
        meter.count(1);
        ls1_descend_to_optimum(&mut state, meter);
        let candidate = Individual {
            fitness: state.phi(),
            genotype: state.into_membership(),
        };
        meter.observe(candidate.fitness);
        sampler.halve();
        match &best {
            Some(b) if candidate.fitness > b.fitness => break,
            Some(b) if candidate.fitness == b.fitness => {}
            _ => best = Some(candidate),
        }
        if meter.target_reached() {
            break;
        }
    }
    best.expect("at least one seeding iteration")
}

/// True if `genotype` already occurs in `population` under `policy`.
pub fn contains_genotype(
    population: &[Individual],
    genotype: &[bool],
    policy: DuplicatePolicy,
) -> bool {
    population.iter().any(|member| {
        member.genotype == genotype
            || (policy == DuplicatePolicy::ComplementAware
                && member.genotype.iter().zip(genotype).all(|(a, b)| a != b))
    })
}

/// Replaces the worst member (largest index among equals) with `offspring`
/// unless it is already present. Returns whether it was inserted.
pub fn replace_worst_if_novel(
    population: &mut [Individual],
    offspring: Individual,
    policy: DuplicatePolicy,
) -> bool {
    if contains_genotype(population, &offspring.genotype, policy) {
        return false;
    }
    let worst = (0..population.len())
        .max_by(|&a, &b| {
            population[a]
                .fitness
                .cmp(&population[b].fitness)
                .then(a.cmp(&b))
        })
        .expect("non-empty population");
    population[worst] = offspring;
    true
}

/// Builds the initial population, reseeding a slot up to
/// `config.seeding_retries` times if its individual is a duplicate.
pub fn seed_population(
    graph: &Graph,
    config: &AmaConfig,
    meter: &mut Meter,
    rng: &mut SearchRng,
) -> Vec<Individual> {
    let mut population: Vec<Individual> = Vec::with_capacity(config.population_size);
    while population.len() < config.population_size {
        let mut individual = adaptive_seed_individual(graph, meter, rng);
        for _ in 0..config.seeding_retries {
            if !contains_genotype(&population, &individual.genotype, config.duplicates)
                || meter.target_reached()
            {
                break;
            }
            individual = adaptive_seed_individual(graph, meter, rng);
        }
        population.push(individual);
        if meter.target_reached() {
            break;
        }
    }
    population
}

fn pick_distinct_parents(
    population: &[Individual],
    t: usize,
    rng: &mut SearchRng,
) -> (usize, usize) {
    const RETRIES: usize = 16;
    let first = tournament_select(population, t, rng);
    for _ in 0..RETRIES {
        let second = tournament_select(population, t, rng);
        if second != first {
            return (first, second);
        }
    }
    let mut second = rng.random_range(0..population.len() - 1);
    if second >= first {
        second += 1;
    }
    (first, second)
}

/// Runs StS AMA until the budget is exhausted and returns the population
/// best.
///
/// Seeding always completes; if it alone exhausts the time or evaluation
/// limit, no generation is run and [`SearchResult::seeding_overran`] is set.
/// RLS1,2 on an offspring stops early when the budget runs out, but the LS1
/// descent that follows always reaches a local optimum.
pub fn sts_ama_run(graph: &Graph, config: &AmaConfig, budget: &Budget) -> SearchResult {
    let p = config.population_size;
    let t = config.tournament_size;
    assert!(p >= 2, "population size must be at least 2");
    assert!(t >= 1, "tournament size must be positive");
    let mut rng = rng_from_seed(budget.seed);
    let mut meter = budget.start();

    let mut population = seed_population(graph, config, &mut meter, &mut rng);
    let seeding_overran = meter.expired() && !meter.target_reached();

    while population.len() >= 2 && !meter.expired() {
        let (a, b) = pick_distinct_parents(&population, t, &mut rng);
        let (x, y) =
            one_point_crossover(&population[a].genotype, &population[b].genotype, &mut rng);
        for genotype in [x, y] {
            let child = intensify(graph, genotype, config, &mut meter, &mut rng);
            replace_worst_if_novel(&mut population, child, config.duplicates);
        }
    }

    let best = population
        .iter()
        .min_by_key(|i| i.fitness)
        .cloned()
        .expect("non-empty population");
    let mut result = meter.finish(best.genotype, best.fitness, 0);
    result.seeding_overran = seeding_overran;
    result
}

/// RLS1,2 for `ls_length` iterations followed by a full LS1 descent.
pub fn intensify(
    graph: &Graph,
    genotype: Vec<bool>,
    config: &AmaConfig,
    meter: &mut Meter,
    rng: &mut SearchRng,
) -> Individual {
    let mut state =
        PartitionState::from_membership(graph, genotype).expect("offspring has graph length");
    meter.count(1);
    meter.observe(state.phi());
    rls12_run(
        &mut state,
        config.ls_length,
        config.flip_probability,
        meter,
        rng,
    );
    ls1_descend_to_optimum(&mut state, meter);
    Individual {
        fitness: state.phi(),
        genotype: state.into_membership(),
    }
}
