//! Local search: steepest-descent LS1, its multi-start and adaptive forms
//! (LS1 restarts, ALS1), and the randomised flip/swap search RLS1,2 with its
//! adaptive multi-start wrapper ARLS1,2.

use rand::Rng;

use crate::budget::{rng_from_seed, Budget, Meter, SearchResult, SearchRng};
use crate::conductance::Conductance;
use crate::graph::{Graph, VertexId};
use crate::partition::PartitionState;

/// Resampling attempts before a degenerate sample is patched by hand.
const SAMPLE_RETRIES: usize = 8;
/// RLS iterations between clock reads.
const POLL_INTERVAL: u64 = 256;

/// Initial 1-bit probability and the floor of its halving schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub ps: f64,
    pub ps_floor: f64,
}

impl SamplerConfig {
    /// `ps = 1/2`, floor `2/n` (one expected 1-bit), never above `1/2`.
    pub fn for_graph(n: usize) -> Self {
        SamplerConfig {
            ps: 0.5,
            ps_floor: (2.0 / n.max(1) as f64).min(0.5),
        }
    }
}

/// The adaptive `ps` schedule: halve after a success, reset after a failure.
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveSampler {
    config: SamplerConfig,
    ps: f64,
}

impl AdaptiveSampler {
    pub fn new(config: SamplerConfig) -> Self {
        AdaptiveSampler {
            config,
            ps: config.ps,
        }
    }

    pub fn ps(&self) -> f64 {
        self.ps
    }

    pub fn halve(&mut self) {
        self.ps = (self.ps / 2.0).max(self.config.ps_floor);
    }

    pub fn reset(&mut self) {
        self.ps = self.config.ps;
    }

    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Vec<bool> {
        sample_random_membership(n, self.ps, rng)
    }
}

/// Sets each bit independently with probability `ps`.
///
/// A sample with all bits equal is redrawn a few times, then patched by
/// flipping one uniformly chosen bit, so the result always has both sides
/// non-empty. Needs `n >= 2`.
pub fn sample_random_membership(n: usize, ps: f64, rng: &mut impl Rng) -> Vec<bool> {
    assert!(n >= 2, "a bipartition needs at least two vertices");
    let ps = ps.clamp(0.0, 1.0);
    let mut bits = Vec::with_capacity(n);
    for _ in 0..SAMPLE_RETRIES {
        bits.clear();
        bits.extend((0..n).map(|_| rng.random_bool(ps)));
        if !is_degenerate(&bits) {
            return bits;
        }
    }
    let v = rng.random_range(0..n);
    bits[v] = !bits[v];
    bits
}

/// All bits equal, i.e. `S = ∅` or `S = V`.
pub fn is_degenerate(bits: &[bool]) -> bool {
    bits.iter().all(|&b| b) || bits.iter().all(|&b| !b)
}

/// Why a descent returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Descent {
    LocalOptimum,
    BudgetExhausted,
}

/// Steepest descent over single flips: scan all `n` flips, apply the one
/// with the smallest resulting conductance if it is strictly better than the
/// current one, repeat. Ties go to the smallest vertex id; moves that would
/// empty a side are skipped. The budget is polled before every scan.
pub fn ls1_descend(state: &mut PartitionState<'_>, meter: &mut Meter) -> Descent {
    descend(state, meter, true)
}

/// [`ls1_descend`] that always runs to a local optimum, still counting its
/// evaluations against the meter.
pub fn ls1_descend_to_optimum(state: &mut PartitionState<'_>, meter: &mut Meter) {
    descend(state, meter, false);
}

fn descend(state: &mut PartitionState<'_>, meter: &mut Meter, honor_budget: bool) -> Descent {
    let n = state.graph().n();
    loop {
        if honor_budget && meter.expired() {
            return Descent::BudgetExhausted;
        }
        let current = state.phi();
        let mut best: Option<(VertexId, Conductance)> = None;
        for v in 0..n {
            let delta = state.eval_flip(v);
            if delta.is_degenerate() {
                continue;
            }
            let phi = delta.phi();
            if best.is_none_or(|(_, b)| phi < b) {
                best = Some((v, phi));
            }
        }
        meter.count(n as u64);
        match best {
            Some((v, phi)) if phi < current => {
                state.apply_flip(v);
                meter.observe(phi);
            }
            _ => return Descent::LocalOptimum,
        }
    }
}

/// Multi-start LS1: every restart samples with `ps = 1/2` and descends to a
/// local optimum. The first descent always completes.
pub fn ls1_run(graph: &Graph, budget: &Budget) -> SearchResult {
    restarting_descent(graph, budget, SamplerConfig::for_graph(graph.n()), false)
}

/// ALS1: multi-start LS1 whose sampling probability is halved after each
/// restart that matches or beats the best so far and reset to its initial
/// value otherwise. The first descent always completes.
pub fn als1_run(graph: &Graph, budget: &Budget, sampler: SamplerConfig) -> SearchResult {
    restarting_descent(graph, budget, sampler, true)
}

fn restarting_descent(
    graph: &Graph,
    budget: &Budget,
    sampler: SamplerConfig,
    adaptive: bool,
) -> SearchResult {
    let mut rng = rng_from_seed(budget.seed);
    let mut meter = budget.start();
    let mut sampler = AdaptiveSampler::new(sampler);
    let mut best: Option<(Conductance, Vec<bool>)> = None;
    let mut restarts = 0u64;
    loop {
        let bits = sampler.sample(graph.n(), &mut rng);
        let mut state =
            PartitionState::from_membership(graph, bits).expect("sample has graph length");
        meter.count(1);
        meter.observe(state.phi());
        if best.is_none() {
            ls1_descend_to_optimum(&mut state, &mut meter);
        } else {
            ls1_descend(&mut state, &mut meter);
        }
        let phi = state.phi();
        match &best {
            Some((b, _)) if phi > *b => {
                if adaptive {
                    sampler.reset();
                }
            }
            Some((b, _)) if phi == *b => {
                if adaptive {
                    sampler.halve();
                }
            }
            _ => {
                best = Some((phi, state.into_membership()));
                if adaptive {
                    sampler.halve();
                }
            }
        }
        if meter.expired() {
            break;
        }
        restarts += 1;
    }
    let (phi, membership) = best.expect("at least one descent");
    meter.finish(membership, phi, restarts)
}

/// Probability of testing a single flip rather than a swap in RLS1,2.
pub const DEFAULT_FLIP_PROBABILITY: f64 = 0.5;

/// Result of an RLS1,2 run on a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RlsOutcome {
    pub iterations: u64,
    /// True when the run ended on its stagnation limit.
    pub stagnated: bool,
}

/// RLS1,2 for up to `iterations` iterations. Each iteration tests either a
/// uniform random flip (probability `flip_probability`) or a swap of a
/// uniform vertex of `S` with a uniform vertex of `V \ S`, and accepts it if
/// the conductance does not get worse and both sides keep positive volume.
pub fn rls12_run(
    state: &mut PartitionState<'_>,
    iterations: u64,
    flip_probability: f64,
    meter: &mut Meter,
    rng: &mut SearchRng,
) -> RlsOutcome {
    rls12_steps(state, iterations, None, flip_probability, meter, rng)
}

/// Core RLS1,2 loop. With a stagnation limit, stops after that many
/// consecutive iterations without a strict improvement.
pub fn rls12_steps(
    state: &mut PartitionState<'_>,
    max_iterations: u64,
    stagnation_limit: Option<u64>,
    flip_probability: f64,
    meter: &mut Meter,
    rng: &mut SearchRng,
) -> RlsOutcome {
    let n = state.graph().n();
    let mut current = state.phi();
    let mut stagnant = 0u64;
    let mut done = 0u64;
    while done < max_iterations {
        if done.is_multiple_of(POLL_INTERVAL) && meter.expired() {
            break;
        }
        if let Some(limit) = stagnation_limit {
            if stagnant >= limit {
                return RlsOutcome {
                    iterations: done,
                    stagnated: true,
                };
            }
        }
        done += 1;
        stagnant += 1;
        meter.count(1);
        let delta = if rng.random_bool(flip_probability) {
            state.eval_flip(rng.random_range(0..n))
        } else {
            let inside = state.side(true);
            let outside = state.side(false);
            let u = inside[rng.random_range(0..inside.len())] as usize;
            let w = outside[rng.random_range(0..outside.len())] as usize;
            state
                .eval_swap(u, w)
                .expect("u and w drawn from opposite sides")
        };
        if delta.is_degenerate() {
            continue;
        }
        let phi = delta.phi();
        if phi <= current {
            state.apply(delta.mv).expect("move was just evaluated");
            if phi < current {
                stagnant = 0;
                meter.observe(phi);
            }
            current = phi;
        }
    }
    RlsOutcome {
        iterations: done,
        stagnated: false,
    }
}

/// ARLS1,2: RLS1,2 restarted from a fresh adaptive sample whenever
/// `budget.stagnation_limit` consecutive iterations bring no improvement.
/// The sampling probability follows the ALS1 schedule across restarts.
pub fn arls12_run(
    graph: &Graph,
    budget: &Budget,
    sampler: SamplerConfig,
    flip_probability: f64,
) -> SearchResult {
    let mut rng = rng_from_seed(budget.seed);
    let mut meter = budget.start();
    let mut sampler = AdaptiveSampler::new(sampler);
    let mut best: Option<(Conductance, Vec<bool>)> = None;
    let mut restarts = 0u64;
    loop {
        let bits = sampler.sample(graph.n(), &mut rng);
        let mut state =
            PartitionState::from_membership(graph, bits).expect("sample has graph length");
        meter.count(1);
        meter.observe(state.phi());
        rls12_steps(
            &mut state,
            u64::MAX,
            Some(budget.stagnation_limit),
            flip_probability,
            &mut meter,
            &mut rng,
        );
        let phi = state.phi();
        match &best {
            Some((b, _)) if phi > *b => sampler.reset(),
            Some((b, _)) if phi == *b => sampler.halve(),
            _ => {
                best = Some((phi, state.into_membership()));
                sampler.halve();
            }
        }
        if meter.expired() {
            break;
        }
        restarts += 1;
    }
    let (phi, membership) = best.expect("at least one restart");
    meter.finish(membership, phi, restarts)
}
