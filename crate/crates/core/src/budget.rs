//! Stopping rules, run bookkeeping and seeded random streams shared by all
//! search algorithms.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conductance::Conductance;

/// Restart threshold used by the multi-start algorithms: consecutive
/// iterations (or offspring) without improvement.
pub const DEFAULT_STAGNATION_LIMIT: u64 = 1_000_000;

/// Random stream type used throughout the crate.
pub type SearchRng = ChaCha8Rng;

/// Expands a 64-bit seed into a full ChaCha key with splitmix64, so nearby
/// seeds (`base + i`) give unrelated streams.
pub fn rng_from_seed(seed: u64) -> SearchRng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// How long a run may search.
///
/// A run stops as soon as any configured limit is reached. With only
/// `max_evaluations` set, a run is fully determined by its seed; wall-clock
/// limits make the amount of work machine dependent.
#[derive(Clone, Debug)]
pub struct Budget {
    pub time_limit: Option<Duration>,
    /// Cap on objective evaluations: one per tested move and one per full
    /// evaluation of a new individual.
    pub max_evaluations: Option<u64>,
    pub stagnation_limit: u64,
    /// Stop once a solution at least this good is found.
    pub target: Option<Conductance>,
    pub seed: u64,
}

impl Budget {
    pub fn time(limit: Duration, seed: u64) -> Self {
        Budget {
            time_limit: Some(limit),
            max_evaluations: None,
            stagnation_limit: DEFAULT_STAGNATION_LIMIT,
            target: None,
            seed,
        }
    }

    pub fn evaluations(limit: u64, seed: u64) -> Self {
        Budget {
            time_limit: None,
            max_evaluations: Some(limit),
            stagnation_limit: DEFAULT_STAGNATION_LIMIT,
            target: None,
            seed,
        }
    }

    pub fn with_stagnation_limit(mut self, limit: u64) -> Self {
        self.stagnation_limit = limit;
        self
    }

    pub fn with_target(mut self, target: Conductance) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn start(&self) -> Meter {
        Meter {
            start: Instant::now(),
            time_limit: self.time_limit,
            max_evaluations: self.max_evaluations,
            target: self.target,
            evaluations: 0,
            target_reached: false,
            best: Conductance::Undefined,
            trace: Vec::new(),
        }
    }
}

/// One improvement of the best-so-far value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TracePoint {
    pub evaluations: u64,
    pub phi: Conductance,
}

/// Running counters for one search run.
#[derive(Debug)]
pub struct Meter {
    start: Instant,
    time_limit: Option<Duration>,
    max_evaluations: Option<u64>,
    target: Option<Conductance>,
    evaluations: u64,
    target_reached: bool,
    best: Conductance,
    trace: Vec<TracePoint>,
}

impl Meter {
    #[inline]
    pub fn count(&mut self, evaluations: u64) {
        self.evaluations += evaluations;
    }

    #[inline]
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    /// True once any limit is hit. Reads the clock, so callers in tight loops
    /// should poll every few hundred iterations.
    pub fn expired(&self) -> bool {
        if self.target_reached {
            return true;
        }
        if let Some(max) = self.max_evaluations {
            if self.evaluations >= max {
                return true;
            }
        }
        match self.time_limit {
            Some(limit) => self.start.elapsed() >= limit,
            None => false,
        }
    }

    /// Records a candidate value; returns true when it strictly improves the
    /// best seen so far.
    pub fn observe(&mut self, phi: Conductance) -> bool {
        if let Some(t) = self.target {
            if phi <= t {
                self.target_reached = true;
            }
        }
        if phi < self.best {
            self.best = phi;
            self.trace.push(TracePoint {
                evaluations: self.evaluations,
                phi,
            });
            true
        } else {
            false
        }
    }

    pub fn best(&self) -> Conductance {
        self.best
    }

    pub fn target_reached(&self) -> bool {
        self.target_reached
    }

    pub fn finish(self, membership: Vec<bool>, phi: Conductance, restarts: u64) -> SearchResult {
        SearchResult {
            membership,
            phi,
            evaluations: self.evaluations,
            restarts,
            elapsed: self.start.elapsed(),
            trace: self.trace,
            seeding_overran: false,
        }
    }
}

/// Outcome of one search run.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub membership: Vec<bool>,
    pub phi: Conductance,
    pub evaluations: u64,
    pub restarts: u64,
    pub elapsed: Duration,
    /// Successive improvements of the best-so-far value.
    pub trace: Vec<TracePoint>,
    /// Set by the memetic algorithm when building the initial population
    /// outlasted the time limit.
    pub seeding_overran: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        let draw = |seed| {
            let mut r = rng_from_seed(seed);
            (0..4).map(|_| r.random::<u64>()).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn evaluation_budget() {
        let mut m = Budget::evaluations(10, 0).start();
        assert!(!m.expired());
        m.count(9);
        assert!(!m.expired());
        m.count(1);
        assert!(m.expired());
        assert!(Budget::evaluations(0, 0).start().expired());
    }

    #[test]
    fn target_stops_the_run() {
        let mut m = Budget::evaluations(100, 0)
            .with_target(Conductance::new(1, 7))
            .start();
        assert!(m.observe(Conductance::new(1, 2)));
        assert!(!m.expired());
        assert!(m.observe(Conductance::new(2, 14)));
        assert!(m.expired());
        assert!(!m.observe(Conductance::new(1, 7)));
        assert_eq!(m.finish(vec![], Conductance::new(1, 7), 0).trace.len(), 2);
    }
}
