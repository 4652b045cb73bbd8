//! Exhaustive minimum conductance for small graphs.
//!
//! Enumerates every subset that excludes vertex 0 (each complementary pair
//! exactly once, since `Φ(S) = Φ(V \ S)`) in Gray-code order, updating the
//! cut and volume with one toggle per step. It shares no code with the
//! incremental engine, so it can serve as an independent check on it.

use thiserror::Error;

use crate::conductance::Conductance;
use crate::graph::Graph;

/// Largest vertex count accepted by [`brute_force_min_conductance`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices; exhaustive search supports at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("no bipartition of this graph has a defined conductance")]
    NoDefinedPartition,
}

/// Global minimum conductance and the lexicographically smallest membership
/// vector attaining it (`false < true`, vertex 0 first). The witness always
/// has vertex 0 outside `S`.
pub fn brute_force_min_conductance(graph: &Graph) -> Result<(Conductance, Vec<bool>), OracleError> {
    let n = graph.n();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_BRUTE_FORCE_VERTICES,
        });
    }
    if n < 2 {
        return Err(OracleError::NoDefinedPartition);
    }
    let total = graph.total_volume();
    let free = n - 1; // vertices 1..n toggle; vertex 0 stays outside
    let mut inside = vec![false; n];
    let mut cut = 0i64;
    let mut vol = 0u64;
    let mut best: Option<(Conductance, Vec<bool>)> = None;

    for step in 1u64..(1u64 << free) {
        // Gray code: the bit that changes between step-1 and step.
        let v = step.trailing_zeros() as usize + 1;
        let toward = graph.neighbors(v).iter().filter(|&&w| inside[w]).count() as i64;
        let away = graph.degree(v) as i64 - toward;
        if inside[v] {
            cut += toward - away;
            vol -= graph.degree(v) as u64;
        } else {
            cut += away - toward;
            vol += graph.degree(v) as u64;
        }
        inside[v] = !inside[v];

        let phi = Conductance::from_cut_and_volumes(cut as u64, vol, total - vol);
        if !phi.is_defined() {
            continue;
        }
        match &mut best {
            None => best = Some((phi, inside.clone())),
            Some((b, witness)) => {
                if phi < *b || (phi == *b && inside < *witness) {
                    *b = phi;
                    witness.clone_from(&inside);
                }
            }
        }
    }
    best.ok_or(OracleError::NoDefinedPartition)
}
