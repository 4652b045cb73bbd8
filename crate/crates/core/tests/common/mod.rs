//! Graph generators and an independent full recomputation of partition
//! quantities, shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use mincond::budget::{rng_from_seed, SearchRng};
use mincond::{Graph, PartitionState};
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn barbell() -> Graph {
    Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Connected random graph: a random spanning tree plus each remaining pair
/// independently with probability `density`.
pub fn random_connected(n: usize, density: f64, rng: &mut SearchRng) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_membership(n: usize, rng: &mut SearchRng) -> Vec<bool> {
    (0..n).map(|_| rng.random()).collect()
}

pub fn seeded(seed: u64) -> SearchRng {
    rng_from_seed(seed)
}

/// Quantities of a bipartition recomputed from the edge set alone.
#[derive(Debug, PartialEq, Eq)]
pub struct Recomputed {
    pub cut: u64,
    pub vol_in: u64,
    pub vol_out: u64,
    pub deg_in: Vec<u32>,
    pub deg_out: Vec<u32>,
}

pub fn recompute(graph: &Graph, membership: &[bool]) -> Recomputed {
    let n = graph.n();
    let mut r = Recomputed {
        cut: 0,
        vol_in: 0,
        vol_out: 0,
        deg_in: vec![0; n],
        deg_out: vec![0; n],
    };
    for (u, v) in graph.edges() {
        if membership[u] != membership[v] {
            r.cut += 1;
        }
        for (a, b) in [(u, v), (v, u)] {
            if membership[b] {
                r.deg_in[a] += 1;
            } else {
                r.deg_out[a] += 1;
            }
            if membership[a] {
                r.vol_in += 1;
            } else {
                r.vol_out += 1;
            }
        }
    }
    r
}

pub fn snapshot(state: &PartitionState<'_>) -> Recomputed {
    let n = state.graph().n();
    Recomputed {
        cut: state.cut(),
        vol_in: state.vol_in(),
        vol_out: state.vol_out(),
        deg_in: (0..n).map(|v| state.deg_in(v)).collect(),
        deg_out: (0..n).map(|v| state.deg_out(v)).collect(),
    }
}

/// `cut / min(vol_in, vol_out)` as a reduced-free pair, or `None` if the
/// smaller volume is zero.
pub fn ratio(r: &Recomputed) -> Option<(u128, u128)> {
    let d = r.vol_in.min(r.vol_out);
    (d > 0).then_some((r.cut as u128, d as u128))
}

/// `a <= b` for non-negative fractions.
pub fn frac_le(a: (u128, u128), b: (u128, u128)) -> bool {
    a.0 * b.1 <= b.0 * a.1
}

/// Every connected labelled graph on `n` vertices.
pub fn all_connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(n, &edges).ok()?;
            g.is_connected().then_some(g)
        })
        .collect()
}
