//! Undirected simple graphs loaded from edge-list files.
//!
//! Vertices are dense indices in `0..n`, assigned in order of first
//! appearance in the input. The original token of each vertex is kept as its
//! label so partitions can be written back in the caller's vocabulary.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use thiserror::Error;

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: expected two vertex labels, found {tokens} token(s): {content:?}")]
    MalformedLine {
        line: usize,
        tokens: usize,
        content: String,
    },
    #[error("graph has no edges after removing self-loops and duplicates")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Immutable undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    labels: Vec<String>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices labelled `"0"`, `"1"`, ... from an edge
    /// list. Self-loops and repeated edges are dropped.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let labels = (0..n).map(|v| v.to_string()).collect();
        Self::from_labelled_edges(labels, edges.iter().copied())
    }

    fn from_labelled_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        let mut m2 = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        let g = Graph {
            adjacency,
            labels,
            m: m2 / 2,
        };
        debug_assert!(g.check_invariants());
        Ok(g)
    }

    /// Number of vertices.
    #[inline]
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    /// Sorted neighbours of `v`.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sum of all degrees, i.e. `2m`.
    #[inline]
    pub fn total_volume(&self) -> u64 {
        2 * self.m as u64
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Each edge once as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Symmetry, simplicity and the handshake identity.
    pub fn check_invariants(&self) -> bool {
        let mut degree_sum = 0;
        for (v, list) in self.adjacency.iter().enumerate() {
            degree_sum += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &w in list {
                if w == v || self.adjacency[w].binary_search(&v).is_err() {
                    return false;
                }
            }
        }
        degree_sum == 2 * self.m && self.labels.len() == self.adjacency.len()
    }

    /// True iff every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components in order of their smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on the largest connected component. Ties go to the
    /// component containing the smallest vertex id. Vertices keep their
    /// relative order and their labels.
    pub fn largest_connected_component(&self) -> Graph {
        let comps = self.components();
        if comps.len() <= 1 {
            return self.clone();
        }
        let mut best = &comps[0];
        for c in &comps[1..] {
            if c.len() > best.len() {
                best = c;
            }
        }
        self.induced_subgraph(best)
    }

    /// Induced subgraph on `vertices` (sorted, distinct), relabelled densely.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adjacency: Vec<Vec<VertexId>> = vertices
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect()
            })
            .collect();
        let m = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        Graph {
            adjacency,
            labels,
            m,
        }
    }

    /// Serialises the graph as an edge list using vertex labels.
    ///
    /// Lines are ordered so that labels first appear in vertex-id order
    /// whenever the graph allows it, which holds for every graph produced by
    /// [`parse_edge_list`] or [`Graph::largest_connected_component`]; reloading
    /// such output reproduces the same graph.
    pub fn to_edge_list(&self) -> String {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut written: HashSet<(VertexId, VertexId)> = HashSet::new();
        let mut out = String::new();
        let labels = &self.labels;
        let emit = |out: &mut String, written: &mut HashSet<_>, a: VertexId, b: VertexId| {
            let _ = writeln!(out, "{} {}", labels[a], labels[b]);
            written.insert((a.min(b), a.max(b)));
        };
        for t in 0..n {
            if !seen[t] {
                let smaller = self.adjacency[t]
                    .first()
                    .copied()
                    .filter(|&w| w < t && seen[w]);
                if let Some(w) = smaller {
                    emit(&mut out, &mut written, w, t);
                } else if t + 1 < n && self.has_edge(t, t + 1) {
                    emit(&mut out, &mut written, t, t + 1);
                    seen[t + 1] = true;
                } else if let Some(&w) = self.adjacency[t].first() {
                    emit(&mut out, &mut written, t, w);
                    seen[w] = true;
                }
                seen[t] = true;
            }
            for &w in &self.adjacency[t] {
                if w < t && !written.contains(&(w, t)) {
                    emit(&mut out, &mut written, w, t);
                }
            }
        }
        out
    }
}

/// Parses an edge list: two whitespace-separated labels per line, `#` and
/// `%` comment lines and blank lines skipped. Labels map to vertex ids in
/// first-appearance order. Self-loop lines are dropped before any label is
/// registered, so a loaded graph has no isolated vertices.
pub fn parse_edge_list<R: Read>(reader: R) -> Result<Graph, GraphError> {
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |tok: &str| -> VertexId {
        if let Some(&id) = ids.get(tok) {
            return id;
        }
        let id = labels.len();
        ids.insert(tok.to_owned(), id);
        labels.push(tok.to_owned());
        id
    };
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::MalformedLine {
                line: i + 1,
                tokens: tokens.len(),
                content: line.clone(),
            });
        }
        if tokens[0] == tokens[1] {
            continue;
        }
        let u = intern(tokens[0]);
        let v = intern(tokens[1]);
        edges.push((u, v));
    }
    let g = Graph::from_labelled_edges(labels, edges)?;
    if g.m() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    assert!(
        g.check_invariants(),
        "loaded graph violates adjacency invariants"
    );
    Ok(g)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let file = std::fs::File::open(path)?;
    parse_edge_list(file)
}
