//! Incremental bipartition engine.
//!
//! [`PartitionState`] caches the cut size, both side volumes and, for every
//! vertex, how many of its neighbours lie inside and outside `S`. With that
//! data a single-vertex move is evaluated in O(1) and applied in O(deg v); a
//! swap of two vertices across the cut is evaluated in O(log Δ) and applied in
//! O(deg u + deg w).
//!
//! Move formulas, for a vertex `v` with `a` neighbours on its own side and
//! `b` neighbours on the other side:
//!
//! ```text
//! cut'      = cut + a - b
//! vol(own)  -= deg v
//! vol(other) += deg v
//! ```
//!
//! i.e. edges to former companions become cut edges and edges that crossed
//! the cut become internal. This holds in both directions (into or out of
//! `S`). Neighbour counts of every `w ~ v` shift by one from `v`'s old side to
//! its new side.

use thiserror::Error;

use crate::conductance::Conductance;
use crate::graph::{Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("membership has length {found}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertices {u} and {w} are on the same side of the partition")]
    SameSide { u: VertexId, w: VertexId },
    #[error("conductance is undefined: one side has zero volume")]
    UndefinedPartition,
    #[error("improvement test needs a defined conductance with a non-zero cut on both states")]
    UndefinedPhi,
}

/// A candidate move, identified by the vertex or vertex pair it touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Flip(VertexId),
    Swap(VertexId, VertexId),
}

/// Cut and volumes a move would produce, computed without mutating the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveDelta {
    pub mv: Move,
    pub cut: u64,
    pub vol_in: u64,
    pub vol_out: u64,
}

impl MoveDelta {
    #[inline]
    pub fn phi(&self) -> Conductance {
        Conductance::from_cut_and_volumes(self.cut, self.vol_in, self.vol_out)
    }

    /// True when the move would empty one side's volume.
    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.vol_in == 0 || self.vol_out == 0
    }
}

/// Per-side vertex lists with O(1) insert/remove, used to draw a uniform
/// vertex from `S` or from `V \ S`.
#[derive(Clone, Debug)]
struct SideIndex {
    sides: [Vec<u32>; 2],
    slot: Vec<u32>,
}

impl SideIndex {
    fn new(membership: &[bool]) -> Self {
        let mut sides = [Vec::new(), Vec::new()];
        let mut slot = vec![0u32; membership.len()];
        for (v, &b) in membership.iter().enumerate() {
            let side = &mut sides[b as usize];
            slot[v] = side.len() as u32;
            side.push(v as u32);
        }
        SideIndex { sides, slot }
    }

    fn move_vertex(&mut self, v: VertexId, from: bool) {
        let s = self.slot[v] as usize;
        let old = &mut self.sides[from as usize];
        old.swap_remove(s);
        if let Some(&moved) = old.get(s) {
            self.slot[moved as usize] = s as u32;
        }
        let new = &mut self.sides[!from as usize];
        self.slot[v] = new.len() as u32;
        new.push(v as u32);
    }
}

/// Mutable bipartition `(S, V \ S)` of a graph with cached auxiliary data.
///
/// `membership[v] == true` means `v ∈ S`.
#[derive(Clone, Debug)]
pub struct PartitionState<'g> {
    graph: &'g Graph,
    membership: Vec<bool>,
    cut: u64,
    vol_in: u64,
    vol_out: u64,
    /// Neighbours of each vertex inside `S`.
    deg_in: Vec<u32>,
    /// Neighbours of each vertex in `V \ S`.
    deg_out: Vec<u32>,
    index: SideIndex,
}

/// Two states are equal when membership and every cached field agree; the
/// internal ordering of the side lists is not part of the state.
impl PartialEq for PartitionState<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.membership == other.membership
            && self.cut == other.cut
            && self.vol_in == other.vol_in
            && self.vol_out == other.vol_out
            && self.deg_in == other.deg_in
            && self.deg_out == other.deg_out
    }
}

impl Eq for PartitionState<'_> {}

impl<'g> PartitionState<'g> {
    /// Computes all cached data in one pass over the edges.
    pub fn from_membership(graph: &'g Graph, membership: Vec<bool>) -> Result<Self, EngineError> {
        if membership.len() != graph.n() {
            return Err(EngineError::LengthMismatch {
                expected: graph.n(),
                found: membership.len(),
            });
        }
        let n = graph.n();
        let mut deg_in = vec![0u32; n];
        let mut deg_out = vec![0u32; n];
        let mut vol_in = 0u64;
        let mut cut = 0u64;
        for v in 0..n {
            let d = graph.degree(v) as u64;
            if membership[v] {
                vol_in += d;
            }
            for &w in graph.neighbors(v) {
                if membership[w] {
                    deg_in[v] += 1;
                } else {
                    deg_out[v] += 1;
                }
            }
            if membership[v] {
                cut += deg_out[v] as u64;
            }
        }
        let index = SideIndex::new(&membership);
        Ok(PartitionState {
            graph,
            vol_out: graph.total_volume() - vol_in,
            membership,
            cut,
            vol_in,
            deg_in,
            deg_out,
            index,
        })
    }

    #[inline]
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    #[inline]
    pub fn membership(&self) -> &[bool] {
        &self.membership
    }

    pub fn into_membership(self) -> Vec<bool> {
        self.membership
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.membership[v]
    }

    #[inline]
    pub fn cut(&self) -> u64 {
        self.cut
    }

    /// `Vol(S)`.
    #[inline]
    pub fn vol_in(&self) -> u64 {
        self.vol_in
    }

    /// `Vol(V \ S)`.
    #[inline]
    pub fn vol_out(&self) -> u64 {
        self.vol_out
    }

    /// Number of neighbours of `v` inside `S`.
    #[inline]
    pub fn deg_in(&self, v: VertexId) -> u32 {
        self.deg_in[v]
    }

    /// Number of neighbours of `v` outside `S`.
    #[inline]
    pub fn deg_out(&self, v: VertexId) -> u32 {
        self.deg_out[v]
    }

    /// Vertices currently in `S` (`side == true`) or in `V \ S`, in no
    /// particular order.
    pub fn side(&self, side: bool) -> &[u32] {
        &self.index.sides[side as usize]
    }

    pub fn size_in(&self) -> usize {
        self.index.sides[1].len()
    }

    /// `Φ(S) = cut / min(Vol(S), Vol(V \ S))`.
    #[inline]
    pub fn phi(&self) -> Conductance {
        Conductance::from_cut_and_volumes(self.cut, self.vol_in, self.vol_out)
    }

    /// `max(cut / Vol(S), cut / Vol(V \ S))`, which equals [`phi`](Self::phi)
    /// whenever both volumes are positive.
    pub fn phi_max_form(&self) -> Result<Conductance, EngineError> {
        if self.vol_in == 0 || self.vol_out == 0 {
            return Err(EngineError::UndefinedPartition);
        }
        let a = Conductance::new(self.cut, self.vol_in);
        let b = Conductance::new(self.cut, self.vol_out);
        Ok(a.max(b))
    }

    #[inline]
    fn same_minus_other(&self, v: VertexId) -> i64 {
        if self.membership[v] {
            self.deg_in[v] as i64 - self.deg_out[v] as i64
        } else {
            self.deg_out[v] as i64 - self.deg_in[v] as i64
        }
    }

    /// Cut and volumes after toggling `v`, in O(1).
    #[inline]
    pub fn eval_flip(&self, v: VertexId) -> MoveDelta {
        let d = self.graph.degree(v) as u64;
        let cut = (self.cut as i64 + self.same_minus_other(v)) as u64;
        let (vol_in, vol_out) = if self.membership[v] {
            (self.vol_in - d, self.vol_out + d)
        } else {
            (self.vol_in + d, self.vol_out - d)
        };
        MoveDelta {
            mv: Move::Flip(v),
            cut,
            vol_in,
            vol_out,
        }
    }

    /// Toggles `v` and updates every cached field in O(deg v).
    pub fn apply_flip(&mut self, v: VertexId) {
        let delta = self.eval_flip(v);
        let leaving = self.membership[v];
        for &w in self.graph.neighbors(v) {
            if leaving {
                self.deg_in[w] -= 1;
                self.deg_out[w] += 1;
            } else {
                self.deg_in[w] += 1;
                self.deg_out[w] -= 1;
            }
        }
        self.membership[v] = !leaving;
        self.index.move_vertex(v, leaving);
        self.cut = delta.cut;
        self.vol_in = delta.vol_in;
        self.vol_out = delta.vol_out;
    }

    /// Cut and volumes after exchanging `u` and `w` across the cut.
    ///
    /// Composing two independent flip deltas would miscount an edge `{u, w}`:
    /// after the first flip that edge no longer crosses the cut from `w`'s
    /// point of view. The correction is `+2` when the two are adjacent.
    pub fn eval_swap(&self, u: VertexId, w: VertexId) -> Result<MoveDelta, EngineError> {
        if self.membership[u] == self.membership[w] {
            return Err(EngineError::SameSide { u, w });
        }
        let adjacent = self.graph.has_edge(u, w) as i64;
        let cut =
            self.cut as i64 + self.same_minus_other(u) + self.same_minus_other(w) + 2 * adjacent;
        let (du, dw) = (self.graph.degree(u) as u64, self.graph.degree(w) as u64);
        let (d_in, d_out) = if self.membership[u] {
            (du, dw)
        } else {
            (dw, du)
        };
        Ok(MoveDelta {
            mv: Move::Swap(u, w),
            cut: cut as u64,
            vol_in: self.vol_in - d_in + d_out,
            vol_out: self.vol_out - d_out + d_in,
        })
    }

    /// Exchanges `u` and `w` across the cut as two flips.
    pub fn apply_swap(&mut self, u: VertexId, w: VertexId) -> Result<(), EngineError> {
        if self.membership[u] == self.membership[w] {
            return Err(EngineError::SameSide { u, w });
        }
        self.apply_flip(u);
        self.apply_flip(w);
        Ok(())
    }

    pub fn eval(&self, mv: Move) -> Result<MoveDelta, EngineError> {
        match mv {
            Move::Flip(v) => Ok(self.eval_flip(v)),
            Move::Swap(u, w) => self.eval_swap(u, w),
        }
    }

    pub fn apply(&mut self, mv: Move) -> Result<(), EngineError> {
        match mv {
            Move::Flip(v) => {
                self.apply_flip(v);
                Ok(())
            }
            Move::Swap(u, w) => self.apply_swap(u, w),
        }
    }

    /// Tests whether `delta` is an improvement or a stagnation,
    /// `Φ(S') ≤ Φ(S)`, in the multiplied-out form
    ///
    /// ```text
    /// min vol(S) - min vol(S') + (cut' - cut) / Φ(S) ≤ 0
    /// ```
    ///
    /// which is only valid for `cut > 0` and positive volumes on both
    /// states; otherwise [`EngineError::UndefinedPhi`] is returned and the
    /// caller should compare conductances directly.
    pub fn improvement_predicate(&self, delta: &MoveDelta) -> Result<bool, EngineError> {
        let mv = self.vol_in.min(self.vol_out) as i128;
        let mv_new = delta.vol_in.min(delta.vol_out) as i128;
        if mv == 0 || mv_new == 0 || self.cut == 0 {
            return Err(EngineError::UndefinedPhi);
        }
        let cut = self.cut as i128;
        let change = delta.cut as i128 - cut;
        // Multiply through by cut > 0: (mv - mv') * cut + change * mv <= 0.
        Ok((mv - mv_new) * cut + change * mv <= 0)
    }

    /// Verifies every cached field against a fresh recomputation.
    pub fn matches_recomputation(&self) -> bool {
        match PartitionState::from_membership(self.graph, self.membership.clone()) {
            Ok(fresh) => fresh == *self && self.index_consistent(),
            Err(_) => false,
        }
    }

    fn index_consistent(&self) -> bool {
        self.index.sides.iter().enumerate().all(|(side, list)| {
            list.iter().enumerate().all(|(i, &v)| {
                self.membership[v as usize] == (side == 1)
                    && self.index.slot[v as usize] as usize == i
            })
        }) && self.index.sides[0].len() + self.index.sides[1].len() == self.membership.len()
    }
}

/// Full O(n + m) evaluation of a membership vector, without auxiliary data.
pub fn conductance_of(graph: &Graph, membership: &[bool]) -> Conductance {
    let mut vol_in = 0u64;
    let mut cut = 0u64;
    for (u, &inside) in membership.iter().enumerate() {
        if inside {
            vol_in += graph.degree(u) as u64;
            cut += graph
                .neighbors(u)
                .iter()
                .filter(|&&w| !membership[w])
                .count() as u64;
        }
    }
    Conductance::from_cut_and_volumes(cut, vol_in, graph.total_volume() - vol_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    /// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
    fn barbell() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    fn bits(n: usize, set: &[usize]) -> Vec<bool> {
        let mut b = vec![false; n];
        for &v in set {
            b[v] = true;
        }
        b
    }

    #[test]
    fn triangle_single_vertex() {
        let g = triangle();
        let s = PartitionState::from_membership(&g, bits(3, &[0])).unwrap();
        assert_eq!((s.cut(), s.vol_in(), s.vol_out()), (2, 2, 4));
        assert_eq!(s.phi(), Conductance::new(1, 1));
    }

    #[test]
    fn barbell_triangle_split() {
        let g = barbell();
        let s = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        assert_eq!((s.cut(), s.vol_in(), s.vol_out()), (1, 7, 7));
        assert_eq!(s.phi(), Conductance::new(1, 7));
        assert_eq!(s.phi().to_string(), "0.14285714");
        assert_eq!(s.phi_max_form().unwrap(), Conductance::new(1, 7));
    }

    #[test]
    fn empty_set_is_valid_but_undefined() {
        let g = barbell();
        let s = PartitionState::from_membership(&g, vec![false; 6]).unwrap();
        assert_eq!((s.cut(), s.vol_in(), s.vol_out()), (0, 0, 14));
        assert_eq!(s.phi(), Conductance::Undefined);
        assert_eq!(s.phi_max_form(), Err(EngineError::UndefinedPartition));
        let full = PartitionState::from_membership(&g, vec![true; 6]).unwrap();
        assert_eq!(full.phi(), Conductance::Undefined);
    }

    #[test]
    fn length_mismatch() {
        let g = triangle();
        assert_eq!(
            PartitionState::from_membership(&g, vec![true; 2]).unwrap_err(),
            EngineError::LengthMismatch {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn max_form_on_triangle() {
        let g = triangle();
        let s = PartitionState::from_membership(&g, bits(3, &[0])).unwrap();
        assert_eq!(s.phi_max_form().unwrap(), Conductance::new(1, 1));
    }

    #[test]
    fn barbell_bridge_endpoint_leaves() {
        let g = barbell();
        let s = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        let d = s.eval_flip(2);
        assert_eq!((d.cut, d.vol_in, d.vol_out), (2, 4, 10));
        assert_eq!(d.phi(), Conductance::new(2, 4));
        assert_eq!(s.improvement_predicate(&d), Ok(false));
    }

    #[test]
    fn flip_is_an_involution() {
        let g = barbell();
        let original = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        let mut s = original.clone();
        s.apply_flip(4);
        let back = s.eval_flip(4);
        assert_eq!(
            (back.cut, back.vol_in, back.vol_out),
            (original.cut(), original.vol_in(), original.vol_out())
        );
        s.apply_flip(4);
        assert_eq!(s, original);
    }

    #[test]
    fn triangle_apply_flip() {
        let g = triangle();
        let mut s = PartitionState::from_membership(&g, bits(3, &[0])).unwrap();
        s.apply_flip(1);
        assert_eq!(s.membership(), &[true, true, false]);
        assert_eq!((s.cut(), s.vol_in(), s.vol_out()), (2, 4, 2));
        assert!(s.matches_recomputation());
    }

    #[test]
    fn path_swap_ends() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut s = PartitionState::from_membership(&g, bits(3, &[0])).unwrap();
        let d = s.eval_swap(0, 2).unwrap();
        assert_eq!((d.cut, d.vol_in, d.vol_out), (1, 1, 3));
        assert_eq!(d.phi(), Conductance::new(1, 1));
        s.apply_swap(0, 2).unwrap();
        assert_eq!(s.membership(), &[false, false, true]);
        assert!(s.matches_recomputation());
    }

    #[test]
    fn swap_on_same_side_is_rejected() {
        let g = barbell();
        let mut s = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        assert_eq!(s.eval_swap(0, 1), Err(EngineError::SameSide { u: 0, w: 1 }));
        assert!(s.apply_swap(4, 5).is_err());
    }

    #[test]
    fn non_adjacent_swap_equals_two_flips() {
        let g = barbell();
        let s = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        let swap = s.eval_swap(0, 5).unwrap();
        let mut t = s.clone();
        t.apply_flip(0);
        let second = t.eval_flip(5);
        assert_eq!(
            (swap.cut, swap.vol_in, swap.vol_out),
            (second.cut, second.vol_in, second.vol_out)
        );
    }

    #[test]
    fn adjacent_swap_corrects_shared_edge() {
        // bridge endpoints 2 and 3 are adjacent
        let g = barbell();
        let s = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        let d = s.eval_swap(2, 3).unwrap();
        let swapped = PartitionState::from_membership(&g, bits(6, &[0, 1, 3])).unwrap();
        assert_eq!(
            (d.cut, d.vol_in, d.vol_out),
            (swapped.cut(), swapped.vol_in(), swapped.vol_out())
        );
        assert_eq!(d.cut, 5);
    }

    #[test]
    fn swap_is_an_involution() {
        let g = barbell();
        let original = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        let mut s = original.clone();
        s.apply_swap(2, 3).unwrap();
        s.apply_swap(2, 3).unwrap();
        assert_eq!(s, original);
    }

    #[test]
    fn identity_delta_is_a_stagnation() {
        let g = barbell();
        let s = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        let same = MoveDelta {
            mv: Move::Flip(0),
            cut: s.cut(),
            vol_in: s.vol_in(),
            vol_out: s.vol_out(),
        };
        assert_eq!(s.improvement_predicate(&same), Ok(true));
    }

    #[test]
    fn predicate_needs_positive_cut() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let s = PartitionState::from_membership(&g, bits(4, &[0, 1])).unwrap();
        assert_eq!(s.cut(), 0);
        assert_eq!(
            s.improvement_predicate(&s.eval_flip(0)),
            Err(EngineError::UndefinedPhi)
        );
    }

    #[test]
    fn side_lists_track_membership() {
        let g = barbell();
        let mut s = PartitionState::from_membership(&g, bits(6, &[0, 1, 2])).unwrap();
        for v in [0, 3, 2, 5, 0, 1] {
            s.apply_flip(v);
            assert!(s.matches_recomputation());
            assert_eq!(s.size_in(), s.membership().iter().filter(|&&b| b).count());
        }
    }

    #[test]
    fn direct_evaluation_agrees() {
        let g = barbell();
        assert_eq!(
            conductance_of(&g, &bits(6, &[0, 1, 2])),
            Conductance::new(1, 7)
        );
        assert_eq!(conductance_of(&g, &[false; 6]), Conductance::Undefined);
    }
}
