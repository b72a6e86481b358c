//! Immutable simple undirected graphs and the set-level primitives used
//! throughout the crate: neighbourhoods of sets, edge counts between sets,
//! residual graphs, components after vertex deletion and degree orderings.
//!
//! Vertices are the dense integers `0..n`. Adjacency is stored in compressed
//! sparse row form with every neighbour list sorted ascending, so edge
//! membership is a binary search and edges enumerate in lexicographic order.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A simple undirected graph on the vertex set `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

/// A subset of `0..n`, stored as a sorted list of distinct ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    ids: Vec<usize>,
}

/// `e` counts edges with one endpoint in `X` and the other in `Y` once;
/// `e_prime` additionally counts edges inside `X ∩ Y` a second time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCounts {
    pub e: usize,
    pub e_prime: usize,
}

/// Connected components of `G - U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub sets: Vec<VertexSet>,
    pub odd_count: usize,
}

/// Degrees sorted increasingly, plus the vertex ordering `v_1, ..., v_n` with
/// non-increasing degrees (ties broken by ascending id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub increasing: Vec<usize>,
    pub decreasing_order: Vec<usize>,
}

impl VertexSet {
    /// Builds a set from arbitrary ids; duplicates are merged.
    pub fn new(n: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        if let Some(&bad) = ids.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        ids.sort_unstable();
        ids.dedup();
        Ok(Self { n, ids })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, ids: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, ids: (0..n).collect() }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        let ids = mask.iter().enumerate().filter_map(|(v, &m)| m.then_some(v)).collect();
        Self { n: mask.len(), ids }
    }

    pub(crate) fn from_sorted_unchecked(n: usize, ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(ids.last().is_none_or(|&v| v < n));
        Self { n, ids }
    }

    /// Size of the universe `0..n` this set lives in.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.ids.iter().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &v in &self.ids {
            mask[v] = true;
        }
        mask
    }

    pub fn complement(&self) -> Self {
        let mask = self.mask();
        Self::from_mask(&mask.iter().map(|&m| !m).collect::<Vec<_>>())
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut ids: Vec<usize> = self.ids.iter().chain(&other.ids).copied().collect();
        ids.sort_unstable();
        ids.dedup();
        Self { n: self.n.max(other.n), ids }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let ids = self.iter().filter(|&v| other.contains(v)).collect();
        Self { n: self.n, ids }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let ids = self.iter().filter(|&v| !other.contains(v)).collect();
        Self { n: self.n, ids }
    }

    /// First common element, if any.
    pub fn common_element(&self, other: &Self) -> Option<usize> {
        self.iter().find(|&v| other.contains(v))
    }

    fn check_universe(&self, n: usize) -> Result<()> {
        match self.ids.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.ids.serialize(serializer)
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { offsets: vec![0; n + 1], adj: Vec::new() }
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adj = Vec::with_capacity(n * n.saturating_sub(1));
        offsets.push(0);
        for v in 0..n {
            adj.extend((0..n as u32).filter(|&w| w as usize != v));
            offsets.push(adj.len());
        }
        Self { offsets, adj }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate edges
    /// and out-of-range endpoints. Edge orientation is irrelevant.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("n = {n} exceeds u32 range")));
        }
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            pairs.push((u.min(v) as u32, u.max(v) as u32));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        Ok(Self::from_sorted_pairs(n, &pairs))
    }

    /// `pairs` must be strictly increasing in lexicographic order with `u < v`.
    pub(crate) fn from_sorted_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            debug_assert!(u < v && (v as usize) < n);
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adj = vec![0u32; 2 * pairs.len()];
        // Lexicographic order fills every list in ascending order: the lower
        // neighbours of w arrive from earlier rows before w's own row.
        for &(u, v) in pairs {
            adj[fill[u as usize]] = v;
            fill[u as usize] += 1;
            adj[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        Self { offsets, adj }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() || u == v {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            let nb = self.neighbors(u);
            let start = nb.partition_point(|&w| (w as usize) <= u);
            nb[start..].iter().map(move |&w| (u, w as usize))
        })
    }

    fn check_set(&self, set: &VertexSet) -> Result<()> {
        set.check_universe(self.n())
    }

    /// `N_G(A)`: every vertex with at least one neighbour in `A`. Members of
    /// `A` adjacent to other members of `A` are included.
    pub fn neighborhood(&self, a: &VertexSet) -> Result<VertexSet> {
        self.check_set(a)?;
        let n = self.n();
        let mut hit = vec![false; n];
        if a.len() * 8 >= n {
            // Dense sets: scan each vertex's list until it meets A.
            let in_a = a.mask();
            for (v, h) in hit.iter_mut().enumerate() {
                *h = self.neighbors(v).iter().any(|&w| in_a[w as usize]);
            }
        } else {
            for x in a.iter() {
                for &w in self.neighbors(x) {
                    hit[w as usize] = true;
                }
            }
        }
        Ok(VertexSet::from_mask(&hit))
    }

    /// `e_G(X, Y)` and `e'_G(X, Y) = e_G(X, Y) + e_G(X ∩ Y)`.
    pub fn edge_counts(&self, x: &VertexSet, y: &VertexSet) -> Result<EdgeCounts> {
        self.check_set(x)?;
        self.check_set(y)?;
        let in_y = y.mask();
        let mut e_prime = 0usize;
        let mut twice_inside = 0usize;
        for u in x.iter() {
            let u_in_y = in_y[u];
            for &w in self.neighbors(u) {
                if in_y[w as usize] {
                    e_prime += 1;
                    if u_in_y && x.contains(w as usize) {
                        twice_inside += 1;
                    }
                }
            }
        }
        Ok(EdgeCounts { e: e_prime - twice_inside / 2, e_prime })
    }

    /// `e_G(A)`: edges with both endpoints in `A`.
    pub fn edges_inside(&self, a: &VertexSet) -> Result<usize> {
        self.check_set(a)?;
        let in_a = a.mask();
        let twice: usize = a.iter().map(|u| self.neighbors(u).iter().filter(|&&w| in_a[w as usize]).count()).sum();
        Ok(twice / 2)
    }

    /// `e_G(v, A)`.
    pub fn degree_into(&self, v: usize, in_a: &[bool]) -> usize {
        self.neighbors(v).iter().filter(|&&w| in_a[w as usize]).count()
    }

    /// Splits `E(G)` by a symmetric predicate on `(u, v)`, `u < v`: edges
    /// satisfying it go to the first graph, the rest to the second.
    pub fn partition_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> (Graph, Graph) {
        let n = self.n();
        let (mut off_a, mut off_b) = (Vec::with_capacity(n + 1), Vec::with_capacity(n + 1));
        let (mut adj_a, mut adj_b) = (Vec::new(), Vec::new());
        off_a.push(0);
        off_b.push(0);
        for v in 0..n {
            for &w in self.neighbors(v) {
                let (lo, hi) = (v.min(w as usize), v.max(w as usize));
                if keep(lo, hi) {
                    adj_a.push(w);
                } else {
                    adj_b.push(w);
                }
            }
            off_a.push(adj_a.len());
            off_b.push(adj_b.len());
        }
        (Graph { offsets: off_a, adj: adj_a }, Graph { offsets: off_b, adj: adj_b })
    }

    /// `G \ H`. Every edge of `H` must be an edge of `G`.
    pub fn subtract(&self, h: &Graph) -> Result<Graph> {
        if h.n() != self.n() {
            return Err(Error::VertexCountMismatch { expected: self.n(), found: h.n() });
        }
        let mut offsets = Vec::with_capacity(self.n() + 1);
        let mut adj = Vec::with_capacity(self.adj.len().saturating_sub(h.adj.len()));
        offsets.push(0);
        for v in 0..self.n() {
            let (g_nb, h_nb) = (self.neighbors(v), h.neighbors(v));
            let mut j = 0;
            for &w in g_nb {
                if j < h_nb.len() && h_nb[j] == w {
                    j += 1;
                } else {
                    if j < h_nb.len() && h_nb[j] < w {
                        return Err(Error::EdgeNotInHost(v, h_nb[j] as usize));
                    }
                    adj.push(w);
                }
            }
            if j < h_nb.len() {
                return Err(Error::EdgeNotInHost(v, h_nb[j] as usize));
            }
            offsets.push(adj.len());
        }
        Ok(Graph { offsets, adj })
    }

    /// `G ∪ H` on the common vertex set.
    pub fn union(&self, h: &Graph) -> Result<Graph> {
        if h.n() != self.n() {
            return Err(Error::VertexCountMismatch { expected: self.n(), found: h.n() });
        }
        let mut offsets = Vec::with_capacity(self.n() + 1);
        let mut adj = Vec::with_capacity(self.adj.len() + h.adj.len());
        offsets.push(0);
        for v in 0..self.n() {
            let (a, b) = (self.neighbors(v), h.neighbors(v));
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let next = match (a.get(i), b.get(j)) {
                    (Some(&x), Some(&y)) if x == y => {
                        i += 1;
                        j += 1;
                        x
                    }
                    (Some(&x), Some(&y)) if x < y => {
                        i += 1;
                        x
                    }
                    (Some(_), Some(&y)) => {
                        j += 1;
                        y
                    }
                    (Some(&x), None) => {
                        i += 1;
                        x
                    }
                    (None, Some(&y)) => {
                        j += 1;
                        y
                    }
                    (None, None) => unreachable!(),
                };
                adj.push(next);
            }
            offsets.push(adj.len());
        }
        Ok(Graph { offsets, adj })
    }

    /// True iff every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    /// Components of `G - U` and how many of them have odd order.
    pub fn components_minus(&self, u: &VertexSet) -> Result<Components> {
        self.check_set(u)?;
        let n = self.n();
        let mut seen = u.mask();
        let mut sets = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &w in self.neighbors(x) {
                    let w = w as usize;
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            sets.push(VertexSet::from_sorted_unchecked(n, comp));
        }
        let odd_count = sets.iter().filter(|c| c.len() % 2 == 1).count();
        Ok(Components { sets, odd_count })
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &w in self.neighbors(x) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w as usize);
                    }
                }
            }
        }
        count
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let degrees = self.degrees();
        let mut decreasing_order: Vec<usize> = (0..self.n()).collect();
        decreasing_order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
        let mut increasing = degrees;
        increasing.sort_unstable();
        DegreeSequence { increasing, decreasing_order }
    }

    /// `δ_G(A)`: the smallest degree (into all of `V`) among vertices of `A`.
    pub fn min_degree_on(&self, a: &VertexSet) -> Result<usize> {
        self.check_set(a)?;
        a.iter().map(|v| self.degree(v)).min().ok_or(Error::EmptySet)
    }

    /// Induced subgraph on `keep`, relabelled to `0..keep.len()` in id order.
    pub fn induced(&self, keep: &VertexSet) -> Result<Graph> {
        self.check_set(keep)?;
        let mut index = vec![u32::MAX; self.n()];
        for (i, v) in keep.iter().enumerate() {
            index[v] = i as u32;
        }
        let mut pairs = Vec::new();
        for (u, v) in self.edges() {
            if index[u] != u32::MAX && index[v] != u32::MAX {
                pairs.push((index[u], index[v]));
            }
        }
        pairs.sort_unstable();
        Ok(Self::from_sorted_pairs(keep.len(), &pairs))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n()).field("m", &self.m()).finish()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::new(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn neighborhood_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.neighborhood(&set(4, &[0])).unwrap().ids(), &[1, 2, 3]);

        let tri = Graph::complete(3);
        assert_eq!(tri.neighborhood(&set(3, &[0, 1])).unwrap().ids(), &[0, 1, 2]);

        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(g.neighborhood(&set(3, &[2])).unwrap().is_empty());
    }

    #[test]
    fn neighborhood_rejects_out_of_range() {
        let g = Graph::complete(3);
        let bad = VertexSet::new(5, [4]).unwrap();
        assert!(matches!(g.neighborhood(&bad), Err(Error::VertexOutOfRange { vertex: 4, n: 3 })));
    }

    #[test]
    fn edge_count_examples() {
        let k3 = Graph::complete(3);
        let v = VertexSet::full(3);
        assert_eq!(k3.edge_counts(&v, &v).unwrap(), EdgeCounts { e: 3, e_prime: 6 });

        let c4 = cycle(4);
        let c = c4.edge_counts(&set(4, &[0, 1]), &set(4, &[2, 3])).unwrap();
        assert_eq!(c, EdgeCounts { e: 2, e_prime: 2 });
    }

    #[test]
    fn subtract_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.subtract(&k4).unwrap(), Graph::empty(4));
        assert_eq!(k4.subtract(&Graph::empty(4)).unwrap(), k4);

        let pm = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let c4 = Graph::from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(k4.subtract(&pm).unwrap(), c4);
    }

    #[test]
    fn subtract_rejects_foreign_edge() {
        let g = path(4);
        let h = Graph::from_edges(4, [(0, 3)]).unwrap();
        assert!(matches!(g.subtract(&h), Err(Error::EdgeNotInHost(0, 3))));
        let h = Graph::from_edges(5, [(0, 1)]).unwrap();
        assert!(matches!(g.subtract(&h), Err(Error::VertexCountMismatch { .. })));
    }

    #[test]
    fn components_examples() {
        let star = star(3);
        let c = star.components_minus(&set(4, &[0])).unwrap();
        assert_eq!((c.sets.len(), c.odd_count), (3, 3));

        let c4 = cycle(4);
        assert_eq!(c4.components_minus(&VertexSet::empty(4)).unwrap().sets.len(), 1);

        let c6 = cycle(6);
        let c = c6.components_minus(&set(6, &[0, 3])).unwrap();
        assert_eq!(c.sets.len(), 2);
        assert!(c.sets.iter().all(|s| s.len() == 2));
        assert_eq!(c.odd_count, 0);
    }

    #[test]
    fn degree_sequence_examples() {
        assert_eq!(Graph::complete(4).degree_sequence().increasing, vec![3; 4]);
        assert_eq!(path(3).degree_sequence().increasing, vec![1, 1, 2]);
        assert_eq!(petersen().degree_sequence().increasing, vec![3; 10]);
        // ties by ascending id
        assert_eq!(path(4).degree_sequence().decreasing_order, vec![1, 2, 0, 3]);
    }

    #[test]
    fn min_degree_on_examples() {
        assert_eq!(Graph::complete(4).min_degree_on(&VertexSet::full(4)).unwrap(), 3);
        assert_eq!(star(3).min_degree_on(&set(4, &[1, 2, 3])).unwrap(), 1);
        assert_eq!(cycle(5).min_degree_on(&set(5, &[1, 3])).unwrap(), 2);
        assert!(matches!(cycle(5).min_degree_on(&VertexSet::empty(5)), Err(Error::EmptySet)));
    }

    #[test]
    fn from_edges_rejects_malformed_input() {
        assert!(matches!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(Graph::from_edges(3, [(0, 1), (1, 0)]), Err(Error::DuplicateEdge(0, 1))));
        assert!(matches!(Graph::from_edges(3, [(0, 3)]), Err(Error::VertexOutOfRange { vertex: 3, n: 3 })));
    }

    #[test]
    fn dense_and_sparse_neighborhoods_agree() {
        let g = petersen();
        for bits in 0u32..(1 << 10) {
            let a = VertexSet::new(10, (0..10).filter(|i| bits >> i & 1 == 1)).unwrap();
            let mut expected = vec![false; 10];
            for x in a.iter() {
                for &w in g.neighbors(x) {
                    expected[w as usize] = true;
                }
            }
            assert_eq!(g.neighborhood(&a).unwrap(), VertexSet::from_mask(&expected));
        }
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..24).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    fn arb_graph_and_sets() -> impl Strategy<Value = (Graph, VertexSet, VertexSet)> {
        arb_graph().prop_flat_map(|g| {
            let n = g.n();
            (Just(g), proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(any::<bool>(), n))
                .prop_map(|(g, a, b)| (g, VertexSet::from_mask(&a), VertexSet::from_mask(&b)))
        })
    }

    proptest! {
        #[test]
        fn edge_count_symmetry((g, x, y) in arb_graph_and_sets()) {
            let xy = g.edge_counts(&x, &y).unwrap();
            let yx = g.edge_counts(&y, &x).unwrap();
            prop_assert_eq!(xy.e, yx.e);
            prop_assert_eq!(xy.e_prime, yx.e_prime);
            let xx = g.edge_counts(&x, &x).unwrap();
            prop_assert_eq!(xx.e_prime, 2 * g.edges_inside(&x).unwrap());
            let all = VertexSet::full(g.n());
            prop_assert_eq!(g.edge_counts(&all, &all).unwrap().e_prime, 2 * g.m());
            if x.intersection(&y).is_empty() {
                prop_assert_eq!(xy.e, xy.e_prime);
            }
        }

        #[test]
        fn neighborhood_bounded_by_degree_sum((g, a, _b) in arb_graph_and_sets()) {
            let nb = g.neighborhood(&a).unwrap().len();
            let sum: usize = a.iter().map(|v| g.degree(v)).sum();
            prop_assert!(nb <= sum);
            let in_a = a.mask();
            let shared = (0..g.n()).any(|v| g.degree_into(v, &in_a) >= 2);
            prop_assert_eq!(nb == sum, !shared);
        }

        #[test]
        fn components_partition((g, u, _b) in arb_graph_and_sets()) {
            let c = g.components_minus(&u).unwrap();
            let total: usize = c.sets.iter().map(|s| s.len()).sum();
            prop_assert_eq!(total, g.n() - u.len());
            prop_assert_eq!(c.odd_count % 2, (g.n() - u.len()) % 2);
            let mut seen = u.mask();
            for s in &c.sets {
                for v in s.iter() {
                    prop_assert!(!seen[v]);
                    seen[v] = true;
                }
            }
        }

        #[test]
        fn subtract_then_union_restores((g, a, _b) in arb_graph_and_sets()) {
            let mask = a.mask();
            let (h, rest) = g.partition_edges(|u, v| mask[u] || mask[v]);
            let residual = g.subtract(&h).unwrap();
            prop_assert_eq!(&residual, &rest);
            prop_assert_eq!(residual.union(&h).unwrap(), g.clone());
            prop_assert_eq!(h.m() + residual.m(), g.m());
        }
    }
}
