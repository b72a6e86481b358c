//! Maximum matching in general graphs and Tutte-condition witnesses.
//!
//! The engine is Edmonds' blossom algorithm with blossom bases kept in a
//! union–find structure. After a greedy start, one alternating search is run
//! from every exposed vertex in id order; a vertex that fails once can never
//! be matched later, so a single pass gives a maximum matching.
//!
//! Witnesses come from the Gallai–Edmonds decomposition: with `D` the
//! vertices reachable from an exposed vertex by an even alternating path and
//! `A = N(D) \ D`, the graph `G - A` has exactly `|A| + deficiency` odd
//! components.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingResult {
    pub n: usize,
    /// Matched pairs `(u, v)` with `u < v`, sorted.
    pub matching: Vec<(usize, usize)>,
    pub size: usize,
    /// `n - 2 * size`: the number of exposed vertices.
    pub deficiency: usize,
    /// A set `U` with more than `|U|` odd components in `G - U`; present
    /// exactly when the graph has no perfect matching.
    pub tutte_witness: Option<VertexSet>,
}

impl MatchingResult {
    /// True when the matching has `⌊n/2⌋` edges.
    pub fn is_optimal(&self) -> bool {
        self.size == self.n / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.deficiency == 0
    }

    /// The vertices left exposed.
    pub fn exposed(&self) -> VertexSet {
        let mut covered = vec![false; self.n];
        for &(u, v) in &self.matching {
            covered[u] = true;
            covered[v] = true;
        }
        let free: Vec<bool> = covered.iter().map(|&c| !c).collect();
        VertexSet::from_mask(&free)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    Free,
    Even,
    Odd,
}

enum Found {
    /// An exposed unlabelled vertex `w` with `p[w]` set.
    Exposed(usize),
    /// An edge between even vertices of two different trees.
    Bridge(usize, usize),
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<u32>,
    label: Vec<Label>,
    parent: Vec<u32>,
    base: Vec<u32>,
    root: Vec<u32>,
    seen: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph, mate: Vec<u32>) -> Self {
        let n = g.n();
        Self {
            g,
            mate,
            label: vec![Label::Free; n],
            parent: vec![NONE; n],
            base: (0..n as u32).collect(),
            root: vec![NONE; n],
            seen: vec![0; n],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.base[r] as usize != r {
            r = self.base[r] as usize;
        }
        let mut x = v;
        while self.base[x] as usize != r {
            let next = self.base[x] as usize;
            self.base[x] = r as u32;
            x = next;
        }
        r
    }

    fn mate(&self, v: usize) -> Option<usize> {
        let m = self.mate[v];
        (m != NONE).then_some(m as usize)
    }

    fn reset(&mut self, touched: &[usize]) {
        for &v in touched {
            self.label[v] = Label::Free;
            self.parent[v] = NONE;
            self.base[v] = v as u32;
            self.root[v] = NONE;
        }
        self.queue.clear();
    }

    /// Base of the smallest blossom containing both `a` and `b`.
    fn lca(&mut self, a: usize, b: usize) -> usize {
        self.stamp += 1;
        let mut a = a;
        loop {
            a = self.find(a);
            self.seen[a] = self.stamp;
            match self.mate(a) {
                None => break,
                Some(m) => a = self.parent[m] as usize,
            }
        }
        let mut b = b;
        loop {
            b = self.find(b);
            if self.seen[b] == self.stamp {
                return b;
            }
            b = self.parent[self.mate(b).expect("tree vertices below the root are matched")] as usize;
        }
    }

    /// Walks from `v` up to the base `b`, pointing even-side vertices back
    /// across the blossom and queueing odd ones. Bases to merge are pushed
    /// to `merge`; merging early would cut the walk short inside contracted
    /// sub-blossoms.
    fn mark_path(
        &mut self,
        mut v: usize,
        b: usize,
        mut child: usize,
        merge: &mut Vec<usize>,
        touched: &mut Vec<usize>,
    ) {
        while self.find(v) != b {
            let m = self.mate(v).expect("blossom path vertices are matched");
            let bv = self.find(v);
            let bm = self.find(m);
            merge.push(bv);
            merge.push(bm);
            self.parent[v] = child as u32;
            child = m;
            if self.label[m] == Label::Odd {
                self.label[m] = Label::Even;
                self.queue.push_back(m);
                touched.push(m);
            }
            v = self.parent[m] as usize;
        }
    }

    /// Grows an alternating forest from `roots` (all exposed). Labels and
    /// parents remain set for the caller; `touched` lists every vertex whose
    /// state changed.
    fn search(&mut self, roots: &[usize], touched: &mut Vec<usize>) -> Option<Found> {
        for &r in roots {
            self.label[r] = Label::Even;
            self.root[r] = r as u32;
            self.queue.push_back(r);
            touched.push(r);
        }
        let g = self.g;
        while let Some(v) = self.queue.pop_front() {
            for &w in g.neighbors(v) {
                let w = w as usize;
                if self.find(v) == self.find(w) || self.label[w] == Label::Odd {
                    continue;
                }
                match self.label[w] {
                    Label::Free => {
                        self.parent[w] = v as u32;
                        touched.push(w);
                        let Some(m) = self.mate(w) else {
                            return Some(Found::Exposed(w));
                        };
                        self.label[w] = Label::Odd;
                        self.root[w] = self.root[v];
                        self.label[m] = Label::Even;
                        self.root[m] = self.root[v];
                        touched.push(m);
                        self.queue.push_back(m);
                    }
                    Label::Even if self.root[w] != self.root[v] => return Some(Found::Bridge(v, w)),
                    Label::Even => {
                        let b = self.lca(v, w);
                        let mut merge = Vec::new();
                        self.mark_path(v, b, w, &mut merge, touched);
                        self.mark_path(w, b, v, &mut merge, touched);
                        for x in merge {
                            self.base[x] = b as u32;
                        }
                    }
                    Label::Odd => unreachable!(),
                }
            }
        }
        None
    }

    /// Flips the alternating path that enters at `w` (odd side, `parent[w]`
    /// set) and runs back to the root.
    fn flip_from(&mut self, mut v: usize) {
        while v != NONE as usize {
            let pv = self.parent[v] as usize;
            let next = self.mate[pv];
            self.mate[v] = pv as u32;
            self.mate[pv] = v as u32;
            v = next as usize;
        }
    }

    /// Flips the path from the even vertex `x` back to its root, leaving `x`
    /// to be matched by the caller.
    fn flip_above(&mut self, x: usize) {
        if let Some(m) = self.mate(x) {
            self.flip_from(m);
        }
    }

    fn augment(&mut self, found: Found) {
        match found {
            Found::Exposed(w) => self.flip_from(w),
            Found::Bridge(v, w) => {
                self.flip_above(v);
                self.flip_above(w);
                self.mate[v] = w as u32;
                self.mate[w] = v as u32;
            }
        }
    }
}

/// Matches low-degree vertices first, each to its lowest-degree free
/// neighbour (ties by id).
fn greedy(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut mate = vec![NONE; n];
    for v in order {
        if mate[v] != NONE {
            continue;
        }
        let best =
            g.neighbors(v).iter().map(|&w| w as usize).filter(|&w| mate[w] == NONE).min_by_key(|&w| (g.degree(w), w));
        if let Some(w) = best {
            mate[v] = w as u32;
            mate[w] = v as u32;
        }
    }
    mate
}

fn pairs(mate: &[u32]) -> Vec<(usize, usize)> {
    mate.iter().enumerate().filter(|&(v, &m)| m != NONE && v < m as usize).map(|(v, &m)| (v, m as usize)).collect()
}

/// Gallai–Edmonds barrier `A = N(D) \ D` for a maximum matching given by
/// `mate`, or `NotMaximum` when the forest exposes an augmenting path.
fn barrier(g: &Graph, mate: Vec<u32>) -> Result<VertexSet> {
    let n = g.n();
    let roots: Vec<usize> = (0..n).filter(|&v| mate[v] == NONE).collect();
    let mut b = Blossom::new(g, mate);
    let mut touched = Vec::new();
    if b.search(&roots, &mut touched).is_some() {
        return Err(Error::NotMaximum);
    }
    let even: Vec<bool> = b.label.iter().map(|&l| l == Label::Even).collect();
    let mut in_a = vec![false; n];
    for v in (0..n).filter(|&v| even[v]) {
        for &w in g.neighbors(v) {
            if !even[w as usize] {
                in_a[w as usize] = true;
            }
        }
    }
    Ok(VertexSet::from_mask(&in_a))
}

fn witness_for(g: &Graph, mate: &[u32], deficiency: usize) -> Result<Option<VertexSet>> {
    if deficiency == 0 {
        return Ok(None);
    }
    let a = barrier(g, mate.to_vec())?;
    let odd = g.components_minus(&a)?.odd_count;
    debug_assert_eq!(odd, a.len() + deficiency);
    if odd <= a.len() {
        return Err(Error::NotMaximum);
    }
    Ok(Some(a))
}

/// A maximum matching together with a Tutte witness whenever the graph has
/// no perfect matching.
pub fn max_matching(g: &Graph) -> MatchingResult {
    let n = g.n();
    let mut b = Blossom::new(g, greedy(g));
    let mut touched = Vec::new();
    for v in 0..n {
        if b.mate[v] != NONE {
            continue;
        }
        touched.clear();
        if let Some(found) = b.search(&[v], &mut touched) {
            b.augment(found);
        }
        let t = std::mem::take(&mut touched);
        b.reset(&t);
        touched = t;
    }
    let matching = pairs(&b.mate);
    let size = matching.len();
    let deficiency = n - 2 * size;
    let tutte_witness = witness_for(g, &b.mate, deficiency).expect("the matching is maximum");
    MatchingResult { n, matching, size, deficiency, tutte_witness }
}

/// True iff the graph has a matching with `⌊n/2⌋` edges.
pub fn has_optimal_matching(g: &Graph) -> bool {
    max_matching(g).is_optimal()
}

/// Recomputes the Tutte witness from the matching in `result`, which must be
/// a maximum matching of `g`. Returns `None` when the matching is perfect.
pub fn tutte_witness_from_deficiency(g: &Graph, result: &MatchingResult) -> Result<Option<VertexSet>> {
    let n = g.n();
    if result.n != n {
        return Err(Error::VertexCountMismatch { expected: n, found: result.n });
    }
    let mut mate = vec![NONE; n];
    for &(u, v) in &result.matching {
        if u >= n || v >= n {
            return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
        }
        if !g.has_edge(u, v) {
            return Err(Error::EdgeNotInHost(u, v));
        }
        if mate[u] != NONE || mate[v] != NONE {
            return Err(Error::InvalidParameter(format!("matching edges share a vertex at ({u}, {v})")));
        }
        mate[u] = v as u32;
        mate[v] = u as u32;
    }
    let deficiency = n - 2 * result.matching.len();
    if deficiency > 0 {
        // An augmenting path exists iff the multi-root forest finds one.
        barrier(g, mate.clone())?;
    }
    witness_for(g, &mate, deficiency)
}

/// Largest `n` accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MATCHING_LIMIT: usize = 16;

/// Exact maximum matching size by memoised recursion over vertex subsets.
pub fn brute_force_matching(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_MATCHING_LIMIT {
        return Err(Error::TooLarge { what: "brute_force_matching", n, limit: BRUTE_FORCE_MATCHING_LIMIT });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    // best[S]: maximum matching of G[S], filled in increasing order of S.
    let mut best = vec![0u8; 1 << n];
    for s in 1u32..(1 << n) {
        let v = s.trailing_zeros() as usize;
        let rest = s & !(1 << v);
        let mut value = best[rest as usize];
        let mut partners = adj[v] & rest;
        while partners != 0 {
            let w = partners.trailing_zeros();
            partners &= partners - 1;
            value = value.max(1 + best[(rest & !(1 << w)) as usize]);
        }
        best[s as usize] = value;
    }
    Ok(best[(1usize << n) - 1] as usize)
}
