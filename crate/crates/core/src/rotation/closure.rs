//! Breadth-first rotation closure with a fixed endpoint.
//!
//! Every discovered endpoint `x` keeps the rotation that first reached it, so
//! its path `P_x` is fixed once and for all. Level `t + 1` consists of the
//! endpoints produced by one rotation of `P_x` for `x` at level `t`; within a
//! level, endpoints are processed in discovery order and pivots by ascending
//! id. Only edges of the base path may be broken.
//!
//! A rotation with pivot index `i` reverses the first `i` positions of the
//! current path. `P_x` is therefore the base path followed by a chain of
//! prefix reversals, and positions are mapped through the chain instead of
//! materialising every path.

use serde::Serialize;

use super::Path;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RotationRecord {
    pub endpoint: usize,
    pub level: usize,
    /// `None` for the initial endpoint `v_1`.
    pub parent: Option<usize>,
    pub pivot: Option<usize>,
    pub broken: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct RotationState {
    base: Path,
    base_pos: Vec<u32>,
    records: Vec<RotationRecord>,
    cuts: Vec<u32>,
    parents: Vec<u32>,
    slot: Vec<u32>,
    level_ends: Vec<usize>,
    rotations: u64,
    rotation_limit: u64,
    budget_hit: bool,
    complete: bool,
}

#[inline]
fn through(cut: u32, pos: u32) -> u32 {
    if pos < cut {
        cut - 1 - pos
    } else {
        pos
    }
}

impl RotationState {
    fn start(g: &Graph, base: Path, rotation_limit: u64) -> Self {
        let n = g.n();
        let mut base_pos = vec![NONE; n];
        for (i, &v) in base.vertices().iter().enumerate() {
            base_pos[v] = i as u32;
        }
        let mut slot = vec![NONE; n];
        slot[base.first()] = 0;
        let root = RotationRecord { endpoint: base.first(), level: 0, parent: None, pivot: None, broken: None };
        Self {
            base,
            base_pos,
            records: vec![root],
            cuts: vec![0],
            parents: vec![NONE],
            slot,
            level_ends: vec![1],
            rotations: 0,
            rotation_limit,
            budget_hit: false,
            complete: false,
        }
    }

    /// Cuts applied to the base path to obtain the path of record `r`, in order.
    fn chain(&self, mut r: u32) -> Vec<u32> {
        let mut chain = Vec::new();
        while self.parents[r as usize] != NONE {
            chain.push(self.cuts[r as usize]);
            r = self.parents[r as usize];
        }
        chain.reverse();
        chain
    }

    fn position(chain: &[u32], base_index: u32) -> u32 {
        chain.iter().fold(base_index, |pos, &c| through(c, pos))
    }

    fn base_index_at(chain: &[u32], position: u32) -> u32 {
        chain.iter().rev().fold(position, |pos, &c| through(c, pos))
    }

    /// Calls `found(pivot, new_endpoint, cut)` for every legal rotation of the
    /// path described by `chain`, pivots in ascending id order.
    fn for_each_rotation(&self, g: &Graph, x: usize, chain: &[u32], mut found: impl FnMut(usize, usize, u32) -> bool) {
        let len = self.base.len() as u32;
        let base = self.base.vertices();
        for &y in g.neighbors(x) {
            let by = self.base_pos[y as usize];
            if by == NONE {
                continue;
            }
            let i = Self::position(chain, by);
            if i < 2 || i + 2 > len {
                continue;
            }
            let bw = Self::base_index_at(chain, i - 1);
            if bw.abs_diff(by) != 1 {
                continue;
            }
            if !found(y as usize, base[bw as usize], i) {
                return;
            }
        }
    }

    fn run(
        &mut self,
        g: &Graph,
        max_levels: usize,
        mut stop: impl FnMut(&RotationState, usize) -> bool,
    ) -> Option<usize> {
        if stop(self, self.base.first()) {
            return Some(self.base.first());
        }
        let mut lo = 0;
        for level in 0..max_levels {
            let hi = self.records.len();
            if lo == hi {
                self.complete = true;
                return None;
            }
            for r in lo..hi {
                let x = self.records[r].endpoint;
                let chain = self.chain(r as u32);
                let mut fresh = Vec::new();
                let mut over_budget = false;
                self.for_each_rotation(g, x, &chain, |y, w, cut| {
                    if self.rotations + fresh.len() as u64 >= self.rotation_limit {
                        over_budget = true;
                        return false;
                    }
                    fresh.push((y, w, cut));
                    true
                });
                for (y, w, cut) in fresh {
                    self.rotations += 1;
                    if self.slot[w] != NONE {
                        continue;
                    }
                    self.slot[w] = self.records.len() as u32;
                    self.records.push(RotationRecord {
                        endpoint: w,
                        level: level + 1,
                        parent: Some(x),
                        pivot: Some(y),
                        broken: Some((w, y)),
                    });
                    self.cuts.push(cut);
                    self.parents.push(r as u32);
                    if stop(self, w) {
                        self.level_ends.push(self.records.len());
                        return Some(w);
                    }
                }
                if over_budget {
                    self.budget_hit = true;
                    self.level_ends.push(self.records.len());
                    return None;
                }
            }
            self.level_ends.push(self.records.len());
            lo = hi;
        }
        if lo == self.records.len() {
            self.complete = true;
        }
        None
    }

    /// Closure of `path` with `path.last()` fixed, stopping as soon as `stop`
    /// accepts a newly discovered endpoint (the initial endpoint included).
    pub(crate) fn explore(
        g: &Graph,
        path: Path,
        max_levels: usize,
        rotation_limit: u64,
        stop: impl FnMut(&RotationState, usize) -> bool,
    ) -> (Self, Option<usize>) {
        let mut state = Self::start(g, path, rotation_limit);
        let hit = state.run(g, max_levels, stop);
        (state, hit)
    }

    pub fn base_path(&self) -> &Path {
        &self.base
    }

    pub fn fixed_endpoint(&self) -> usize {
        self.base.last()
    }

    /// Records in discovery order.
    pub fn records(&self) -> &[RotationRecord] {
        &self.records
    }

    pub fn record(&self, x: usize) -> Option<&RotationRecord> {
        match self.slot.get(x) {
            Some(&s) if s != NONE => Some(&self.records[s as usize]),
            _ => None,
        }
    }

    pub fn is_discovered(&self, x: usize) -> bool {
        self.record(x).is_some()
    }

    /// Number of computed levels; `R^0 ⊆ R^1 ⊆ ... ⊆ R^{levels-1}`.
    pub fn levels(&self) -> usize {
        self.level_ends.len()
    }

    /// `|R^t|`, saturating at the last computed level.
    pub fn level_size(&self, t: usize) -> usize {
        self.level_ends[t.min(self.level_ends.len() - 1)]
    }

    /// `R^t` as a set.
    pub fn level(&self, t: usize) -> VertexSet {
        let end = self.level_size(t);
        VertexSet::new(self.base_pos.len(), self.records[..end].iter().map(|r| r.endpoint))
            .expect("endpoints are vertices")
    }

    /// All discovered endpoints.
    pub fn endpoints(&self) -> VertexSet {
        VertexSet::new(self.base_pos.len(), self.records.iter().map(|r| r.endpoint)).expect("endpoints are vertices")
    }

    pub fn endpoint_count(&self) -> usize {
        self.records.len()
    }

    pub fn rotations(&self) -> u64 {
        self.rotations
    }

    pub fn budget_exhausted(&self) -> bool {
        self.budget_hit
    }

    /// True when the closure ran until no new endpoint appeared.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// The fixed path `P_x`, starting at `x` and ending at the fixed endpoint.
    pub fn path_to(&self, x: usize) -> Result<Path> {
        let s = match self.slot.get(x) {
            Some(&s) if s != NONE => s,
            _ => return Err(Error::UndiscoveredEndpoint(x)),
        };
        let mut v = self.base.vertices().to_vec();
        for c in self.chain(s) {
            v[..c as usize].reverse();
        }
        Ok(Path::from_vec_unchecked(v))
    }

    /// Endpoints of single legal rotations of `P_a`.
    pub(crate) fn one_step(&self, g: &Graph, a: usize) -> Result<Vec<usize>> {
        let s = match self.slot.get(a) {
            Some(&s) if s != NONE => s,
            _ => return Err(Error::UndiscoveredEndpoint(a)),
        };
        let chain = self.chain(s);
        let mut out = Vec::new();
        self.for_each_rotation(g, a, &chain, |_, w, _| {
            out.push(w);
            true
        });
        Ok(out)
    }

    /// Broken base edges per interval when the base path is cut into `k`
    /// near-equal consecutive intervals of edges. Diagnostic only.
    pub fn broken_edge_segments(&self, k: usize) -> Vec<usize> {
        let edges = self.base.len().saturating_sub(1);
        let k = k.max(1);
        let mut counts = vec![0; k];
        if edges == 0 {
            return counts;
        }
        for r in &self.records {
            if let Some((a, b)) = r.broken {
                let e = self.base_pos[a].min(self.base_pos[b]) as usize;
                counts[e * k / edges] += 1;
            }
        }
        counts
    }

    /// Checks every record: `P_x` is a permutation of the base vertices from
    /// `x` to the fixed endpoint whose consecutive pairs are edges of
    /// `G ∪ P`, and every broken edge is a base edge.
    pub fn check_invariants(&self, g: &Graph) -> Result<()> {
        let base_graph = self.base.as_graph(g.n());
        let mut sorted_base = self.base.vertices().to_vec();
        sorted_base.sort_unstable();
        for r in &self.records {
            let p = self.path_to(r.endpoint)?;
            if p.first() != r.endpoint || p.last() != self.fixed_endpoint() {
                return Err(Error::InvalidPath(format!("P_{} has the wrong endpoints", r.endpoint)));
            }
            let mut sorted = p.vertices().to_vec();
            sorted.sort_unstable();
            if sorted != sorted_base {
                return Err(Error::InvalidPath(format!("P_{} changed the vertex set", r.endpoint)));
            }
            if let Some((a, b)) = p.edges().find(|&(a, b)| !g.has_edge(a, b) && !base_graph.has_edge(a, b)) {
                return Err(Error::InvalidPath(format!("P_{} uses non-edge {a}-{b}", r.endpoint)));
            }
            if let Some((a, b)) = r.broken {
                if !base_graph.has_edge(a, b) {
                    return Err(Error::InvalidRotation(format!("broken edge {a}-{b} is not a base edge")));
                }
            }
        }
        Ok(())
    }
}

/// Closure of `path` in `G` with fixed endpoint `u` (either end of the path),
/// computing at most `max_levels` levels beyond `R^0`.
pub fn rotation_closure(g: &Graph, path: &Path, u: usize, max_levels: usize) -> Result<RotationState> {
    let oriented = if path.last() == u {
        path.clone()
    } else if path.first() == u {
        path.reversed()
    } else {
        return Err(Error::InvalidRotation(format!("{u} is not an endpoint of the path")));
    };
    if let Some(&v) = oriented.vertices().iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(RotationState::explore(g, oriented, max_levels.max(1), u64::MAX, |_, _| false).0)
}

/// `R(A)`: `A` together with the endpoints of one further rotation of each `P_a`.
pub fn endpoint_expand(g: &Graph, state: &RotationState, a: &VertexSet) -> Result<VertexSet> {
    let mut out: Vec<usize> = a.ids().to_vec();
    for x in a.iter() {
        out.extend(state.one_step(g, x)?);
    }
    VertexSet::new(g.n(), out)
}
