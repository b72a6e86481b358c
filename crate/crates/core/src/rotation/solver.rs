//! Hamilton cycle search by rotation–extension.
//!
//! The working path grows greedily. When neither end can grow, the closure
//! with the last vertex fixed looks for an endpoint that either has a
//! neighbour off the path (extend) or is adjacent to the fixed endpoint
//! (close a cycle on the path's vertices). Failing that, each discovered
//! endpoint `x` is fixed in turn and the other end is rotated. A cycle that
//! misses vertices is reopened through its lowest crossing edge. When no
//! progress is possible the search restarts from a random vertex.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use super::closure::RotationState;
use super::Path;
use crate::graph::Graph;
use crate::random::{rng, Prng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Budget {
    /// `50 n log2 n` rotations.
    Default,
    Rotations(u64),
    /// The default rotation phase followed by a complete backtracking
    /// search, so the answer is exact.
    Exhaustive,
}

pub fn default_rotation_budget(n: usize) -> u64 {
    let n = n.max(2) as f64;
    (50.0 * n * n.log2()).ceil() as u64
}

/// Levels per closure: `4 log2 n`.
pub fn default_level_cap(n: usize) -> usize {
    ((4.0 * (n.max(2) as f64).log2()).ceil() as usize).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    TooSmall,
    Disconnected,
    MinDegreeBelowTwo,
    BudgetExhausted,
    CertifiedNonHamiltonian,
}

impl FailureKind {
    /// Whether the failure proves that no Hamilton cycle exists.
    pub fn is_certain(self) -> bool {
        !matches!(self, FailureKind::BudgetExhausted)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HamiltonReport {
    pub cycle: Option<Vec<usize>>,
    pub failure: Option<FailureKind>,
    /// Longest path seen (the cycle itself on success).
    pub best_path: Vec<usize>,
    pub rotations: u64,
    pub restarts: u32,
    pub via_backtracking: bool,
}

impl HamiltonReport {
    pub fn found(&self) -> bool {
        self.cycle.is_some()
    }

    fn failure(kind: FailureKind, best_path: Vec<usize>, rotations: u64, restarts: u32) -> Self {
        Self { cycle: None, failure: Some(kind), best_path, rotations, restarts, via_backtracking: false }
    }
}

/// True iff `cycle` lists every vertex exactly once and cyclically
/// consecutive vertices are adjacent. Needs `n >= 3`.
pub fn verify_hamilton_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let n = g.n();
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

enum Step {
    Extended(Vec<usize>),
    Closed(Vec<usize>),
    Stuck,
    OutOfBudget,
}

struct Search<'a> {
    g: &'a Graph,
    rng: Prng,
    levels: usize,
    limit: u64,
    rotations: u64,
    best: Vec<usize>,
}

impl Search<'_> {
    fn outside_neighbor(&self, x: usize, on_path: &[bool]) -> Option<usize> {
        self.g.neighbors(x).iter().map(|&w| w as usize).find(|&w| !on_path[w])
    }

    /// Grows both ends greedily, choosing uniformly among free neighbours.
    fn grow(&mut self, path: &mut Vec<usize>, on_path: &mut [bool]) {
        for end in 0..2 {
            loop {
                let tip = if end == 0 { *path.last().unwrap() } else { path[0] };
                let free: Vec<usize> =
                    self.g.neighbors(tip).iter().map(|&w| w as usize).filter(|&w| !on_path[w]).collect();
                let Some(&w) = free.choose(&mut self.rng) else { break };
                on_path[w] = true;
                if end == 0 {
                    path.push(w);
                } else {
                    path.insert(0, w);
                }
            }
        }
    }

    /// One closure with `path.last()` fixed; stops at the first endpoint that
    /// extends or closes.
    fn closure(&mut self, path: &[usize], on_path: &[bool]) -> (RotationState, Step) {
        let g = self.g;
        let u = *path.last().unwrap();
        let len = path.len();
        let remaining = self.limit.saturating_sub(self.rotations);
        let (state, hit) =
            RotationState::explore(g, Path::from_vec_unchecked(path.to_vec()), self.levels, remaining, |_, x| {
                self_outside(g, x, on_path).is_some() || (len >= 3 && g.has_edge(x, u))
            });
        self.rotations += state.rotations().max(1);
        let step = match hit {
            Some(x) => {
                let mut px = state.path_to(x).expect("discovered").into_vec();
                match self.outside_neighbor(x, on_path) {
                    Some(z) => {
                        px.insert(0, z);
                        Step::Extended(px)
                    }
                    None => Step::Closed(px),
                }
            }
            None if state.budget_exhausted() || self.rotations >= self.limit => Step::OutOfBudget,
            None => Step::Stuck,
        };
        (state, step)
    }

    /// Stage 1 from `path`, then stage 2 from each stage-1 endpoint.
    fn step(&mut self, path: &[usize], on_path: &[bool]) -> Step {
        let (state, step) = self.closure(path, on_path);
        if !matches!(step, Step::Stuck) {
            return step;
        }
        for r in state.records() {
            let mut q = state.path_to(r.endpoint).expect("discovered").into_vec();
            q.reverse();
            match self.closure(&q, on_path).1 {
                Step::Stuck => continue,
                other => return other,
            }
        }
        Step::Stuck
    }

    fn note(&mut self, path: &[usize]) {
        if path.len() > self.best.len() {
            self.best = path.to_vec();
        }
    }

    /// Reopens a non-spanning cycle through its lowest crossing edge `(c, z)`.
    fn reopen(&self, cycle: &[usize], on_path: &[bool]) -> Option<Vec<usize>> {
        let mut order: Vec<usize> = (0..cycle.len()).collect();
        order.sort_by_key(|&i| cycle[i]);
        order.into_iter().find_map(|i| {
            let z = self.outside_neighbor(cycle[i], on_path)?;
            let len = cycle.len();
            let mut path = Vec::with_capacity(len + 1);
            path.push(z);
            path.extend((0..len).map(|k| cycle[(i + k) % len]));
            Some(path)
        })
    }

    fn attempt(&mut self, start: usize) -> Result<Vec<usize>, bool> {
        let n = self.g.n();
        let mut on_path = vec![false; n];
        let mut path = vec![start];
        on_path[start] = true;
        loop {
            self.grow(&mut path, &mut on_path);
            self.note(&path);
            if path.len() == n && self.g.has_edge(path[0], path[n - 1]) {
                return Ok(path);
            }
            match self.step(&path, &on_path) {
                Step::Extended(p) => {
                    on_path[p[0]] = true;
                    path = p;
                }
                Step::Closed(cycle) => {
                    if cycle.len() == n {
                        return Ok(cycle);
                    }
                    match self.reopen(&cycle, &on_path) {
                        Some(p) => {
                            on_path[p[0]] = true;
                            path = p;
                        }
                        None => return Err(false),
                    }
                }
                Step::Stuck => return Err(false),
                Step::OutOfBudget => return Err(true),
            }
        }
    }
}

fn self_outside(g: &Graph, x: usize, on_path: &[bool]) -> Option<usize> {
    g.neighbors(x).iter().map(|&w| w as usize).find(|&w| !on_path[w])
}

/// Complete backtracking search from vertex 0.
fn backtrack(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut used = vec![false; n];
    let mut path = vec![0usize];
    used[0] = true;
    let mut cursor = vec![0usize];
    while let Some(&last) = path.last() {
        if path.len() == n && g.has_edge(last, 0) {
            return Some(path);
        }
        let depth = path.len() - 1;
        let nb = g.neighbors(last);
        let next = (cursor[depth]..nb.len()).find(|&k| !used[nb[k] as usize]);
        match next {
            Some(k) if path.len() < n => {
                cursor[depth] = k + 1;
                let w = nb[k] as usize;
                used[w] = true;
                path.push(w);
                cursor.push(0);
            }
            _ => {
                cursor.pop();
                let v = path.pop().unwrap();
                used[v] = false;
            }
        }
    }
    None
}

/// Searches for a Hamilton cycle. A returned cycle has always passed
/// [`verify_hamilton_cycle`]; a failure is conclusive only when
/// [`FailureKind::is_certain`] says so.
pub fn find_hamilton_cycle(g: &Graph, seed: u64, budget: Budget) -> HamiltonReport {
    let n = g.n();
    if n < 3 {
        return HamiltonReport::failure(FailureKind::TooSmall, Vec::new(), 0, 0);
    }
    if !g.is_connected() {
        return HamiltonReport::failure(FailureKind::Disconnected, Vec::new(), 0, 0);
    }
    if g.min_degree() < 2 {
        return HamiltonReport::failure(FailureKind::MinDegreeBelowTwo, Vec::new(), 0, 0);
    }
    let limit = match budget {
        Budget::Rotations(r) => r,
        Budget::Default | Budget::Exhaustive => default_rotation_budget(n),
    };
    let mut search = Search { g, rng: rng(seed), levels: default_level_cap(n), limit, rotations: 0, best: Vec::new() };
    let max_restarts = 4 * n as u32 + 16;
    let mut restarts = 0u32;
    let mut start = 0usize;
    let found = loop {
        match search.attempt(start) {
            Ok(cycle) => break Some(cycle),
            Err(true) => break None,
            Err(false) => {
                restarts += 1;
                if restarts > max_restarts || search.rotations >= limit {
                    break None;
                }
                start = search.rng.random_range(0..n);
            }
        }
    };
    let mut report = HamiltonReport {
        cycle: None,
        failure: None,
        best_path: search.best,
        rotations: search.rotations,
        restarts,
        via_backtracking: false,
    };
    match found {
        Some(cycle) if verify_hamilton_cycle(g, &cycle) => {
            report.best_path = cycle.clone();
            report.cycle = Some(cycle);
            return report;
        }
        Some(_) => debug_assert!(false, "rotation search produced an invalid cycle"),
        None => {}
    }
    if budget == Budget::Exhaustive {
        report.via_backtracking = true;
        match backtrack(g) {
            Some(cycle) if verify_hamilton_cycle(g, &cycle) => {
                report.best_path = cycle.clone();
                report.cycle = Some(cycle);
            }
            _ => report.failure = Some(FailureKind::CertifiedNonHamiltonian),
        }
    } else {
        report.failure = Some(FailureKind::BudgetExhausted);
    }
    report
}
