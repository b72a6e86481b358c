//! Removal subgraphs `H ⊆ G`: the disconnecting bipartite cut, the in-family
//! independent-set attack, guarded cuts, and the explicit construction that
//! leaves no optimal matching.

use std::collections::BTreeMap;

use rand::seq::index;
use serde::Serialize;

use crate::degree::{ceil_snap, floor_snap};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::random::{random_subset, rng};

#[derive(Clone, Debug, Serialize)]
pub struct AttackResult {
    #[serde(skip)]
    pub h: Graph,
    #[serde(skip)]
    pub residual: Graph,
    pub witness: BTreeMap<String, VertexSet>,
    pub params_used: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

impl AttackResult {
    fn new(g: &Graph, remove: impl FnMut(usize, usize) -> bool) -> Self {
        let (h, residual) = g.partition_edges(remove);
        Self {
            h,
            residual,
            witness: BTreeMap::new(),
            params_used: BTreeMap::new(),
            warnings: Vec::new(),
            counterexample: None,
        }
    }

    fn with_set(mut self, name: &str, set: VertexSet) -> Self {
        self.params_used.insert(format!("|{name}|"), set.len());
        self.witness.insert(name.to_string(), set);
        self
    }

    pub fn set(&self, name: &str) -> Option<&VertexSet> {
        self.witness.get(name)
    }
}

/// Removes every edge between a random `X` with `|X| = i` and `Y = V \ X`,
/// which disconnects the residual whenever `0 < i < n`.
pub fn bipartite_cut_attack(g: &Graph, i: usize, seed: u64) -> Result<AttackResult> {
    let n = g.n();
    if i >= n {
        return Err(Error::InvalidParameter(format!("cut size {i} must be below n = {n}")));
    }
    let x = random_subset(&mut rng(seed), n, i);
    let in_x = x.mask();
    let y = x.complement();
    let mut out = AttackResult::new(g, |u, v| in_x[u] != in_x[v]).with_set("X", x).with_set("Y", y);
    if 2 * i >= n {
        out.warnings.push(format!("cut size {i} is not below n/2"));
    }
    if i == 0 {
        out.warnings.push("cut size 0 removes nothing".into());
    }
    Ok(out)
}

/// Removes every edge inside a uniformly random `S` with `|S| = s`.
pub fn independent_set_attack(g: &Graph, s: usize, seed: u64) -> Result<AttackResult> {
    let n = g.n();
    if s > n {
        return Err(Error::InvalidParameter(format!("set size {s} exceeds n = {n}")));
    }
    let set = random_subset(&mut rng(seed), n, s);
    let in_s = set.mask();
    let mut out = AttackResult::new(g, |u, v| in_s[u] && in_s[v]).with_set("S", set);
    if 2 * s >= n {
        out.warnings.push(format!("set size {s} is not below n/2"));
    }
    Ok(out)
}

/// Deletes `G[X]` and `G[X, V \ (X ∪ U)]`, so that in the residual `X` is
/// independent and `N(X) ⊆ U`.
fn guard(g: &Graph, x: VertexSet, u: VertexSet) -> AttackResult {
    let in_x = x.mask();
    let in_u = u.mask();
    AttackResult::new(g, |a, b| (in_x[a] && !in_u[b]) || (in_x[b] && !in_u[a])).with_set("X", x).with_set("U", u)
}

/// Picks `x_size + u_size` distinct vertices of `pool` and splits them.
fn draw_disjoint(pool: &[usize], n: usize, x_size: usize, u_size: usize, seed: u64) -> (VertexSet, VertexSet) {
    let picks = index::sample(&mut rng(seed), pool.len(), x_size + u_size).into_vec();
    let x = VertexSet::new(n, picks[..x_size].iter().map(|&k| pool[k])).expect("pool ids in range");
    let u = VertexSet::new(n, picks[x_size..].iter().map(|&k| pool[k])).expect("pool ids in range");
    (x, u)
}

pub fn guarded_cut_attack(g: &Graph, x_size: usize, u_size: usize, seed: u64) -> Result<AttackResult> {
    let n = g.n();
    if x_size + u_size > n {
        return Err(Error::Infeasible {
            reason: format!("|X| + |U| = {} exceeds n = {n}", x_size + u_size),
            deficit: x_size + u_size - n,
        });
    }
    let pool: Vec<usize> = (0..n).collect();
    let (x, u) = draw_disjoint(&pool, n, x_size, u_size, seed);
    let mut out = guard(g, x, u);
    if u_size + 2 <= x_size {
        out.warnings.push("|U| <= |X| - 2: the residual has no optimal matching".into());
    }
    Ok(out)
}

/// Sizes for the explicit no-optimal-matching construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CounterexampleParams {
    pub n: usize,
    pub p: f64,
    pub eps: f64,
    pub eta: f64,
    /// `floor(1 / ((1 + η) 2p))`.
    pub y_size: usize,
    /// `100εn`, rounded to nearest.
    pub x_size: usize,
    /// `|X| - 2`.
    pub u_size: usize,
    /// `ceil(1 / (3p))`, i.e. `γn`.
    pub gamma_n: usize,
    pub gamma: f64,
}

impl CounterexampleParams {
    pub fn new(n: usize, p: f64, eps: f64, eta: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!("p = {p} is not in (0, 1]")));
        }
        if !(eps > 0.0 && eps < 1.0) || eta.is_nan() || eta < 0.0 {
            return Err(Error::InvalidParameter(format!("eps = {eps}, eta = {eta} out of range")));
        }
        let y_size = floor_snap(1.0 / ((1.0 + eta) * 2.0 * p));
        if y_size == 0 {
            return Err(Error::InvalidParameter(format!("|Y| = floor(1/((1+η)2p)) is 0 at p = {p}")));
        }
        let x_size = (100.0 * eps * n as f64).round() as usize;
        if x_size < 2 {
            return Err(Error::InvalidParameter(format!("|X| = {x_size} leaves no room for |U| = |X| - 2")));
        }
        let gamma_n = ceil_snap(1.0 / (3.0 * p));
        Ok(Self { n, p, eps, eta, y_size, x_size, u_size: x_size - 2, gamma_n, gamma: gamma_n as f64 / n as f64 })
    }
}

/// Minimum and maximum of `d_H / np` over one group of vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TierRange {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl TierRange {
    fn collect(values: impl Iterator<Item = f64>) -> Self {
        let (mut count, mut min, mut max) = (0, f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            count += 1;
            min = min.min(v);
            max = max.max(v);
        }
        Self { count, min, max }
    }
}

/// Measured degree tiers of `H` and the two concentration events the
/// construction's analysis conditions on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    /// `d_H / np` on `Y ∪ U`; the construction forces exactly 0.
    pub tier_guard: TierRange,
    /// `d_H / np` on `X`; expected `1 - 100ε ± 3η`.
    pub tier_x: TierRange,
    /// `d_H / np` on the rest; expected `(1 ± η) 100ε`.
    pub tier_rest: TierRange,
    /// Every `y ∈ Y` has `d_G(y) = (1 ± η)np`.
    pub e1: bool,
    pub e1_violations: usize,
    /// Every `v ∉ Y` has `e_G(v, Z) = (1 ± η)|Z|p` for `Z ∈ {X, U}` and
    /// `d_G(v) = (1 ± η)np`.
    pub e2: bool,
    pub e2_violations: usize,
    /// `|Y| >= γn + 3`, the room the shifted branch needs on `(98εn, 100εn]`.
    pub shift_room: bool,
}

fn within(value: f64, mean: f64, eta: f64) -> bool {
    value >= (1.0 - eta) * mean && value <= (1.0 + eta) * mean
}

fn count_into(g: &Graph, set: &VertexSet) -> Vec<u32> {
    let mut counts = vec![0u32; g.n()];
    for z in set.iter() {
        for &w in g.neighbors(z) {
            counts[w as usize] += 1;
        }
    }
    counts
}

/// Chooses `Y`, then disjoint `X, U` outside `Y ∪ N_G(Y)`, and deletes as in
/// [`guarded_cut_attack`] with `|U| = |X| - 2`.
pub fn matching_counterexample(g: &Graph, params: &CounterexampleParams, seed: u64) -> Result<AttackResult> {
    let n = g.n();
    if n != params.n {
        return Err(Error::VertexCountMismatch { expected: params.n, found: n });
    }
    if params.y_size > n {
        return Err(Error::Infeasible {
            reason: format!("|Y| = {} exceeds n", params.y_size),
            deficit: params.y_size - n,
        });
    }
    let mut r = rng(seed);
    let y = random_subset(&mut r, n, params.y_size);
    let closed = y.union(&g.neighborhood(&y)?);
    let pool: Vec<usize> = closed.complement().ids().to_vec();
    let need = params.x_size + params.u_size;
    if need > pool.len() {
        return Err(Error::Infeasible {
            reason: format!("X and U need {need} vertices outside Y ∪ N(Y), only {} available", pool.len()),
            deficit: need - pool.len(),
        });
    }
    let (x, u) = draw_disjoint(&pool, n, params.x_size, params.u_size, crate::random::substream(seed, 1));
    let mut out = guard(g, x, u).with_set("Y", y);
    out.params_used.insert("gamma_n".into(), params.gamma_n);
    out.params_used.insert("|Y ∪ N(Y)|".into(), closed.len());

    let (x, u, y) = (&out.witness["X"], &out.witness["U"], &out.witness["Y"]);
    let np = n as f64 * params.p;
    let (in_x, in_u, in_y) = (x.mask(), u.mask(), y.mask());
    let h = &out.h;
    let tier_guard = TierRange::collect(u.iter().chain(y.iter()).map(|v| h.degree(v) as f64 / np));
    let tier_x = TierRange::collect(x.iter().map(|v| h.degree(v) as f64 / np));
    let tier_rest =
        TierRange::collect((0..n).filter(|&v| !in_x[v] && !in_u[v] && !in_y[v]).map(|v| h.degree(v) as f64 / np));

    let e1_violations = y.iter().filter(|&v| !within(g.degree(v) as f64, np, params.eta)).count();
    let (into_x, into_u) = (count_into(g, x), count_into(g, u));
    let (mean_x, mean_u) = (x.len() as f64 * params.p, u.len() as f64 * params.p);
    let e2_violations = (0..n)
        .filter(|&v| !in_y[v])
        .filter(|&v| {
            !within(into_x[v] as f64, mean_x, params.eta)
                || !within(into_u[v] as f64, mean_u, params.eta)
                || !within(g.degree(v) as f64, np, params.eta)
        })
        .count();

    let shift_room = params.y_size >= params.gamma_n + 3;
    if !shift_room {
        out.warnings.push(format!(
            "|Y| = {} < γn + 3 = {}: the shifted branch may miss the top of (98εn, 100εn]",
            params.y_size,
            params.gamma_n + 3
        ));
    }
    out.counterexample = Some(CounterexampleReport {
        tier_guard,
        tier_x,
        tier_rest,
        e1: e1_violations == 0,
        e1_violations,
        e2: e2_violations == 0,
        e2_violations,
        shift_room,
    });
    Ok(out)
}
