//! The rotation–extension property `RE(δ)` and the complement relation.
//!
//! Exhaustive checks are exact: case (i) is decided by a longest-path
//! dynamic program on `G ∪ P`, and the maximal sets of case (ii) come from
//! the Hamilton path pairs of `(G ∪ P)[V(P)]`. Sampled checks use
//! rotation-derived witnesses, which can miss valid ones, so their pass rate
//! is a lower bound and never a proof.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::closure::RotationState;
use super::exact::{hamilton_pairs_local, longest_len_local, masks};
use super::{extend, Path};
use crate::degree::ceil_snap;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::random::rng;

/// Largest `n` for which every path is enumerated.
pub const RE_EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Every path with at least two vertices; `n ≤ RE_EXHAUSTIVE_LIMIT`.
    Exhaustive,
    /// `paths` uniformly random paths: a uniform length in `2..=n`, then a
    /// uniform sequence of distinct vertices.
    Sampled { paths: usize, seed: u64 },
}

/// Rotation-derived sets for case (ii): `S_P` are endpoints reachable from
/// `P` with `fixed` kept, and `T_v` the endpoints reachable from `P_v` with
/// `v` kept. Only `v` with `|T_v| ≥ ⌈δn⌉` are retained in `s_p`.
#[derive(Clone, Debug, Serialize)]
pub struct ReWitness {
    pub path: Path,
    pub fixed: usize,
    pub s_p: VertexSet,
    pub t: BTreeMap<usize, VertexSet>,
}

impl ReWitness {
    /// True when `|S_P| ≥ δn`, which makes this a case (ii) witness.
    pub fn satisfies(&self, delta: f64) -> bool {
        self.s_p.len() >= threshold(delta, self.s_p.universe())
    }

    /// A path of `G ∪ P` from `w` to `v` with vertex set `V(P)`, rebuilt from
    /// the two closures.
    pub fn connecting_path(&self, g: &Graph, v: usize, w: usize) -> Result<Path> {
        if !self.t.get(&v).is_some_and(|t| t.contains(w)) {
            return Err(Error::UndiscoveredEndpoint(w));
        }
        let working = g.union(&self.path.as_graph(g.n()))?;
        let n = g.n();
        let (outer, _) = RotationState::explore(&working, oriented(&self.path, self.fixed), n, u64::MAX, |_, _| false);
        let p_v = outer.path_to(v)?.reversed();
        let (inner, _) = RotationState::explore(&working, p_v, n, u64::MAX, |_, _| false);
        inner.path_to(w)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "case")]
pub enum ReOutcome {
    /// Case (i): a longer path of `G ∪ P`.
    Longer { path: Path },
    /// Case (ii) candidate; check [`ReWitness::satisfies`].
    Witness(ReWitness),
}

#[derive(Clone, Debug, Serialize)]
pub struct ReReport {
    pub mode: CheckMode,
    /// True for exhaustive checks, whose verdict is exact.
    pub exact: bool,
    pub delta: f64,
    /// `None` for complement checks.
    pub connected: Option<bool>,
    pub paths_checked: u64,
    pub via_longer: u64,
    pub via_witness: u64,
    pub failures: u64,
    /// Up to [`ReReport::KEPT_FAILURES`] failing paths.
    pub failing_paths: Vec<Path>,
    pub holds: bool,
    pub statement: String,
}

impl ReReport {
    pub const KEPT_FAILURES: usize = 16;

    /// Fraction of checked paths that passed.
    pub fn pass_rate(&self) -> f64 {
        if self.paths_checked == 0 {
            return 1.0;
        }
        (self.paths_checked - self.failures) as f64 / self.paths_checked as f64
    }
}

fn threshold(delta: f64, n: usize) -> usize {
    ceil_snap(delta * n as f64)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    Ok(())
}

fn oriented(path: &Path, fixed: usize) -> Path {
    if path.last() == fixed {
        path.clone()
    } else {
        path.reversed()
    }
}

fn check_path(g: &Graph, path: &Path) -> Result<()> {
    if path.len() < 2 {
        return Err(Error::InvalidPath("needs at least two vertices".into()));
    }
    match path.vertices().iter().find(|&&v| v >= g.n()) {
        Some(&v) => Err(Error::VertexOutOfRange { vertex: v, n: g.n() }),
        None => Ok(()),
    }
}

/// Stops at the first discovered endpoint with a `G`-neighbour outside `V(P)`.
fn extension_during<'a>(g: &'a Graph, inside: &'a [bool]) -> impl FnMut(&RotationState, usize) -> bool + 'a {
    move |_, x| g.neighbors(x).iter().any(|&w| !inside[w as usize])
}

fn prepend_outside(g: &Graph, inside: &[bool], p: Path) -> Path {
    let x = p.first();
    let z = g.neighbors(x).iter().map(|&w| w as usize).find(|&w| !inside[w]).expect("stop condition");
    let mut v = Vec::with_capacity(p.len() + 1);
    v.push(z);
    v.extend_from_slice(p.vertices());
    Path::from_vec_unchecked(v)
}

/// Sets `S_P`, `T_v` from rotations in `G ∪ P` with `P.last()` fixed. Returns
/// case (i) when an extension appears on `P` or on any rotated path.
/// With `enough`, stops once that many qualifying `v` are found.
fn witness_inner(g: &Graph, path: &Path, delta: f64, enough: Option<usize>) -> Result<ReOutcome> {
    check_path(g, path)?;
    if let Some(longer) = extend(g, path) {
        return Ok(ReOutcome::Longer { path: longer });
    }
    let n = g.n();
    let th = threshold(delta, n);
    let working = g.union(&path.as_graph(n))?;
    let inside = path.mask(n);
    let (outer, hit) = RotationState::explore(&working, path.clone(), n, u64::MAX, extension_during(g, &inside));
    if let Some(x) = hit {
        return Ok(ReOutcome::Longer { path: prepend_outside(g, &inside, outer.path_to(x)?) });
    }
    let mut kept = Vec::new();
    let mut t = BTreeMap::new();
    for r in outer.records() {
        let v = r.endpoint;
        let p_v = outer.path_to(v)?.reversed();
        let (inner, hit) = RotationState::explore(&working, p_v, n, u64::MAX, extension_during(g, &inside));
        if let Some(x) = hit {
            return Ok(ReOutcome::Longer { path: prepend_outside(g, &inside, inner.path_to(x)?) });
        }
        if inner.endpoint_count() >= th {
            kept.push(v);
            t.insert(v, inner.endpoints());
            if enough.is_some_and(|e| kept.len() >= e) {
                break;
            }
        }
    }
    Ok(ReOutcome::Witness(ReWitness { path: path.clone(), fixed: path.last(), s_p: VertexSet::new(n, kept)?, t }))
}

/// Case (i) if `P` extends in `G ∪ P` directly or after rotations, otherwise
/// the rotation witness with `P.last()` fixed.
pub fn re_witness(g: &Graph, path: &Path, delta: f64) -> Result<ReOutcome> {
    check_delta(delta)?;
    witness_inner(g, path, delta, None)
}

enum Verdict {
    Longer,
    Witness,
    Fail,
}

struct Tally {
    mode: CheckMode,
    delta: f64,
    checked: u64,
    longer: u64,
    witness: u64,
    failures: u64,
    failing: Vec<Path>,
}

impl Tally {
    fn new(mode: CheckMode, delta: f64) -> Self {
        Self { mode, delta, checked: 0, longer: 0, witness: 0, failures: 0, failing: Vec::new() }
    }

    fn add(&mut self, verdict: Verdict, path: impl FnOnce() -> Path) {
        self.checked += 1;
        match verdict {
            Verdict::Longer => self.longer += 1,
            Verdict::Witness => self.witness += 1,
            Verdict::Fail => {
                self.failures += 1;
                if self.failing.len() < ReReport::KEPT_FAILURES {
                    self.failing.push(path());
                }
            }
        }
    }

    fn finish(self, connected: Option<bool>, what: &str) -> ReReport {
        let exact = matches!(self.mode, CheckMode::Exhaustive);
        let holds = self.failures == 0 && connected != Some(false);
        let statement = if exact {
            format!("exhaustive over {} paths: {what} {}", self.checked, if holds { "holds" } else { "fails" })
        } else {
            format!(
                "sampled {what} pass rate {:.4} over {} paths; a rate, not a proof",
                if self.checked == 0 { 1.0 } else { (self.checked - self.failures) as f64 / self.checked as f64 },
                self.checked
            )
        };
        ReReport {
            mode: self.mode,
            exact,
            delta: self.delta,
            connected,
            paths_checked: self.checked,
            via_longer: self.longer,
            via_witness: self.witness,
            failures: self.failures,
            failing_paths: self.failing,
            holds,
            statement,
        }
    }
}

/// Calls `f` on every sequence of distinct vertices with at least two
/// vertices and `first < last`.
fn for_each_path(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(n: usize, seq: &mut Vec<usize>, used: u32, f: &mut impl FnMut(&[usize])) {
        if seq.len() >= 2 && seq[0] < seq[seq.len() - 1] {
            f(seq);
        }
        for v in 0..n {
            if used & 1 << v == 0 {
                seq.push(v);
                go(n, seq, used | 1 << v, f);
                seq.pop();
            }
        }
    }
    go(n, &mut Vec::with_capacity(n), 0, &mut f);
}

/// Exact case analysis of single paths on a graph with at most
/// [`RE_EXHAUSTIVE_LIMIT`] vertices.
struct Exact {
    n: usize,
    adj: Vec<u32>,
    longest: usize,
    th: usize,
}

impl Exact {
    fn new(g: &Graph, delta: f64) -> Result<Self> {
        let n = g.n();
        if n > RE_EXHAUSTIVE_LIMIT {
            return Err(Error::TooLarge { what: "exhaustive path enumeration", n, limit: RE_EXHAUSTIVE_LIMIT });
        }
        let adj = masks(g);
        let longest = if n == 0 { 0 } else { longest_len_local(&adj) };
        Ok(Self { n, adj, longest, th: threshold(delta, n) })
    }

    /// `Ok(None)` for case (i); otherwise the maximal `T_v` masks (over
    /// indices of `seq`) of vertices in the maximal `S_P`.
    fn analyse(&self, seq: &[usize]) -> Option<Vec<(usize, u32)>> {
        let l = seq.len();
        if self.longest > l {
            return None;
        }
        let mut union = self.adj.clone();
        for w in seq.windows(2) {
            union[w[0]] |= 1 << w[1];
            union[w[1]] |= 1 << w[0];
        }
        if l < self.n {
            let inside = seq.iter().fold(0u32, |m, &v| m | 1 << v);
            let (a, b) = (seq[0], seq[l - 1]);
            if (self.adj[a] | self.adj[b]) & !inside != 0 || longest_len_local(&union) > l {
                return None;
            }
        }
        let local: Vec<u32> = seq
            .iter()
            .map(|&v| seq.iter().enumerate().filter(|&(_, &w)| union[v] & 1 << w != 0).fold(0, |m, (j, _)| m | 1 << j))
            .collect();
        let pairs = hamilton_pairs_local(&local);
        Some(pairs.into_iter().enumerate().filter(|&(_, t)| t.count_ones() as usize >= self.th).collect())
    }
}

fn random_path(g: &Graph, r: &mut impl Rng) -> Path {
    let n = g.n();
    let len = r.random_range(2..=n);
    let mut all: Vec<usize> = (0..n).collect();
    let (chosen, _) = all.partial_shuffle(r, len);
    Path::from_vec_unchecked(chosen.to_vec())
}

/// Checks `RE(δ)` for `G`: connectivity plus case (i) or (ii) for every path
/// (exhaustive) or for sampled paths.
pub fn check_re(g: &Graph, delta: f64, mode: CheckMode) -> Result<ReReport> {
    check_delta(delta)?;
    let mut tally = Tally::new(mode, delta);
    match mode {
        CheckMode::Exhaustive => {
            let exact = Exact::new(g, delta)?;
            for_each_path(g.n(), |seq| {
                let verdict = match exact.analyse(seq) {
                    None => Verdict::Longer,
                    Some(s) if s.len() >= exact.th => Verdict::Witness,
                    Some(_) => Verdict::Fail,
                };
                tally.add(verdict, || Path::from_vec_unchecked(seq.to_vec()));
            });
        }
        CheckMode::Sampled { paths, seed } => {
            if g.n() >= 2 {
                let th = threshold(delta, g.n());
                let mut r = rng(seed);
                for _ in 0..paths {
                    let p = random_path(g, &mut r);
                    let verdict = match witness_inner(g, &p, delta, Some(th))? {
                        ReOutcome::Longer { .. } => Verdict::Longer,
                        ReOutcome::Witness(w) if w.satisfies(delta) => Verdict::Witness,
                        ReOutcome::Witness(_) => Verdict::Fail,
                    };
                    tally.add(verdict, || p);
                }
            }
        }
    }
    Ok(tally.finish(Some(g.is_connected()), "RE"))
}

/// Checks whether `G2` complements `G1`: per path, case (i) in `G1 ∪ P` or a
/// pair `v ∈ S_P`, `w ∈ T_v` joined by an edge of `G1 ∪ G2`. Does not check
/// `RE(δ)` for `G1`; use [`check_re`] for that.
pub fn check_complements(g1: &Graph, g2: &Graph, delta: f64, mode: CheckMode) -> Result<ReReport> {
    check_delta(delta)?;
    if g1.n() != g2.n() {
        return Err(Error::VertexCountMismatch { expected: g1.n(), found: g2.n() });
    }
    let joined = |v: usize, w: usize| g1.has_edge(v, w) || g2.has_edge(v, w);
    let mut tally = Tally::new(mode, delta);
    match mode {
        CheckMode::Exhaustive => {
            let exact = Exact::new(g1, delta)?;
            for_each_path(g1.n(), |seq| {
                let verdict = match exact.analyse(seq) {
                    None => Verdict::Longer,
                    Some(s) if s.len() >= exact.th => {
                        let edge =
                            s.iter().any(|&(i, t)| (0..seq.len()).any(|j| t & 1 << j != 0 && joined(seq[i], seq[j])));
                        if edge {
                            Verdict::Witness
                        } else {
                            Verdict::Fail
                        }
                    }
                    Some(_) => Verdict::Fail,
                };
                tally.add(verdict, || Path::from_vec_unchecked(seq.to_vec()));
            });
        }
        CheckMode::Sampled { paths, seed } => {
            if g1.n() >= 2 {
                let mut r = rng(seed);
                for _ in 0..paths {
                    let p = random_path(g1, &mut r);
                    let verdict = match witness_inner(g1, &p, delta, None)? {
                        ReOutcome::Longer { .. } => Verdict::Longer,
                        ReOutcome::Witness(w) if w.satisfies(delta) => {
                            if w.t.iter().any(|(&v, t)| t.iter().any(|x| joined(v, x))) {
                                Verdict::Witness
                            } else {
                                Verdict::Fail
                            }
                        }
                        ReOutcome::Witness(_) => Verdict::Fail,
                    };
                    tally.add(verdict, || p);
                }
            }
        }
    }
    Ok(tally.finish(None, "complement"))
}
