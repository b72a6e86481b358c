//! Seeded random graph models and concentration self-checks.
//!
//! # Pinned generator
//!
//! All randomness comes from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Trial `i` of a run with base seed
//! `b` uses the seed `mix64(b + i * 0x9E3779B97F4A7C15)` (wrapping
//! arithmetic), where `mix64` is the SplitMix64 output finaliser.
//!
//! Edge sampling walks the candidate pairs in lexicographic order and jumps
//! straight to the next selected pair. Each jump draws one 64-bit word `r`,
//! forms `U = ((r >> 11) + 1) * 2^-53` in `(0, 1]` and skips
//! `floor(ln U / ln(1 - p))` candidates, with `ln(1 - p)` evaluated as
//! `ln_1p(-p)`. `p = 0` and `p = 1` are handled without drawing.

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub type Prng = Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A base seed from which per-trial seeds are derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngSeed {
    pub base_seed: u64,
}

impl RngSeed {
    pub fn new(base_seed: u64) -> Self {
        Self { base_seed }
    }

    pub fn trial(self, trial_index: u64) -> u64 {
        mix64(self.base_seed.wrapping_add(trial_index.wrapping_mul(GOLDEN_GAMMA)))
    }
}

/// Independent sub-stream of a trial seed, e.g. one for the host graph and
/// one for the attack.
pub fn substream(seed: u64, stream: u64) -> u64 {
    RngSeed::new(seed ^ 0xD1B5_4A32_D192_ED03).trial(stream.wrapping_add(1))
}

pub fn rng(seed: u64) -> Prng {
    Prng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GraphModelParams {
    pub n: usize,
    pub p: f64,
}

impl GraphModelParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        check_probability("p", p)?;
        Ok(Self { n, p })
    }
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

/// Calls `emit` with every selected index of `0..total`, ascending, each
/// selected independently with probability `p`.
fn skip_sample(total: u64, p: f64, rng: &mut Prng, mut emit: impl FnMut(u64)) {
    if total == 0 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(emit);
        return;
    }
    let ln_q = (-p).ln_1p();
    let mut next = 0u64;
    loop {
        let r = rng.next_u64();
        let u = ((r >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let skip = (u.ln() / ln_q).floor();
        if skip >= (total - next) as f64 {
            return;
        }
        next += skip as u64;
        emit(next);
        next += 1;
        if next >= total {
            return;
        }
    }
}

/// `G(n, p)` under the pinned generator.
pub fn gnp(params: GraphModelParams, seed: u64) -> Graph {
    let n = params.n;
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut rng = rng(seed);
    let expected = (total as f64 * params.p) as usize;
    let mut pairs = Vec::with_capacity(expected + expected / 16 + 16);
    // Row u holds the pairs (u, u+1) ..= (u, n-1).
    let (mut u, mut row_start, mut row_end) = (0u64, 0u64, (n as u64).saturating_sub(1));
    skip_sample(total, params.p, &mut rng, |k| {
        while k >= row_end {
            u += 1;
            row_start = row_end;
            row_end += n as u64 - 1 - u;
        }
        pairs.push((u as u32, (u + 1 + k - row_start) as u32));
    });
    Graph::from_sorted_pairs(n, &pairs)
}

/// Random bipartite graph between disjoint `a` and `b`: candidate pair
/// `(a[i], b[j])` has index `i * |b| + j`.
pub fn bipartite_gnp(a: &VertexSet, b: &VertexSet, p: f64, seed: u64) -> Result<Graph> {
    check_probability("p", p)?;
    if let Some(v) = a.common_element(b) {
        return Err(Error::OverlappingSets(v));
    }
    let n = a.universe().max(b.universe());
    let (ai, bi) = (a.ids(), b.ids());
    let width = bi.len() as u64;
    let mut pairs = Vec::new();
    skip_sample(ai.len() as u64 * width, p, &mut rng(seed), |k| {
        let (x, y) = (ai[(k / width) as usize], bi[(k % width) as usize]);
        pairs.push((x.min(y) as u32, x.max(y) as u32));
    });
    pairs.sort_unstable();
    Ok(Graph::from_sorted_pairs(n, &pairs))
}

/// Keeps each edge of `f` independently with probability `delta`, sampling
/// over `f`'s lexicographic edge order.
pub fn sparsify(f: &Graph, delta: f64, seed: u64) -> Result<Graph> {
    check_probability("delta", delta)?;
    let mut edges = f.edges();
    let mut cursor = 0u64;
    let mut pairs = Vec::new();
    skip_sample(f.m() as u64, delta, &mut rng(seed), |k| {
        let (u, v) = edges.nth((k - cursor) as usize).expect("index below edge count");
        cursor = k + 1;
        pairs.push((u as u32, v as u32));
    });
    Ok(Graph::from_sorted_pairs(f.n(), &pairs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeConcentration {
    pub pass: bool,
    pub lower: f64,
    pub upper: f64,
    /// Vertex with the largest relative deviation `|d(v) - np| / np`.
    pub worst_vertex: Option<usize>,
    pub worst_deviation: f64,
    pub violations: usize,
}

/// Checks `d(v) = (1 ± eta) np` at every vertex.
pub fn check_degree_concentration(g: &Graph, p: f64, eta: f64) -> DegreeConcentration {
    let np = g.n() as f64 * p;
    let (lower, upper) = ((1.0 - eta) * np, (1.0 + eta) * np);
    let mut worst_vertex = None;
    let mut worst_deviation = f64::NEG_INFINITY;
    let mut violations = 0;
    for v in 0..g.n() {
        let d = g.degree(v) as f64;
        if d < lower || d > upper {
            violations += 1;
        }
        let dev = if np > 0.0 { (d - np).abs() / np } else { d };
        if dev > worst_deviation {
            worst_deviation = dev;
            worst_vertex = Some(v);
        }
    }
    DegreeConcentration {
        pass: violations == 0,
        lower,
        upper,
        worst_vertex,
        worst_deviation: worst_deviation.max(0.0),
        violations,
    }
}

/// Which random `(X, Y)` pairs to draw for the edge-count check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeSampleSpec {
    /// Each entry is drawn as `(|X|, |Y|)` with both sets uniform and independent.
    pub sizes: Vec<(usize, usize)>,
    pub pairs_per_size: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeConcentration {
    pub samples: usize,
    pub passed: usize,
    pub pass_rate: f64,
    /// Smallest `c` under which every sampled pair satisfies both bounds.
    pub smallest_passing_c: f64,
}

/// Required constant for one pair: the larger of the two normalised
/// discrepancies `|e - (|X||Y| - |X∩Y|²/2)p|` and `|e' - |X||Y|p|` over
/// `sqrt(|X||Y|np)`.
pub fn edge_discrepancy(g: &Graph, p: f64, x: &VertexSet, y: &VertexSet) -> Result<f64> {
    let counts = g.edge_counts(x, y)?;
    let (sx, sy) = (x.len() as f64, y.len() as f64);
    let cap = x.intersection(y).len() as f64;
    let scale = (sx * sy * g.n() as f64 * p).sqrt();
    let d1 = (counts.e as f64 - sx * sy * p + cap * cap * p / 2.0).abs();
    let d2 = (counts.e_prime as f64 - sx * sy * p).abs();
    let worst = d1.max(d2);
    if worst == 0.0 {
        return Ok(0.0);
    }
    Ok(if scale > 0.0 { worst / scale } else { f64::INFINITY })
}

pub fn check_edge_concentration(g: &Graph, p: f64, c: f64, spec: &EdgeSampleSpec) -> Result<EdgeConcentration> {
    let n = g.n();
    let mut rng = rng(spec.seed);
    let (mut samples, mut passed) = (0usize, 0usize);
    let mut smallest_passing_c = 0.0f64;
    for &(sx, sy) in &spec.sizes {
        if sx > n || sy > n {
            return Err(Error::InvalidParameter(format!("sample sizes ({sx}, {sy}) exceed n = {n}")));
        }
        for _ in 0..spec.pairs_per_size {
            let x = VertexSet::new(n, index::sample(&mut rng, n, sx))?;
            let y = VertexSet::new(n, index::sample(&mut rng, n, sy))?;
            let need = edge_discrepancy(g, p, &x, &y)?;
            samples += 1;
            if need <= c {
                passed += 1;
            }
            smallest_passing_c = smallest_passing_c.max(need);
        }
    }
    Ok(EdgeConcentration {
        samples,
        passed,
        pass_rate: if samples == 0 { 1.0 } else { passed as f64 / samples as f64 },
        smallest_passing_c,
    })
}

/// Uniform random subset of `0..n` of size `k`.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> VertexSet {
    let mut ids = index::sample(rng, n, k).into_vec();
    ids.sort_unstable();
    VertexSet::from_sorted_unchecked(n, ids)
}
