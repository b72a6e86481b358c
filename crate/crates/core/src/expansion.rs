//! Instance-level expansion checks for residual graphs and rotation growth.
//!
//! `log n` is the natural logarithm throughout.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::random::{random_subset, rng};
use crate::rotation::{endpoint_expand, rotation_closure, LongestPathCertificate, Path};

/// Whether the hypotheses behind a check were machine-checked on the
/// instance (`Certified`) or only approximated (`Heuristic`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Certified,
    Heuristic,
}

/// Which sets `X` to test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSpec {
    pub sizes: Vec<usize>,
    pub sets_per_size: usize,
    pub seed: u64,
    /// Enumerate all subsets instead; only allowed for `n ≤ EXHAUSTIVE_LIMIT`.
    pub exhaustive: bool,
}

impl SampleSpec {
    pub const EXHAUSTIVE_LIMIT: usize = 16;

    /// Sizes `1, 2, 4, ...` up to `n/2` with 50 sets each; exhaustive for
    /// `n ≤ 16`.
    pub fn default_for(n: usize, seed: u64) -> Self {
        let mut sizes = Vec::new();
        let mut k = 1;
        while k <= (n / 2).max(1) {
            sizes.push(k);
            k *= 2;
        }
        Self { sizes, sets_per_size: 50, seed, exhaustive: n <= Self::EXHAUSTIVE_LIMIT }
    }

    fn describe(&self) -> String {
        if self.exhaustive {
            "all subsets".into()
        } else {
            format!("{} sets for each size in {:?} (seed {})", self.sets_per_size, self.sizes, self.seed)
        }
    }

    /// Calls `f` on every selected set whose size passes `keep`.
    fn for_each_set(&self, n: usize, keep: impl Fn(usize) -> bool, mut f: impl FnMut(VertexSet)) -> Result<()> {
        if self.exhaustive {
            if n > Self::EXHAUSTIVE_LIMIT {
                return Err(Error::TooLarge {
                    what: "exhaustive subset enumeration",
                    n,
                    limit: Self::EXHAUSTIVE_LIMIT,
                });
            }
            for mask in 0u32..(1 << n) {
                if keep(mask.count_ones() as usize) {
                    f(VertexSet::new(n, (0..n).filter(|&v| mask & 1 << v != 0))?);
                }
            }
            return Ok(());
        }
        let mut r = rng(self.seed);
        for &k in &self.sizes {
            if k > n || !keep(k) {
                continue;
            }
            for _ in 0..self.sets_per_size {
                f(random_subset(&mut r, n, k));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub property: String,
    pub sample: String,
    pub regime: Regime,
    pub passed: u64,
    pub failed: u64,
    /// Smallest `observed − bound` seen; `+inf` when nothing was checked.
    pub worst_margin: f64,
    /// The first failing set `X` (or level set `R^t`).
    pub counterexample: Option<VertexSet>,
    /// For rotation growth, the level `t` of the first failure.
    pub failing_level: Option<usize>,
    pub notes: Vec<String>,
}

impl ExpansionReport {
    fn new(property: &str, sample: String, regime: Regime) -> Self {
        Self {
            property: property.into(),
            sample,
            regime,
            passed: 0,
            failed: 0,
            worst_margin: f64::INFINITY,
            counterexample: None,
            failing_level: None,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, margin: f64, witness: impl FnOnce() -> VertexSet) {
        self.worst_margin = self.worst_margin.min(margin);
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    pub fn checked(&self) -> u64 {
        self.passed + self.failed
    }

    pub fn pass_rate(&self) -> f64 {
        if self.checked() == 0 {
            return 1.0;
        }
        self.passed as f64 / self.checked() as f64
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn check_eps_p(eps: f64, p: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) || !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < eps < 1 and 0 < p <= 1, got eps = {eps}, p = {p}")));
    }
    Ok(())
}

/// `min{ε|X|np/2, εn(log n)^{-1/4}/2}`.
pub fn small_set_bound(n: usize, eps: f64, p: f64, size: usize) -> f64 {
    let nf = n as f64;
    let cap = eps * nf * nf.ln().powf(-0.25) / 2.0;
    (eps * size as f64 * nf * p / 2.0).min(cap)
}

/// `⌈n (log n)^{-1/2}⌉`, the smallest size covered by the large-set bound.
pub fn large_set_threshold(n: usize) -> usize {
    let nf = n as f64;
    if n < 2 {
        return n;
    }
    (nf / nf.ln().sqrt()).ceil() as usize
}

/// `|N(X)| ≥ min{ε|X|np/2, εn(log n)^{-1/4}/2}` on the sampled sets. The
/// caller supplies the regime: `Certified` only when `G'` is a residual of
/// a membership-checked removal.
pub fn check_small_set_expansion(
    gp: &Graph,
    eps: f64,
    p: f64,
    spec: &SampleSpec,
    regime: Regime,
) -> Result<ExpansionReport> {
    check_eps_p(eps, p)?;
    let n = gp.n();
    let mut report = ExpansionReport::new("small-set-expansion", spec.describe(), regime);
    let mut err = None;
    spec.for_each_set(
        n,
        |_| true,
        |x| {
            let bound = small_set_bound(n, eps, p, x.len());
            match gp.neighborhood(&x) {
                Ok(nb) => {
                    let margin = nb.len() as f64 - bound;
                    report.record(margin >= 0.0, margin, || x);
                }
                Err(e) => err = Some(e),
            }
        },
    )?;
    err.map_or(Ok(report), Err)
}

/// For `|X| ≥ n(log n)^{-1/2}`: `|N(X)| > (1 − ε²/10) p^{-1} δ(X)` (vacuous
/// when `δ(X) = 0`) and `|N(X)| ≥ εn/2`. Sizes below the threshold are
/// replaced by the threshold itself.
pub fn check_large_set_expansion(
    gp: &Graph,
    eps: f64,
    p: f64,
    spec: &SampleSpec,
    regime: Regime,
) -> Result<ExpansionReport> {
    check_eps_p(eps, p)?;
    let n = gp.n();
    let min_size = large_set_threshold(n);
    let mut spec = spec.clone();
    if !spec.exhaustive {
        spec.sizes = spec.sizes.iter().map(|&k| k.max(min_size).min(n)).collect();
        spec.sizes.dedup();
    }
    let mut report = ExpansionReport::new("large-set-expansion", spec.describe(), regime);
    let factor = (1.0 - eps * eps / 10.0) / p;
    let informative = n as f64 * p / (1.0 - eps * eps / 10.0);
    report
        .notes
        .push(format!("sizes at least {min_size}; the degree bound exceeds n once min degree > {informative:.1}"));
    let half = eps * n as f64 / 2.0;
    let mut err = None;
    spec.for_each_set(
        n,
        |k| k >= min_size && k > 0,
        |x| {
            let delta = gp.min_degree_on(&x).expect("sets are nonempty");
            match gp.neighborhood(&x) {
                Ok(nb) => {
                    let got = nb.len() as f64;
                    let bound = factor * delta as f64;
                    let degree_ok = delta == 0 || got > bound;
                    let margin = (got - bound).min(got - half);
                    report.record(degree_ok && got >= half, margin, || x);
                }
                Err(e) => err = Some(e),
            }
        },
    )?;
    err.map_or(Ok(report), Err)
}

pub fn check_connectivity(gp: &Graph) -> bool {
    gp.is_connected()
}

/// `|R^{t+1}| ≥ ½(|N_G(R^t)| − 3|R^t|)` for every computed level of the
/// closure of `path` with `path.last()` fixed. The certificate says how
/// `path` was shown to be longest in `G ∪ P'`; heuristic certificates yield
/// a heuristic-regime report.
pub fn check_rotation_growth(
    g: &Graph,
    path: &Path,
    certificate: Option<LongestPathCertificate>,
    levels: usize,
) -> Result<ExpansionReport> {
    let certificate = certificate.ok_or(Error::MissingCertification)?;
    let regime = match certificate {
        LongestPathCertificate::BruteForce => Regime::Certified,
        LongestPathCertificate::Heuristic => Regime::Heuristic,
    };
    let state = rotation_closure(g, path, path.last(), levels)?;
    let mut report = ExpansionReport::new(
        "rotation-growth",
        format!("levels 0..{} of a {}-vertex path", state.levels(), path.len()),
        regime,
    );
    for t in 0..state.levels().saturating_sub(1) {
        let rt = state.level(t);
        let nb = g.neighborhood(&rt)?.len() as f64;
        let rhs = 0.5 * (nb - 3.0 * rt.len() as f64);
        let margin = state.level_size(t + 1) as f64 - rhs;
        if margin < 0.0 && report.failing_level.is_none() {
            report.failing_level = Some(t);
        }
        report.record(margin >= 0.0, margin, || rt);
    }
    Ok(report)
}

/// Measures `|R(A)| ≥ p^{-1} δ_{G'}(A) − εn/10` on random subsets `A` of the
/// discovered endpoints with `|A| ≥ εn/100`. Always heuristic: the path is
/// only known to have no extension, not to be longest.
pub fn rotation_expansion_diagnostic(
    gp: &Graph,
    path: &Path,
    eps: f64,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<ExpansionReport> {
    check_eps_p(eps, p)?;
    let n = gp.n();
    let state = rotation_closure(gp, path, path.last(), crate::rotation::default_level_cap(n))?;
    let endpoints = state.endpoints();
    let min_size = ((eps * n as f64 / 100.0).ceil() as usize).max(1);
    let mut report = ExpansionReport::new(
        "rotation-expansion",
        format!("{samples} subsets of {} endpoints with size >= {min_size}", endpoints.len()),
        Regime::Heuristic,
    );
    if endpoints.len() < min_size {
        report.notes.push(format!("only {} endpoints discovered; nothing to sample", endpoints.len()));
        return Ok(report);
    }
    let slack = eps * n as f64 / 10.0;
    let mut r = rng(seed);
    for _ in 0..samples {
        let k = r.random_range(min_size..=endpoints.len());
        let pick = random_subset(&mut r, endpoints.len(), k);
        let a = VertexSet::new(n, pick.iter().map(|i| endpoints.ids()[i]))?;
        let grown = endpoint_expand(gp, &state, &a)?;
        let bound = gp.min_degree_on(&a)? as f64 / p - slack;
        let margin = grown.len() as f64 - bound;
        report.record(margin >= 0.0, margin, || a);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::bipartite_cut_attack;
    use crate::graph::fixtures::{cycle, path, petersen};
    use crate::random::{gnp, GraphModelParams};
    use crate::rotation::{certify_longest, longest_path};
    use proptest::prelude::*;

    #[test]
    fn default_spec_sizes() {
        let s = SampleSpec::default_for(100, 1);
        assert_eq!(s.sizes, vec![1, 2, 4, 8, 16, 32]);
        assert!(!s.exhaustive);
        assert!(SampleSpec::default_for(16, 1).exhaustive);
    }

    #[test]
    fn empty_set_passes_small_bound() {
        assert_eq!(small_set_bound(100, 0.1, 0.5, 0), 0.0);
        let g = cycle(10);
        let r = check_small_set_expansion(&g, 0.1, 0.3, &SampleSpec::default_for(10, 0), Regime::Heuristic).unwrap();
        assert_eq!(r.checked(), 1 << 10);
    }

    #[test]
    fn single_vertex_bound() {
        // n = 1000, p = 0.1, ε = 0.2: ε·np/2 = 10, and the cap is larger.
        assert!((small_set_bound(1000, 0.2, 0.1, 1) - 10.0).abs() < 1e-12);
        let g = Graph::complete(12);
        let spec = SampleSpec { sizes: vec![1], sets_per_size: 5, seed: 3, exhaustive: false };
        let r = check_small_set_expansion(&g, 0.2, 0.5, &spec, Regime::Heuristic).unwrap();
        assert!(r.all_passed());
    }

    #[test]
    fn failure_stores_witness() {
        let g = Graph::empty(40);
        let spec = SampleSpec { sizes: vec![3], sets_per_size: 4, seed: 9, exhaustive: false };
        let r = check_small_set_expansion(&g, 0.5, 0.5, &spec, Regime::Heuristic).unwrap();
        assert_eq!(r.failed, 4);
        let x = r.counterexample.unwrap();
        assert_eq!(x.len(), 3);
        assert!(g.neighborhood(&x).unwrap().len() as f64 <= small_set_bound(40, 0.5, 0.5, 3));
    }

    #[test]
    fn large_sets() {
        let g = Graph::complete(30);
        let spec = SampleSpec { sizes: vec![1, 30], sets_per_size: 3, seed: 2, exhaustive: false };
        // δ = 29 and p = 0.99 give a bound of about 29.3 < 30; sizes are raised to 17.
        let r = check_large_set_expansion(&g, 0.1, 0.99, &spec, Regime::Heuristic).unwrap();
        assert!(r.all_passed(), "{r:?}");
        let mut g_iso = Graph::from_edges(30, (1..29).map(|i| (i, i + 1))).unwrap();
        let full = SampleSpec { sizes: vec![30], sets_per_size: 1, seed: 0, exhaustive: false };
        let r = check_large_set_expansion(&g_iso, 0.1, 0.1, &full, Regime::Heuristic).unwrap();
        assert!(r.all_passed());
        g_iso = Graph::empty(30);
        let r = check_large_set_expansion(&g_iso, 0.1, 0.1, &full, Regime::Heuristic).unwrap();
        assert_eq!(r.failed, 1);
    }

    #[test]
    fn connectivity_examples() {
        assert!(!check_connectivity(&Graph::empty(2)));
        assert!(check_connectivity(&petersen()));
        let g = gnp(GraphModelParams::new(200, 0.1).unwrap(), 3);
        let cut = bipartite_cut_attack(&g, 50, 4).unwrap();
        assert!(!check_connectivity(&cut.residual));
    }

    #[test]
    fn rotation_growth_requires_certificate() {
        let g = path(5);
        let p = longest_path(&g).unwrap();
        assert!(matches!(check_rotation_growth(&g, &p, None, 3), Err(Error::MissingCertification)));
        let r = check_rotation_growth(&g, &p, Some(LongestPathCertificate::BruteForce), 3).unwrap();
        assert_eq!(r.regime, Regime::Certified);
        let r = check_rotation_growth(&g, &p, Some(LongestPathCertificate::Heuristic), 3).unwrap();
        assert_eq!(r.regime, Regime::Heuristic);
    }

    #[test]
    fn rotation_growth_level_zero() {
        // K5 spanning path: N(v1) has 4 vertices, so R^1 needs at least ½(4 − 3).
        let g = Graph::complete(5);
        let p = Path::new(5, vec![0, 1, 2, 3, 4]).unwrap();
        let r = check_rotation_growth(&g, &p, Some(LongestPathCertificate::BruteForce), 1).unwrap();
        assert_eq!(r.checked(), 1);
        let state = rotation_closure(&g, &p, 4, 1).unwrap();
        assert!(state.level_size(1) as f64 >= 0.5 * (4.0 - 3.0));
        assert!(r.all_passed());
    }

    #[test]
    fn diagnostic_is_heuristic() {
        let g = gnp(GraphModelParams::new(300, 0.1).unwrap(), 11);
        let p = Path::new(300, (0..300).collect()).unwrap();
        let r = rotation_expansion_diagnostic(&g, &p, 0.1, 0.1, 10, 1).unwrap();
        assert_eq!(r.regime, Regime::Heuristic);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn growth_holds_on_certified_paths(n in 3usize..11, prob in 0.1f64..0.9, seed: u64, extra: u64) {
            // Longest paths of G ∪ P' for a random spanning path P'.
            let g = gnp(GraphModelParams::new(n, prob).unwrap(), seed);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| crate::random::mix64(extra ^ v as u64));
            let p_prime = Path::new(n, order).unwrap().as_graph(n);
            let working = g.union(&p_prime).unwrap();
            let lp = longest_path(&working).unwrap();
            let cert = certify_longest(&working, &lp).unwrap();
            let r = check_rotation_growth(&g, &lp, cert, n).unwrap();
            prop_assert!(r.all_passed(), "{:?}", r);
        }
    }
}
