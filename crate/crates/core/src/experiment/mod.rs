//! Seeded trial sweeps: generator, adversary, membership check, solver and
//! verification, with CSV and JSON output.
//!
//! Trial `i` uses the seed `RngSeed::new(base_seed).trial(i)`; the host
//! graph, the attack and the solver draw from substreams 0, 1 and 2 of it,
//! so any single trial can be replayed on its own.

mod config;
mod record;

use std::path::Path as FsPath;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use config::{parse_budget, AttackKind, ExperimentConfig, Scenario};
pub use record::{read_csv, write_csv, TrialRecord, CSV_HEADER, SCHEMA_VERSION};

use crate::adversary::{
    bipartite_cut_attack, guarded_cut_attack, independent_set_attack, matching_counterexample, AttackResult,
    CounterexampleParams,
};
use crate::degree::{in_chvatal_family, in_posa_family, MembershipVerdict, ResilienceParams};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matching::{brute_force_matching, max_matching, MatchingResult};
use crate::random::{check_degree_concentration, gnp, substream, GraphModelParams, RngSeed};
use crate::rotation::{
    brute_force_hamiltonian, check_complements, check_re, find_hamilton_cycle, verify_hamilton_cycle, Budget,
    CheckMode, RE_EXHAUSTIVE_LIMIT,
};

/// Largest `n` for the oracle suite.
pub const ORACLE_LIMIT: usize = 14;

/// The graphs of one trial, rebuilt from the configuration alone.
#[derive(Clone, Debug)]
pub struct TrialInstance {
    pub trial: usize,
    pub seed: u64,
    pub g: Graph,
    /// `None` for scenarios without removal.
    pub attack: Option<AttackResult>,
    /// The second graph of `re-complement`.
    pub g2: Option<Graph>,
}

impl TrialInstance {
    /// The graph the solver runs on.
    pub fn residual(&self) -> &Graph {
        self.attack.as_ref().map_or(&self.g, |a| &a.residual)
    }
}

pub fn trial_seed(cfg: &ExperimentConfig, trial: usize) -> u64 {
    RngSeed::new(cfg.base_seed).trial(trial as u64)
}

fn attack_size(cfg: &ExperimentConfig) -> usize {
    (cfg.x_frac * cfg.n as f64).round() as usize
}

fn counterexample_params(cfg: &ExperimentConfig) -> Result<CounterexampleParams> {
    CounterexampleParams::new(cfg.n, cfg.p, cfg.eps, cfg.eta)
}

pub fn build_instance(cfg: &ExperimentConfig, trial: usize) -> Result<TrialInstance> {
    let seed = trial_seed(cfg, trial);
    let g = gnp(GraphModelParams::new(cfg.n, cfg.p)?, substream(seed, 0));
    let attack_seed = substream(seed, 1);
    let attack = match cfg.attack {
        AttackKind::None => None,
        AttackKind::IndependentSet => Some(independent_set_attack(&g, attack_size(cfg), attack_seed)?),
        AttackKind::BipartiteCut => Some(bipartite_cut_attack(&g, attack_size(cfg), attack_seed)?),
        AttackKind::GuardedCut => {
            let x = attack_size(cfg);
            let u = x as i64 + cfg.u_offset;
            if u < 0 {
                return Err(Error::InvalidParameter(format!("|U| = |X| + u_offset = {u} is negative")));
            }
            Some(guarded_cut_attack(&g, x, u as usize, attack_seed)?)
        }
        AttackKind::Counterexample => Some(matching_counterexample(&g, &counterexample_params(cfg)?, attack_seed)?),
    };
    let g2 = (cfg.scenario == Scenario::ReComplement)
        .then(|| GraphModelParams::new(cfg.n, cfg.p2).map(|m| gnp(m, substream(seed, 3))))
        .transpose()?;
    Ok(TrialInstance { trial, seed, g, attack, g2 })
}

/// Disjoint edges of `g`, and a witness that really has a surplus of odd
/// components.
fn matching_is_sound(g: &Graph, m: &MatchingResult) -> bool {
    let mut used = vec![false; g.n()];
    for &(u, v) in &m.matching {
        if u >= g.n() || v >= g.n() || used[u] || used[v] || !g.has_edge(u, v) {
            return false;
        }
        used[u] = true;
        used[v] = true;
    }
    match &m.tutte_witness {
        Some(w) => g.components_minus(w).is_ok_and(|c| c.odd_count > w.len()),
        None => m.deficiency == 0,
    }
}

struct Outcome {
    membership_delta: Option<f64>,
    membership: Option<MembershipVerdict>,
    re_holds: Option<bool>,
    complements_holds: Option<bool>,
    solver: String,
    property_holds: bool,
    verified: bool,
    e1: Option<bool>,
    e2: Option<bool>,
    rotations: Option<u64>,
    matching: Option<MatchingResult>,
}

impl Outcome {
    fn new(solver: &str) -> Self {
        Self {
            membership_delta: None,
            membership: None,
            re_holds: None,
            complements_holds: None,
            solver: solver.into(),
            property_holds: false,
            verified: true,
            e1: None,
            e2: None,
            rotations: None,
            matching: None,
        }
    }

    fn with_matching(mut self, g: &Graph) -> Self {
        let m = max_matching(g);
        self.property_holds = m.is_optimal();
        self.verified = matching_is_sound(g, &m);
        self.matching = Some(m);
        self
    }
}

fn evaluate(cfg: &ExperimentConfig, inst: &TrialInstance) -> Result<Outcome> {
    let n = cfg.n;
    let residual = inst.residual();
    let h = inst.attack.as_ref().map(|a| &a.h);
    let empty;
    let h = match h {
        Some(h) => h,
        None => {
            empty = Graph::empty(n);
            &empty
        }
    };
    let out = match cfg.scenario {
        Scenario::PosaHamilton => {
            let params = ResilienceParams::new(n, cfg.p, cfg.eps, 0.0)?;
            let report = find_hamilton_cycle(residual, substream(inst.seed, 2), cfg.budget);
            let mut o = Outcome::new("cycle");
            o.membership_delta = Some(0.0);
            o.membership = Some(in_posa_family(h, &params)?);
            if let Some(kind) = report.failure {
                o.solver = serde_json::to_value(kind)?.as_str().unwrap_or("failure").to_string();
            }
            o.property_holds = report.found();
            o.verified = report.cycle.as_deref().is_none_or(|c| verify_hamilton_cycle(residual, c));
            o.rotations = Some(report.rotations);
            o
        }
        Scenario::ChvatalMatching => {
            let params = ResilienceParams::new(n, cfg.p, cfg.eps, cfg.delta)?;
            let mut o = Outcome::new("matching").with_matching(residual);
            o.membership_delta = Some(cfg.delta);
            o.membership = Some(in_chvatal_family(h, &params)?);
            o
        }
        Scenario::Counterexample => {
            let cp = counterexample_params(cfg)?;
            let params = ResilienceParams::new(n, cfg.p, cfg.eps, cp.gamma)?;
            let mut o = Outcome::new("matching").with_matching(residual);
            o.membership_delta = Some(cp.gamma);
            o.membership = Some(in_chvatal_family(h, &params)?);
            if let Some(rep) = inst.attack.as_ref().and_then(|a| a.counterexample.as_ref()) {
                o.e1 = Some(rep.e1);
                o.e2 = Some(rep.e2);
            }
            o
        }
        Scenario::ReComplement => {
            let g2 = inst.g2.as_ref().expect("re-complement builds a second graph");
            let re = check_re(&inst.g, cfg.delta, CheckMode::Exhaustive)?;
            let comp = check_complements(&inst.g, g2, cfg.delta, CheckMode::Exhaustive)?;
            let ham = brute_force_hamiltonian(&inst.g.union(g2)?)?;
            let mut o = Outcome::new("brute-force");
            o.re_holds = Some(re.holds);
            o.complements_holds = Some(comp.holds);
            o.property_holds = ham;
            o.verified = !(re.holds && comp.holds) || ham;
            o
        }
        Scenario::OracleSuite => {
            let report = find_hamilton_cycle(&inst.g, substream(inst.seed, 2), Budget::Exhaustive);
            let exact = brute_force_hamiltonian(&inst.g)?;
            let mut o = Outcome::new("exhaustive").with_matching(&inst.g);
            let sizes_agree = o.matching.as_ref().map(|m| m.size) == Some(brute_force_matching(&inst.g)?);
            let cycle_ok = report.cycle.as_deref().is_none_or(|c| verify_hamilton_cycle(&inst.g, c));
            o.property_holds = report.found() == exact && sizes_agree;
            o.verified = o.verified && cycle_ok && o.property_holds;
            o.rotations = Some(report.rotations);
            o
        }
    };
    Ok(out)
}

/// Runs one trial from scratch.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let inst = build_instance(cfg, trial)?;
    let o = evaluate(cfg, &inst)?;
    let concentration = check_degree_concentration(&inst.g, cfg.p, cfg.eta).pass;
    let h_edges = inst.attack.as_ref().map_or(0, |a| a.h.m());
    let verdict = o.membership.as_ref();
    Ok(TrialRecord {
        schema_version: SCHEMA_VERSION,
        scenario: cfg.scenario.to_string(),
        trial,
        seed: inst.seed,
        n: cfg.n,
        p: cfg.p,
        p2: cfg.p2,
        eps: cfg.eps,
        delta: cfg.delta,
        eta: cfg.eta,
        attack: cfg.attack.to_string(),
        x_frac: cfg.x_frac,
        u_offset: cfg.u_offset,
        budget: config::budget_to_string(cfg.budget),
        membership_delta: o.membership_delta,
        h_edges,
        residual_edges: inst.residual().m(),
        member: verdict.map(|v| v.member),
        max_margin: verdict.map(|v| v.max_margin),
        first_violation: verdict.and_then(|v| v.first_violation.map(|b| b.index)),
        re_holds: o.re_holds,
        complements_holds: o.complements_holds,
        solver: o.solver,
        property_holds: o.property_holds,
        verified: o.verified,
        degree_concentration: concentration,
        e1: o.e1,
        e2: o.e2,
        rotations: o.rotations,
        matching_size: o.matching.as_ref().map(|m| m.size),
        witness_size: o.matching.as_ref().and_then(|m| m.tutte_witness.as_ref().map(|w| w.len())),
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

fn rate(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Aggregates recomputed from the records alone.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub members: usize,
    pub property_holds: usize,
    pub property_rate: Option<f64>,
    /// Among trials whose removal passed the membership check.
    pub member_property_holds: usize,
    pub member_property_rate: Option<f64>,
    /// Trials whose host graph passed the degree concentration check.
    pub concentrated: usize,
    pub concentrated_member_property_rate: Option<f64>,
    /// Trials where an object returned by a solver failed re-checking.
    pub unverified: usize,
    /// Membership failures without any flagged concentration event.
    pub unexplained_membership_failures: usize,
    pub warnings: Vec<String>,
    /// `np / log n`, a covariate for the unquantified constant in
    /// `p >= C log n / n`.
    pub np_over_log_n: f64,
}

impl Summary {
    pub fn from_records(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Self {
        let member = |r: &&TrialRecord| r.member == Some(true);
        let members: Vec<_> = records.iter().filter(member).collect();
        let member_holds = members.iter().filter(|r| r.property_holds).count();
        let conc_members: Vec<_> = members.iter().filter(|r| r.degree_concentration).collect();
        let property_holds = records.iter().filter(|r| r.property_holds).count();
        let flagged = |r: &TrialRecord| !r.degree_concentration || r.e1 == Some(false) || r.e2 == Some(false);
        let nf = cfg.n as f64;
        let mut warnings = Vec::new();
        if cfg.n > 1 && cfg.p < nf.ln() / nf {
            warnings.push(format!("p = {} is below log n / n = {:.3e}", cfg.p, nf.ln() / nf));
        }
        Self {
            trials: records.len(),
            members: members.len(),
            property_holds,
            property_rate: rate(property_holds, records.len()),
            member_property_holds: member_holds,
            member_property_rate: rate(member_holds, members.len()),
            concentrated: records.iter().filter(|r| r.degree_concentration).count(),
            concentrated_member_property_rate: rate(
                conc_members.iter().filter(|r| r.property_holds).count(),
                conc_members.len(),
            ),
            unverified: records.iter().filter(|r| !r.verified).count(),
            unexplained_membership_failures: records.iter().filter(|r| r.member == Some(false) && !flagged(r)).count(),
            warnings,
            np_over_log_n: if cfg.n > 1 { nf * cfg.p / nf.ln() } else { f64::NAN },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentOutcome {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub records: Vec<TrialRecord>,
}

impl ExperimentOutcome {
    pub fn write_csv_to(&self, path: impl AsRef<FsPath>) -> Result<()> {
        write_csv(&self.records, std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn write_json_to(&self, path: impl AsRef<FsPath>) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(f, self)?;
        Ok(())
    }

    /// Writes to the configured output paths, if any.
    pub fn emit(&self) -> Result<()> {
        if let Some(p) = &self.config.out_csv {
            self.write_csv_to(p)?;
        }
        if let Some(p) = &self.config.out_json {
            self.write_json_to(p)?;
        }
        Ok(())
    }
}

fn check_scenario_size(cfg: &ExperimentConfig) -> Result<()> {
    let limit = match cfg.scenario {
        Scenario::ReComplement => RE_EXHAUSTIVE_LIMIT,
        Scenario::OracleSuite => ORACLE_LIMIT,
        _ => return Ok(()),
    };
    if cfg.n > limit {
        return Err(Error::TooLarge { what: "scenario graph", n: cfg.n, limit });
    }
    Ok(())
}

/// Runs trials `range` on a pool of `cfg.workers` threads; records come back
/// in trial order.
pub fn run_trials(cfg: &ExperimentConfig, range: std::ops::Range<usize>) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    check_scenario_size(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let mut records = pool.install(|| range.into_par_iter().map(|i| run_trial(cfg, i)).collect::<Result<Vec<_>>>())?;
    records.sort_by_key(|r| r.trial);
    Ok(records)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let records = run_trials(cfg, 0..cfg.trials)?;
    Ok(ExperimentOutcome {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        summary: Summary::from_records(cfg, &records),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(scenario: Scenario) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(scenario, 200, 0.2);
        cfg.trials = 4;
        cfg.base_seed = 7;
        cfg
    }

    #[test]
    fn zero_trials_give_header_only() {
        let mut cfg = small(Scenario::PosaHamilton);
        cfg.trials = 0;
        let out = run_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&out.records, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
        assert_eq!(out.summary.trials, 0);
        assert_eq!(out.summary.property_rate, None);
    }

    #[test]
    fn posa_scenario_runs_and_replays() {
        let mut cfg = small(Scenario::PosaHamilton);
        cfg.x_frac = 0.3;
        let a = run_experiment(&cfg).unwrap();
        assert_eq!(a.records.len(), 4);
        assert!(a.records.iter().all(|r| r.verified && r.member.is_some()));
        cfg.workers = 2;
        let b = run_experiment(&cfg).unwrap();
        assert!(a.records.iter().zip(&b.records).all(|(x, y)| x.same_outcome(y)));
        let again = run_trial(&cfg, 2).unwrap();
        assert!(again.same_outcome(&a.records[2]));
    }

    #[test]
    fn matching_scenarios() {
        let mut cfg = small(Scenario::ChvatalMatching);
        cfg.x_frac = 0.1;
        cfg.u_offset = 10;
        cfg.eps = 0.1;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.records.iter().all(|r| r.verified && r.matching_size.is_some()));

        let mut cfg = ExperimentConfig::new(Scenario::Counterexample, 2000, 0.05);
        cfg.eps = 0.002;
        cfg.eta = 0.01;
        cfg.trials = 2;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.records.iter().all(|r| !r.property_holds && r.verified && r.e1.is_some()));
        assert_eq!(out.summary.property_rate, Some(0.0));
    }

    #[test]
    fn small_graph_scenarios() {
        let mut cfg = ExperimentConfig::new(Scenario::ReComplement, 6, 0.6);
        cfg.delta = 0.25;
        cfg.trials = 5;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.records.iter().all(|r| r.verified && r.re_holds.is_some()));
        cfg.n = 9;
        assert!(matches!(run_experiment(&cfg), Err(Error::TooLarge { .. })));

        let mut cfg = ExperimentConfig::new(Scenario::OracleSuite, 9, 0.4);
        cfg.trials = 10;
        let out = run_experiment(&cfg).unwrap();
        assert!(out.records.iter().all(|r| r.property_holds && r.verified));
    }

    #[test]
    fn summary_matches_records() {
        let mut cfg = small(Scenario::PosaHamilton);
        cfg.x_frac = 0.45;
        cfg.eps = 0.2;
        let out = run_experiment(&cfg).unwrap();
        let s = &out.summary;
        assert_eq!(s.members, out.records.iter().filter(|r| r.member == Some(true)).count());
        assert_eq!(s.property_holds, out.records.iter().filter(|r| r.property_holds).count());
        assert_eq!(*s, Summary::from_records(&cfg, &out.records));
    }

    #[test]
    fn feasibility_warning() {
        let mut cfg = ExperimentConfig::new(Scenario::PosaHamilton, 1000, 0.001);
        cfg.trials = 0;
        assert!(!run_experiment(&cfg).unwrap().summary.warnings.is_empty());
    }

    #[test]
    fn csv_and_json_outputs_replay() {
        let dir = tempfile::tempdir().unwrap();
        let (csv, json) = (dir.path().join("t.csv"), dir.path().join("t.json"));
        let mut cfg = ExperimentConfig::parse(
            "scenario = chvatal-matching\nn = 300\np = 0.1\ndelta = 0.02\nx_frac = 0.05\nu_offset = 10\ntrials = 5\nbase_seed = 99\n",
        )
        .unwrap();
        cfg.out_csv = Some(csv.clone());
        cfg.out_json = Some(json.clone());
        let out = run_experiment(&cfg).unwrap();
        out.emit().unwrap();

        let back = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
        assert_eq!(back, out.records);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["summary"]["trials"], 5);

        let reloaded = ExperimentConfig::parse(&cfg.to_text()).unwrap();
        for r in &back {
            assert!(run_trial(&reloaded, r.trial).unwrap().same_outcome(r));
        }
    }

    #[test]
    fn worker_count_does_not_change_records() {
        let mut cfg = ExperimentConfig::new(Scenario::OracleSuite, 10, 0.5);
        cfg.trials = 30;
        cfg.base_seed = 4;
        let one = run_experiment(&cfg).unwrap();
        cfg.workers = 3;
        let three = run_experiment(&cfg).unwrap();
        assert!(one.records.iter().zip(&three.records).all(|(a, b)| a.same_outcome(b)));
        assert_eq!(one.summary, three.summary);
    }
}
