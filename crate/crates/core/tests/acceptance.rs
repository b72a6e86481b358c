//! Acceptance criteria A1–A10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Run one criterion with `cargo test --test acceptance -- A4`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use resilience_core::adversary::{bipartite_cut_attack, guarded_cut_attack, independent_set_attack, AttackResult};
use resilience_core::degree::{in_posa_family, ResilienceParams};
use resilience_core::expansion::{
    check_connectivity, check_large_set_expansion, check_rotation_growth, check_small_set_expansion,
    large_set_threshold, Regime, SampleSpec,
};
use resilience_core::experiment::{
    build_instance, run_experiment, run_trials, ExperimentConfig, Scenario, TrialRecord,
};
use resilience_core::matching::{brute_force_matching, max_matching};
use resilience_core::random::{check_degree_concentration, gnp, substream, GraphModelParams, RngSeed};
use resilience_core::rotation::{
    brute_force_hamiltonian, certify_longest, find_hamilton_cycle, longest_path, verify_hamilton_cycle, Budget,
};
use resilience_core::Graph;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn graph(n: usize, p: f64, seed: u64) -> Graph {
    gnp(GraphModelParams::new(n, p).unwrap(), seed)
}

/// Disjoint pairs of distinct vertices, each an edge of `g`.
fn matching_ok(g: &Graph, m: &[(usize, usize)]) -> bool {
    let mut used = vec![false; g.n()];
    m.iter().all(|&(u, v)| {
        let fresh = u != v && u < g.n() && v < g.n() && !used[u] && !used[v] && g.has_edge(u, v);
        if fresh {
            used[u] = true;
            used[v] = true;
        }
        fresh
    })
}

fn a1_soundness() -> Outcome {
    let seeds = RngSeed::new(0xA1);
    let (mut cycles, mut matchings, mut bad) = (0, 0, Vec::new());
    for i in 0..1200u64 {
        let seed = seeds.trial(i);
        let n = 5 + (seed % 196) as usize;
        let p = [0.05, 0.1, 0.2, 0.4, 0.7][(seed >> 8) as usize % 5];
        let g = graph(n, p, substream(seed, 0));
        let a = substream(seed, 1);
        let attacked: AttackResult = match i % 4 {
            0 => independent_set_attack(&g, n / 3, a).unwrap(),
            1 => bipartite_cut_attack(&g, n / 4, a).unwrap(),
            2 => guarded_cut_attack(&g, n / 10, n / 10 + 2, a).unwrap(),
            _ => independent_set_attack(&g, 0, a).unwrap(),
        };
        let residual = &attacked.residual;
        let report = find_hamilton_cycle(residual, substream(seed, 2), Budget::Default);
        if let Some(c) = &report.cycle {
            cycles += 1;
            if !verify_hamilton_cycle(residual, c) || !verify_hamilton_cycle(&g, c) {
                bad.push(format!("cycle in trial {i}"));
            }
        }
        let m = max_matching(residual);
        matchings += 1;
        if !matching_ok(residual, &m.matching) || m.matching.len() != m.size {
            bad.push(format!("matching in trial {i}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("1200 trials, {cycles} cycles and {matchings} matchings re-checked, failures {bad:?}"),
    )
}

fn a2_hamilton_oracle() -> Outcome {
    let mut disagreements = Vec::new();
    let mut positives = 0;
    for (k, &p) in [0.2, 0.4, 0.6, 0.8].iter().enumerate() {
        let seeds = RngSeed::new(0xA2 + k as u64);
        for i in 0..500u64 {
            let n = 3 + (i % 8) as usize;
            let g = graph(n, p, seeds.trial(i));
            let exact = brute_force_hamiltonian(&g).unwrap();
            let report = find_hamilton_cycle(&g, seeds.trial(i + 500), Budget::Exhaustive);
            let valid = report.cycle.as_deref().is_none_or(|c| verify_hamilton_cycle(&g, c));
            positives += exact as usize;
            if report.found() != exact || !valid {
                disagreements.push((p, i));
            }
        }
    }
    outcome(
        disagreements.is_empty(),
        format!("2000 graphs with n in 3..=10, {positives} Hamiltonian, disagreements {disagreements:?}"),
    )
}

fn a3_matching_oracle() -> Outcome {
    let mut disagreements = Vec::new();
    for (k, &p) in [0.2, 0.5, 0.8].iter().enumerate() {
        let seeds = RngSeed::new(0xA3 + k as u64);
        for i in 0..500u64 {
            let n = 1 + (i % 14) as usize;
            let g = graph(n, p, seeds.trial(i));
            if max_matching(&g).size != brute_force_matching(&g).unwrap() {
                disagreements.push((p, i));
            }
        }
    }
    outcome(disagreements.is_empty(), format!("1500 graphs with n in 1..=14, disagreements {disagreements:?}"))
}

fn a4_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(Scenario::PosaHamilton, 4096, 0.1);
    cfg.eps = 0.05;
    cfg.x_frac = 0.4;
    cfg.trials = 50;
    cfg.base_seed = 0xA4;
    cfg
}

fn a4_posa_resilience() -> Outcome {
    let out = run_experiment(&a4_config()).unwrap();
    let s = &out.summary;
    let slowest = out.records.iter().map(|r| r.wall_ms).max().unwrap_or(0);
    let member_rate = s.members as f64 / s.trials as f64;
    let ham_rate = s.member_property_rate.unwrap_or(0.0);
    outcome(
        member_rate >= 0.99 && ham_rate >= 0.95 && slowest < 60_000 && s.unverified == 0,
        format!(
            "membership {}/{}, Hamilton cycle in {}/{} members, slowest trial {slowest} ms",
            s.members, s.trials, s.member_property_holds, s.members
        ),
    )
}

fn members_only(cfg: &ExperimentConfig, wanted: usize, cap: usize) -> (Vec<TrialRecord>, usize) {
    let mut members = Vec::new();
    let mut next = 0;
    while members.len() < wanted && next < cap {
        let batch = (wanted - members.len()).min(cap - next);
        let records = run_trials(cfg, next..next + batch).unwrap();
        next += batch;
        members.extend(records.into_iter().filter(|r| r.member == Some(true)));
    }
    (members, next)
}

fn a5_matching_resilience() -> Outcome {
    let mut cfg = ExperimentConfig::new(Scenario::ChvatalMatching, 20_000, 0.05);
    cfg.eps = 0.002;
    cfg.delta = cfg.eps;
    cfg.x_frac = 100.0 * cfg.eps;
    cfg.u_offset = 2 * (cfg.eps * cfg.n as f64).ceil() as i64;
    cfg.base_seed = 0xA5;
    let (members, tried) = members_only(&cfg, 50, 200);
    let perfect = members.iter().filter(|r| r.property_holds).count();
    let verified = members.iter().all(|r| r.verified);
    outcome(
        members.len() == 50 && perfect as f64 >= 0.95 * 50.0 && verified,
        format!("{} membership-passing seeds out of {tried}, perfect matching in {perfect}", members.len()),
    )
}

fn a6_counterexample() -> Outcome {
    let mut cfg = ExperimentConfig::new(Scenario::Counterexample, 20_000, 0.05);
    cfg.eps = 0.002;
    cfg.eta = 0.01;
    cfg.trials = 50;
    cfg.base_seed = 0xA6;
    let out = run_experiment(&cfg).unwrap();
    let s = &out.summary;
    let no_optimal = out.records.iter().filter(|r| !r.property_holds).count();
    let member_rate = s.members as f64 / s.trials as f64;
    let gamma = out.records.first().and_then(|r| r.membership_delta).unwrap_or(f64::NAN);
    outcome(
        no_optimal == s.trials && member_rate >= 0.8 && s.unexplained_membership_failures == 0 && s.unverified == 0,
        format!(
            "no optimal matching in {no_optimal}/{}, H in the γ = {gamma:.6} family in {}/{}, unexplained membership failures {}",
            s.trials, s.members, s.trials, s.unexplained_membership_failures
        ),
    )
}

fn a7_expansion() -> Outcome {
    let cfg = a4_config();
    let n = cfg.n;
    let mut small_sizes = Vec::new();
    let mut k = 1;
    while k <= n / 2 {
        small_sizes.push(k);
        k *= 2;
    }
    let per_small = 1000usize.div_ceil(small_sizes.len());
    let lo = large_set_threshold(n);
    let large_sizes: Vec<usize> = (0..10).map(|i| lo + i * (n / 2 - lo) / 9).collect();
    let (mut failures, mut sets, mut disconnected) = (Vec::new(), 0u64, 0);
    for trial in 0..cfg.trials {
        let inst = build_instance(&cfg, trial).unwrap();
        let h = &inst.attack.as_ref().expect("A4 removes an independent set").h;
        let member = in_posa_family(h, &ResilienceParams::new(n, cfg.p, cfg.eps, 0.0).unwrap()).unwrap().member;
        let regime = if member { Regime::Certified } else { Regime::Heuristic };
        let gp = inst.residual();
        let seed = substream(inst.seed, 7);
        let small = SampleSpec { sizes: small_sizes.clone(), sets_per_size: per_small, seed, exhaustive: false };
        let large = SampleSpec { sizes: large_sizes.clone(), sets_per_size: 100, seed: seed ^ 1, exhaustive: false };
        let rs = check_small_set_expansion(gp, cfg.eps, cfg.p, &small, regime).unwrap();
        let rl = check_large_set_expansion(gp, cfg.eps, cfg.p, &large, regime).unwrap();
        assert!(rs.checked() >= 1000 && rl.checked() >= 1000);
        sets += rs.checked() + rl.checked();
        if !rs.all_passed() {
            failures.push(format!("small sets, trial {trial}, worst margin {}", rs.worst_margin));
        }
        if !rl.all_passed() {
            failures.push(format!("large sets, trial {trial}, worst margin {}", rl.worst_margin));
        }
        if !check_connectivity(gp) {
            disconnected += 1;
        }
    }
    outcome(
        failures.is_empty() && disconnected == 0,
        format!("{} residuals, {sets} sets checked, {disconnected} disconnected, failures {failures:?}", cfg.trials),
    )
}

fn a8_rotation_growth() -> Outcome {
    let seeds = RngSeed::new(0xA8);
    let (mut instances, mut pairs, mut failures) = (0, 0u64, Vec::new());
    for i in 0..240u64 {
        let n = 4 + (i % 7) as usize;
        let p = [0.25, 0.4, 0.6][(i / 7 % 3) as usize];
        let g = graph(n, p, seeds.trial(i));
        let path = longest_path(&g).unwrap();
        let Some(cert) = certify_longest(&g, &path).unwrap() else {
            failures.push(format!("instance {i} not certified"));
            continue;
        };
        instances += 1;
        let report = check_rotation_growth(&g, &path, Some(cert), n).unwrap();
        assert_eq!(report.regime, Regime::Certified);
        pairs += report.checked();
        if !report.all_passed() {
            failures.push(format!("instance {i} level {:?}", report.failing_level));
        }
    }
    outcome(
        instances >= 200 && pairs > 0 && failures.is_empty(),
        format!("{instances} certified longest paths, {pairs} (instance, level) pairs, failures {failures:?}"),
    )
}

fn a9_generator_statistics() -> Outcome {
    let (n, p) = (1000usize, 0.01);
    let pairs = (n * (n - 1) / 2) as f64;
    let (mean, sd) = (pairs * p, (pairs * p * (1.0 - p)).sqrt());
    let seeds = RngSeed::new(0xA9);
    let within = (0..1000u64).filter(|&i| (graph(n, p, seeds.trial(i)).m() as f64 - mean).abs() <= 4.0 * sd).count();

    let conc_seeds = RngSeed::new(0xA9 + 1);
    let runs = 100u64;
    let mut concentrated = 0;
    let mut violators = 0;
    for i in 0..runs {
        let c = check_degree_concentration(&graph(4096, 0.1, conc_seeds.trial(i)), 0.1, 0.1);
        concentrated += c.pass as usize;
        violators += c.violations;
    }
    let edges_ok = within as f64 >= 0.99 * 1000.0;
    let degrees_ok = concentrated as f64 >= 0.99 * runs as f64;
    outcome(
        edges_ok && degrees_ok,
        format!(
            "edge count within 4σ in {within}/1000; degree concentration (η = 0.1, n = 4096, p = 0.1) in {concentrated}/{runs}, mean {:.1} violating vertices per graph",
            violators as f64 / runs as f64
        ),
    )
}

fn a10_re_complements() -> Outcome {
    let (mut qualifying, mut total, mut failures) = (0, 0, Vec::new());
    for (k, &(n, p, p2, delta)) in
        [(5, 0.6, 0.3, 0.2), (6, 0.5, 0.4, 0.2), (7, 0.6, 0.3, 0.15), (8, 0.5, 0.5, 0.25), (8, 0.7, 0.2, 0.2)]
            .iter()
            .enumerate()
    {
        let mut cfg = ExperimentConfig::new(Scenario::ReComplement, n, p);
        cfg.p2 = p2;
        cfg.delta = delta;
        cfg.trials = 60;
        cfg.base_seed = 0xA10 + k as u64;
        for r in run_experiment(&cfg).unwrap().records {
            total += 1;
            if r.re_holds == Some(true) && r.complements_holds == Some(true) {
                qualifying += 1;
                if !r.property_holds {
                    failures.push((n, r.trial));
                }
            }
        }
    }
    outcome(
        qualifying >= 20 && failures.is_empty(),
        format!("{qualifying} of {total} pairs pass both checks, non-Hamiltonian unions {failures:?}"),
    )
}

type Check = fn() -> Outcome;

const CRITERIA: &[(&str, &str, Check)] = &[
    ("A1", "solver output soundness", a1_soundness),
    ("A2", "Hamiltonicity oracle agreement", a2_hamilton_oracle),
    ("A3", "matching oracle agreement", a3_matching_oracle),
    ("A4", "Posa-resilience desk check", a4_posa_resilience),
    ("A5", "matching-resilience desk check", a5_matching_resilience),
    ("A6", "counterexample reproduction", a6_counterexample),
    ("A7", "expansion suite on A4 residuals", a7_expansion),
    ("A8", "rotation growth on certified longest paths", a8_rotation_growth),
    ("A9", "generator statistics", a9_generator_statistics),
    ("A10", "RE and complements imply Hamiltonicity", a10_re_complements),
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    for &(id, title, check) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("{id} {status} {title} ({:.1} s): {}", start.elapsed().as_secs_f64(), result.detail);
        if !result.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
