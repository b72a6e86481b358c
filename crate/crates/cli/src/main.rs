use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use resilience_core::adversary::{
    bipartite_cut_attack, guarded_cut_attack, independent_set_attack, matching_counterexample, CounterexampleParams,
};
use resilience_core::degree::{in_chvatal_family, in_posa_family, ResilienceParams};
use resilience_core::expansion::{
    check_connectivity, check_large_set_expansion, check_small_set_expansion, Regime, SampleSpec,
};
use resilience_core::experiment::{parse_budget, run_experiment, ExperimentConfig};
use resilience_core::io::{load_edge_list, save_edge_list};
use resilience_core::matching::max_matching;
use resilience_core::random::{bipartite_gnp, gnp, GraphModelParams};
use resilience_core::rotation::{find_hamilton_cycle, verify_hamilton_cycle};
use resilience_core::{Graph, VertexSet};

/// Exit code for a negative answer from `ham` and `match`.
const NOT_FOUND: u8 = 2;

#[derive(Parser)]
#[command(name = "resilience", version, about = "Resilience experiments on random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random graph and write it as an edge list.
    Gen(GenArgs),
    /// Remove an adversarial subgraph from a host graph.
    Attack(AttackArgs),
    /// Check a removal or a residual graph against a property.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Search for a Hamilton cycle (exit 2 when none is found).
    Ham(HamArgs),
    /// Maximum matching (exit 2 when no optimal matching exists).
    Match(MatchArgs),
    /// Run a seeded trial sweep from a config file.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    /// Random bipartite graph between the first `n/2` vertices and the rest.
    Bipartite,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Model::Gnp)]
    model: Model,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackKindArg {
    BipartiteCut,
    IndependentSet,
    GuardedCut,
    Counterexample,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long, value_enum)]
    kind: AttackKindArg,
    #[arg(long)]
    graph: PathBuf,
    /// `|I|`, `|S|` or `|X|`, depending on the kind.
    #[arg(long)]
    size: Option<usize>,
    /// `|U|` for the guarded cut.
    #[arg(long)]
    u_size: Option<usize>,
    /// Counterexample parameters.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Receives `h.edges`, `residual.edges` and `witness.json`.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Degree-sequence family membership of a removal `H`.
    Membership(MembershipArgs),
    /// Sampled small-set and large-set expansion of a residual graph.
    Expansion(ExpansionArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Posa,
    Chvatal,
}

#[derive(Args)]
struct MembershipArgs {
    /// Edge list of the removed subgraph.
    #[arg(long)]
    attack: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = Family::Chvatal)]
    family: Family,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExpansionArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    p: f64,
    /// Sets per size; all subsets are checked instead when `n <= 16`.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct HamArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `default`, `exhaustive` or a rotation count.
    #[arg(long, default_value = "default")]
    budget: String,
    /// Cycle as a vertex list, one id per line.
    #[arg(long)]
    emit_cycle: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    emit_matching: Option<PathBuf>,
    /// Tutte barrier as a JSON vertex list, written when the matching is not
    /// optimal.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Receives `trials.csv` and `summary.json`, overriding the paths in the
    /// config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn load(path: &Path) -> Result<Graph> {
    load_edge_list(path).with_context(|| format!("reading {}", path.display()))
}

fn write_json(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    let g = match args.model {
        Model::Gnp => gnp(GraphModelParams::new(args.n, args.p)?, args.seed),
        Model::Bipartite => {
            let half = args.n / 2;
            let a = VertexSet::new(args.n, 0..half)?;
            bipartite_gnp(&a, &a.complement(), args.p, args.seed)?
        }
    };
    save_edge_list(&g, &args.out)?;
    eprintln!("n = {}, m = {}", g.n(), g.m());
    Ok(ExitCode::SUCCESS)
}

fn attack(args: AttackArgs) -> Result<ExitCode> {
    let g = load(&args.graph)?;
    let need = |v: Option<usize>, flag: &str| v.with_context(|| format!("--{flag} is required for this kind"));
    let result = match args.kind {
        AttackKindArg::BipartiteCut => bipartite_cut_attack(&g, need(args.size, "size")?, args.seed)?,
        AttackKindArg::IndependentSet => independent_set_attack(&g, need(args.size, "size")?, args.seed)?,
        AttackKindArg::GuardedCut => {
            guarded_cut_attack(&g, need(args.size, "size")?, need(args.u_size, "u-size")?, args.seed)?
        }
        AttackKindArg::Counterexample => {
            let p = args.p.context("--p is required for the counterexample")?;
            let params = CounterexampleParams::new(g.n(), p, args.eps, args.eta)?;
            matching_counterexample(&g, &params, args.seed)?
        }
    };
    fs::create_dir_all(&args.out_dir)?;
    save_edge_list(&result.h, args.out_dir.join("h.edges"))?;
    save_edge_list(&result.residual, args.out_dir.join("residual.edges"))?;
    write_json(&serde_json::to_value(&result)?, Some(&args.out_dir.join("witness.json")))?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("removed {} of {} edges", result.h.m(), g.m());
    Ok(ExitCode::SUCCESS)
}

fn membership(args: MembershipArgs) -> Result<ExitCode> {
    let h = load(&args.attack)?;
    let n = args.n.unwrap_or(h.n());
    if n != h.n() {
        bail!("--n {n} does not match the {} vertices of the attack graph", h.n());
    }
    let params = ResilienceParams::new(n, args.p, args.eps, args.delta)?;
    let verdict = match args.family {
        Family::Posa => in_posa_family(&h, &params)?,
        Family::Chvatal => in_chvatal_family(&h, &params)?,
    };
    let violations: Vec<_> = verdict.violations().collect();
    let value = json!({
        "member": verdict.member,
        "max_margin": verdict.max_margin,
        "first_violation": verdict.first_violation,
        "indices_tested": verdict.branches.len(),
        "violations": violations,
    });
    write_json(&value, args.json_out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn expansion(args: ExpansionArgs) -> Result<ExitCode> {
    let g = load(&args.graph)?;
    let mut spec = SampleSpec::default_for(g.n(), args.seed);
    spec.sets_per_size = args.samples;
    let regime = if spec.exhaustive { Regime::Certified } else { Regime::Heuristic };
    let small = check_small_set_expansion(&g, args.eps, args.p, &spec, regime)?;
    let large = check_large_set_expansion(&g, args.eps, args.p, &spec, regime)?;
    let value = json!({
        "n": g.n(),
        "connected": check_connectivity(&g),
        "small_sets": small,
        "large_sets": large,
    });
    write_json(&value, args.json_out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn ham(args: HamArgs) -> Result<ExitCode> {
    let g = load(&args.graph)?;
    let report = find_hamilton_cycle(&g, args.seed, parse_budget(&args.budget)?);
    let value = json!({
        "found": report.found(),
        "failure": report.failure,
        "rotations": report.rotations,
        "restarts": report.restarts,
        "best_path_len": report.best_path.len(),
    });
    write_json(&value, None)?;
    match report.cycle {
        Some(cycle) => {
            if !verify_hamilton_cycle(&g, &cycle) {
                bail!("solver returned an invalid cycle");
            }
            if let Some(path) = &args.emit_cycle {
                let text: String = cycle.iter().map(|v| format!("{v}\n")).collect();
                fs::write(path, text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        None => Ok(ExitCode::from(NOT_FOUND)),
    }
}

fn matching(args: MatchArgs) -> Result<ExitCode> {
    let g = load(&args.graph)?;
    let m = max_matching(&g);
    let value = json!({
        "n": m.n,
        "size": m.size,
        "deficiency": m.deficiency,
        "optimal": m.is_optimal(),
        "witness_size": m.tutte_witness.as_ref().map(|w| w.len()),
    });
    write_json(&value, None)?;
    if let Some(path) = &args.emit_matching {
        save_edge_list(&Graph::from_edges(g.n(), m.matching.iter().copied())?, path)?;
    }
    if let (Some(path), Some(w)) = (&args.witness, &m.tutte_witness) {
        write_json(&json!(w.ids()), Some(path))?;
    }
    Ok(if m.is_optimal() { ExitCode::SUCCESS } else { ExitCode::from(NOT_FOUND) })
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let mut cfg = ExperimentConfig::load(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
        cfg.out_csv = Some(dir.join("trials.csv"));
        cfg.out_json = Some(dir.join("summary.json"));
    }
    let outcome = run_experiment(&cfg)?;
    outcome.emit()?;
    write_json(&serde_json::to_value(&outcome.summary)?, None)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Gen(a) => gen(a),
        Command::Attack(a) => attack(a),
        Command::Verify(VerifyCommand::Membership(a)) => membership(a),
        Command::Verify(VerifyCommand::Expansion(a)) => expansion(a),
        Command::Ham(a) => ham(a),
        Command::Match(a) => matching(a),
        Command::Experiment(a) => experiment(a),
    }
}
