//! Flat `key = value` experiment configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rotation::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Pósa-family removal, then a Hamilton cycle search on the residual.
    PosaHamilton,
    /// Shifted Chvátal-family removal, then maximum matching on the residual.
    ChvatalMatching,
    /// The explicit construction whose residual has no optimal matching.
    Counterexample,
    /// Exhaustive `RE(δ)` and complement checks on small graph pairs.
    ReComplement,
    /// Solver against exact oracles on small graphs.
    OracleSuite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    None,
    IndependentSet,
    BipartiteCut,
    GuardedCut,
    Counterexample,
}

macro_rules! keyword_enum {
    ($ty:ty { $($name:literal => $variant:expr),* $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)*
                    _ => Err(Error::InvalidParameter(format!("unknown {} `{s}`", stringify!($ty)))),
                }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let name = match self {
                    $(v if *v == $variant => $name,)*
                    _ => unreachable!(),
                };
                f.write_str(name)
            }
        }
    };
}

keyword_enum!(Scenario {
    "posa-hamilton" => Scenario::PosaHamilton,
    "chvatal-matching" => Scenario::ChvatalMatching,
    "counterexample" => Scenario::Counterexample,
    "re-complement" => Scenario::ReComplement,
    "oracle-suite" => Scenario::OracleSuite,
});

keyword_enum!(AttackKind {
    "none" => AttackKind::None,
    "independent-set" => AttackKind::IndependentSet,
    "bipartite-cut" => AttackKind::BipartiteCut,
    "guarded-cut" => AttackKind::GuardedCut,
    "counterexample" => AttackKind::Counterexample,
});

pub(crate) fn budget_to_string(b: Budget) -> String {
    match b {
        Budget::Default => "default".into(),
        Budget::Exhaustive => "exhaustive".into(),
        Budget::Rotations(r) => r.to_string(),
    }
}

pub fn parse_budget(s: &str) -> Result<Budget> {
    match s {
        "default" => Ok(Budget::Default),
        "exhaustive" => Ok(Budget::Exhaustive),
        _ => s
            .parse()
            .map(Budget::Rotations)
            .map_err(|_| Error::InvalidParameter(format!("budget `{s}` is not default, exhaustive or a count"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n: usize,
    pub p: f64,
    /// Edge probability of the second graph in `re-complement`.
    pub p2: f64,
    pub eps: f64,
    pub delta: f64,
    pub eta: f64,
    pub attack: AttackKind,
    /// Attack set size as a fraction of `n` (`|S|` or `|X|`), rounded.
    pub x_frac: f64,
    /// `|U| - |X|` for the guarded cut.
    pub u_offset: i64,
    pub trials: usize,
    pub base_seed: u64,
    pub budget: Budget,
    pub workers: usize,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario, n: usize, p: f64) -> Self {
        let attack = match scenario {
            Scenario::PosaHamilton => AttackKind::IndependentSet,
            Scenario::ChvatalMatching => AttackKind::GuardedCut,
            Scenario::Counterexample => AttackKind::Counterexample,
            Scenario::ReComplement | Scenario::OracleSuite => AttackKind::None,
        };
        Self {
            scenario,
            n,
            p,
            p2: p,
            eps: 0.05,
            delta: 0.0,
            eta: 0.1,
            attack,
            x_frac: 0.0,
            u_offset: 0,
            trials: 1,
            base_seed: 0,
            budget: Budget::Default,
            workers: 1,
            out_csv: None,
            out_json: None,
        }
    }

    /// Checks ranges and scenario/attack compatibility.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        for (name, v) in [("p", self.p), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} is not in [0, 1]"));
            }
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps = {} is not in (0, 1)", self.eps));
        }
        if !(0.0..1.0).contains(&self.delta)
            || self.eta.is_nan()
            || self.eta < 0.0
            || !(0.0..=1.0).contains(&self.x_frac)
        {
            return bad("delta must be in [0, 1), eta >= 0 and x_frac in [0, 1]".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        let ok = match self.scenario {
            Scenario::PosaHamilton => {
                matches!(self.attack, AttackKind::None | AttackKind::IndependentSet | AttackKind::BipartiteCut)
            }
            Scenario::ChvatalMatching => matches!(self.attack, AttackKind::None | AttackKind::GuardedCut),
            Scenario::Counterexample => self.attack == AttackKind::Counterexample,
            Scenario::ReComplement | Scenario::OracleSuite => self.attack == AttackKind::None,
        };
        if !ok {
            return bad(format!("attack {} does not fit scenario {}", self.attack, self.scenario));
        }
        if self.scenario == Scenario::ReComplement && (self.delta.is_nan() || self.delta <= 0.0) {
            return bad("re-complement needs delta > 0".into());
        }
        Ok(())
    }

    /// Renders every key, one per line, in a fixed order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("scenario", self.scenario.to_string());
        put("n", self.n.to_string());
        put("p", format!("{:?}", self.p));
        put("p2", format!("{:?}", self.p2));
        put("eps", format!("{:?}", self.eps));
        put("delta", format!("{:?}", self.delta));
        put("eta", format!("{:?}", self.eta));
        put("attack", self.attack.to_string());
        put("x_frac", format!("{:?}", self.x_frac));
        put("u_offset", self.u_offset.to_string());
        put("trials", self.trials.to_string());
        put("base_seed", self.base_seed.to_string());
        put("budget", budget_to_string(self.budget));
        put("workers", self.workers.to_string());
        if let Some(p) = &self.out_csv {
            put("out_csv", p.display().to_string());
        }
        if let Some(p) = &self.out_json {
            put("out_json", p.display().to_string());
        }
        s
    }

    /// Parses `key = value` lines; `#` starts a comment. `scenario`, `n` and
    /// `p` are required, everything else has the defaults of [`Self::new`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            pairs.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let find = |key: &str| pairs.iter().find(|(_, k, _)| k == key);
        let required = |key: &str| {
            find(key).ok_or_else(|| Error::Parse { line: 0, message: format!("missing required key `{key}`") })
        };
        let wrap = |line: usize, e: Error| Error::Parse { line, message: e.to_string() };
        fn num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Parse { line, message: format!("bad value `{v}` for `{key}`") })
        }

        let (l, _, v) = required("scenario")?;
        let scenario: Scenario = v.parse().map_err(|e| wrap(*l, e))?;
        let (l, _, v) = required("n")?;
        let n = num(*l, "n", v)?;
        let (l, _, v) = required("p")?;
        let mut cfg = Self::new(scenario, n, num(*l, "p", v)?);
        let mut p2_set = false;
        let mut seen = std::collections::BTreeSet::new();
        for (line, k, v) in &pairs {
            let line = *line;
            if !seen.insert(k.as_str()) {
                return Err(Error::Parse { line, message: format!("duplicate key `{k}`") });
            }
            match k.as_str() {
                "scenario" | "n" | "p" => {}
                "p2" => {
                    cfg.p2 = num(line, k, v)?;
                    p2_set = true;
                }
                "eps" => cfg.eps = num(line, k, v)?,
                "delta" => cfg.delta = num(line, k, v)?,
                "eta" => cfg.eta = num(line, k, v)?,
                "attack" => cfg.attack = v.parse().map_err(|e| wrap(line, e))?,
                "x_frac" => cfg.x_frac = num(line, k, v)?,
                "u_offset" => cfg.u_offset = num(line, k, v)?,
                "trials" => cfg.trials = num(line, k, v)?,
                "base_seed" => cfg.base_seed = num(line, k, v)?,
                "budget" => cfg.budget = parse_budget(v).map_err(|e| wrap(line, e))?,
                "workers" => cfg.workers = num(line, k, v)?,
                "out_csv" => cfg.out_csv = Some(PathBuf::from(v)),
                "out_json" => cfg.out_json = Some(PathBuf::from(v)),
                _ => return Err(Error::Parse { line, message: format!("unknown key `{k}`") }),
            }
        }
        if !p2_set {
            cfg.p2 = cfg.p;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_minimal_and_defaults() {
        let cfg = ExperimentConfig::parse("scenario = posa-hamilton\nn = 100\np = 0.1 # comment\n").unwrap();
        assert_eq!(cfg, ExperimentConfig::new(Scenario::PosaHamilton, 100, 0.1));
        assert_eq!(cfg.attack, AttackKind::IndependentSet);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(ExperimentConfig::parse("n = 5\np = 0.1"), Err(Error::Parse { .. })));
        assert!(matches!(
            ExperimentConfig::parse("scenario = posa-hamilton\nn = 5\np = 0.1\nfoo = 1"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(ExperimentConfig::parse("scenario = posa-hamilton\nn = 5\np = 0.1\nn = 6").is_err());
        assert!(ExperimentConfig::parse("scenario = counterexample\nn = 5\np = 0.1\nattack = none").is_err());
        assert!(ExperimentConfig::parse("scenario = posa-hamilton\nn = x\np = 0.1").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 1usize..100_000, p in 0.0f64..1.0, eps in 0.001f64..0.99, delta in 0.0f64..0.99,
                           x in 0.0f64..1.0, off in -100i64..100, trials in 0usize..1000, seed: u64,
                           budget in prop_oneof![Just(Budget::Default), Just(Budget::Exhaustive), (1u64..1 << 40).prop_map(Budget::Rotations)]) {
            let mut cfg = ExperimentConfig::new(Scenario::ChvatalMatching, n, p);
            cfg.eps = eps;
            cfg.delta = delta;
            cfg.x_frac = x;
            cfg.u_offset = off;
            cfg.trials = trials;
            cfg.base_seed = seed;
            cfg.budget = budget;
            cfg.p2 = p / 2.0;
            cfg.out_csv = Some("runs/a.csv".into());
            let back = ExperimentConfig::parse(&cfg.to_text()).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
