//! Per-trial records and their CSV / JSON forms.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Column order of the trial CSV.
pub const CSV_HEADER: &str = "schema_version,scenario,trial,seed,n,p,p2,eps,delta,eta,attack,x_frac,u_offset,budget,\
membership_delta,h_edges,residual_edges,member,max_margin,first_violation,re_holds,complements_holds,solver,\
property_holds,verified,degree_concentration,e1,e2,rotations,matching_size,witness_size,wall_ms";

/// Floats as 17 significant digits in scientific notation, which parses
/// back to the identical value.
pub(crate) mod sig17 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn format(x: f64) -> String {
        if x.is_finite() {
            format!("{x:.16e}")
        } else {
            x.to_string()
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }

    pub mod opt {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_str(&super::format(*v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            match Option::<String>::deserialize(d)? {
                Some(s) if !s.is_empty() => s.parse().map(Some).map_err(serde::de::Error::custom),
                _ => Ok(None),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub schema_version: u32,
    pub scenario: String,
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    #[serde(with = "sig17")]
    pub p: f64,
    #[serde(with = "sig17")]
    pub p2: f64,
    #[serde(with = "sig17")]
    pub eps: f64,
    #[serde(with = "sig17")]
    pub delta: f64,
    #[serde(with = "sig17")]
    pub eta: f64,
    pub attack: String,
    #[serde(with = "sig17")]
    pub x_frac: f64,
    pub u_offset: i64,
    pub budget: String,
    /// The `δ` used for membership; differs from `delta` for the
    /// counterexample, which tests `γ = ⌈1/(3p)⌉ / n`.
    #[serde(with = "sig17::opt")]
    pub membership_delta: Option<f64>,
    pub h_edges: usize,
    pub residual_edges: usize,
    pub member: Option<bool>,
    #[serde(with = "sig17::opt")]
    pub max_margin: Option<f64>,
    pub first_violation: Option<usize>,
    pub re_holds: Option<bool>,
    pub complements_holds: Option<bool>,
    /// Solver outcome label, e.g. `cycle`, `budget-exhausted`, `matching`.
    pub solver: String,
    /// Whether the residual has the scenario's target property.
    pub property_holds: bool,
    /// Independent re-check of every object the solvers returned.
    pub verified: bool,
    pub degree_concentration: bool,
    pub e1: Option<bool>,
    pub e2: Option<bool>,
    pub rotations: Option<u64>,
    pub matching_size: Option<usize>,
    pub witness_size: Option<usize>,
    pub wall_ms: u64,
}

impl TrialRecord {
    /// Equality of everything except the wall-clock time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self { wall_ms: 0, ..self.clone() } == Self { wall_ms: 0, ..other.clone() }
    }
}

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for r in rd.deserialize() {
        out.push(r?);
    }
    Ok(out)
}
