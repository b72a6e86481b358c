//! Degree-sequence conditions: the classical Pósa and Chvátal conditions and
//! membership in the removal families `H^ε`, `H^{ε,0}` and `H^{ε,δ}`.
//!
//! Vertices are ordered `v_1, ..., v_n` by non-increasing degree. Indices run
//! over the integers `1 <= i <= ceil(n/2) - 1`. The shifted index
//! `n - i - ceil(δn)` is evaluated with `δn` rounded up, and a shifted index
//! below 1 makes that branch false. Thresholds are compared with plain `<=`
//! in `f64`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `ceil(x)`, except that values within a relative 1e-9 of an integer snap to
/// it so that products such as `0.002 * 20000` land on the intended integer.
pub fn ceil_snap(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

/// `floor(x)` with the same snapping as [`ceil_snap`].
pub fn floor_snap(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r.max(0.0) as usize
    } else {
        x.floor().max(0.0) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResilienceParams {
    pub n: usize,
    pub p: f64,
    pub eps: f64,
    pub delta: f64,
    /// `εnp`.
    pub eps_np: f64,
    /// `ceil(δn)`.
    pub shift: usize,
}

impl ResilienceParams {
    pub fn new(n: usize, p: f64, eps: f64, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        crate::random::check_probability("p", p)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps = {eps} is not in (0, 1)")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("delta = {delta} is not in [0, 1)")));
        }
        Ok(Self { n, p, eps, delta, eps_np: eps * n as f64 * p, shift: ceil_snap(delta * n as f64) })
    }

    pub fn np(&self) -> f64 {
        self.n as f64 * self.p
    }

    /// Largest index tested: `ceil(n/2) - 1`.
    pub fn last_index(&self) -> usize {
        self.n.div_ceil(2).saturating_sub(1)
    }

    pub fn posa_threshold(&self, i: usize) -> f64 {
        (self.n - i) as f64 * self.p - self.eps_np
    }

    pub fn chvatal_threshold(&self, i: usize) -> f64 {
        i as f64 * self.p - self.eps_np
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BranchOutcome {
    pub index: usize,
    pub posa: bool,
    /// `None` for the Pósa family, which has no second branch.
    pub chvatal: Option<bool>,
}

impl BranchOutcome {
    pub fn holds(&self) -> bool {
        self.posa || self.chvatal == Some(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub first_violation: Option<BranchOutcome>,
    /// Largest `ε' >= 0` at which the same degree sequence would be a member;
    /// `-1` when there is none and `+inf` when no index is tested.
    pub max_margin: f64,
    pub branches: Vec<BranchOutcome>,
}

impl MembershipVerdict {
    pub fn violations(&self) -> impl Iterator<Item = &BranchOutcome> {
        self.branches.iter().filter(|b| !b.holds())
    }
}

fn check_order(h: &Graph, params: &ResilienceParams) -> Result<()> {
    if h.n() != params.n {
        return Err(Error::VertexCountMismatch { expected: params.n, found: h.n() });
    }
    Ok(())
}

/// Degrees sorted non-increasingly: `d(v_1) >= ... >= d(v_n)`.
pub fn decreasing_degrees(h: &Graph) -> Vec<usize> {
    let mut d = h.degrees();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

fn finish(branches: Vec<BranchOutcome>, margin: f64) -> MembershipVerdict {
    let first_violation = branches.iter().find(|b| !b.holds()).copied();
    let max_margin = if margin < 0.0 { -1.0 } else { margin };
    MembershipVerdict { member: first_violation.is_none(), first_violation, max_margin, branches }
}

fn normalised(slack: f64, np: f64) -> f64 {
    if np > 0.0 {
        slack / np
    } else if slack >= 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// `H^ε` membership from a non-increasing degree list.
pub fn posa_family_from_degrees(dec: &[usize], params: &ResilienceParams) -> MembershipVerdict {
    let np = params.np();
    let mut margin = f64::INFINITY;
    let branches = (1..=params.last_index())
        .map(|i| {
            let d = dec[i - 1] as f64;
            margin = margin.min(normalised((params.n - i) as f64 * params.p - d, np));
            BranchOutcome { index: i, posa: d <= params.posa_threshold(i), chvatal: None }
        })
        .collect();
    finish(branches, margin)
}

/// `H^{ε,δ}` membership from a non-increasing degree list.
pub fn chvatal_family_from_degrees(dec: &[usize], params: &ResilienceParams) -> MembershipVerdict {
    let (n, np) = (params.n, params.np());
    let mut margin = f64::INFINITY;
    let branches = (1..=params.last_index())
        .map(|i| {
            let d = dec[i - 1] as f64;
            let a = normalised((n - i) as f64 * params.p - d, np);
            let shifted = (n - i).checked_sub(params.shift).filter(|&j| j >= 1);
            let (chvatal, b) = match shifted {
                Some(j) => {
                    let dj = dec[j - 1] as f64;
                    (dj <= params.chvatal_threshold(i), normalised(i as f64 * params.p - dj, np))
                }
                None => (false, f64::NEG_INFINITY),
            };
            margin = margin.min(a.max(b));
            BranchOutcome { index: i, posa: d <= params.posa_threshold(i), chvatal: Some(chvatal) }
        })
        .collect();
    finish(branches, margin)
}

/// Membership in `H^ε` (Pósa-type caps).
pub fn in_posa_family(h: &Graph, params: &ResilienceParams) -> Result<MembershipVerdict> {
    check_order(h, params)?;
    Ok(posa_family_from_degrees(&decreasing_degrees(h), params))
}

/// Membership in `H^{ε,δ}`; `delta = 0` gives `H^{ε,0}`.
pub fn in_chvatal_family(h: &Graph, params: &ResilienceParams) -> Result<MembershipVerdict> {
    check_order(h, params)?;
    Ok(chvatal_family_from_degrees(&decreasing_degrees(h), params))
}

/// `Δ(H) <= (1 - ε)np`, a necessary condition for every family above.
pub fn max_degree_cap(h: &Graph, params: &ResilienceParams) -> bool {
    h.max_degree() as f64 <= (1.0 - params.eps) * params.np()
}

/// Pósa's condition on an increasing degree list: `d_i >= i + 1` for `i < n/2`.
pub fn classical_posa_from_degrees(inc: &[usize]) -> bool {
    let n = inc.len();
    n >= 3 && (1..=n.div_ceil(2) - 1).all(|i| inc[i - 1] > i)
}

/// Chvátal's condition: `d_i >= i + 1` or `d_{n-i} >= n - i` for `i < n/2`.
pub fn classical_chvatal_from_degrees(inc: &[usize]) -> bool {
    let n = inc.len();
    n >= 3 && (1..=n.div_ceil(2) - 1).all(|i| inc[i - 1] > i || inc[n - i - 1] >= n - i)
}

/// False for `n < 3`.
pub fn classical_posa(g: &Graph) -> bool {
    classical_posa_from_degrees(&g.degree_sequence().increasing)
}

/// False for `n < 3`.
pub fn classical_chvatal(g: &Graph) -> bool {
    classical_chvatal_from_degrees(&g.degree_sequence().increasing)
}
