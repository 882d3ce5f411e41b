//! Root repair: rebalance every triangle through a vertex `r` by rewriting
//! only the edge opposite `r`.
//!
//! Each edge `{u, v}` with `u, v ≠ r` lies in exactly one triangle through
//! `r`, so the edits do not interact. Once all triangles through `r` are
//! balanced, every triangle is, and the result is reversible.

use serde::Serialize;

use crate::balance::{
    balancing_value, discrepancy_unchecked, total_discrepancy_with_threads, triangle_log_ratio,
    BalancePredicate, Triangle,
};
use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::tournament::{PairwiseOracle, StochasticTournament, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeEdit {
    /// The edit is on the present edge `tail -> head`.
    pub tail: usize,
    pub head: usize,
    pub old: f64,
    pub new: f64,
    /// `disc(T)` of the triangle formed with the root.
    pub disc: f64,
    /// The balancing value fell outside `[floor, 1 - floor]` and was clamped.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepairReport {
    pub root: usize,
    pub edits: Vec<EdgeEdit>,
    /// `Σ |w - w'|`.
    pub total_change: f64,
    /// `Σ_{T ∋ root} disc(T)` on the input.
    pub root_disc_sum: f64,
    /// Every edit moved its edge by at most that triangle's `disc`.
    pub per_edge_bound_ok: bool,
}

impl RepairReport {
    pub fn clamped(&self) -> bool {
        self.edits.iter().any(|e| e.clamped)
    }
}

/// Rewrites every edge `{x, y}` with `x, y ≠ r` to the value that balances
/// `{r, x, y}`, i.e. `p'_xy / p'_yx = (p_xr / p_rx) · (p_ry / p_yr)`.
/// Triangles already balanced within `tol` are left alone.
pub fn repair_with_root(
    t: &StochasticTournament,
    r: usize,
    tol: f64,
) -> Result<(StochasticTournament, RepairReport)> {
    let n = t.n();
    if r >= n {
        return Err(Error::VertexOutOfRange { vertex: r, n });
    }
    if n < 3 {
        return Err(Error::TooFewVertices { n, min: 3 });
    }
    let floor = t.floor();
    let pred = BalancePredicate::Exact { tol };
    let mut out = t.clone();
    let mut edits = Vec::new();
    let mut change = KahanSum::new();
    let mut root_sum = KahanSum::new();
    let mut bound_ok = true;

    for x in 0..n {
        if x == r {
            continue;
        }
        for y in x + 1..n {
            if y == r {
                continue;
            }
            let tri = Triangle::new(r, x, y)?;
            let d = discrepancy_unchecked(t, tri).value();
            root_sum.add(d);
            if pred.holds(triangle_log_ratio(t, tri)) {
                continue;
            }
            let (pxr, prx) = t.pair(x, r);
            let (pry, pyr) = t.pair(r, y);
            let target = balancing_value(pxr * pry, prx * pyr);
            let e = t.edge(x, y)?;
            let raw = if e.tail == x { target } else { 1.0 - target };
            let w = raw.clamp(floor, 1.0 - floor);
            let clamped = w != raw || !w.is_finite();
            if w == e.weight {
                continue;
            }
            out.set_edge_weight(e.tail, e.head, w)?;
            let moved = (w - e.weight).abs();
            change.add(moved);
            // the rewritten edge's single-edge fix is one of α, β, γ
            if moved > d + 4.0 * f64::EPSILON {
                bound_ok = false;
            }
            edits.push(EdgeEdit {
                tail: e.tail,
                head: e.head,
                old: e.weight,
                new: w,
                disc: d,
                clamped,
            });
        }
    }
    Ok((
        out,
        RepairReport {
            root: r,
            edits,
            total_change: change.value(),
            root_disc_sum: root_sum.value(),
            per_edge_bound_ok: bound_ok,
        },
    ))
}

/// Vertex minimizing `Σ_{T ∋ r} disc(T)`; lowest id among ties.
///
/// Sums within `TIE_SLACK` of the minimum count as ties, so rounding noise on
/// balanced inputs does not decide the root.
pub fn best_root(t: &StochasticTournament) -> Result<usize> {
    best_root_with_threads(t, 1)
}

const TIE_SLACK: f64 = 1e-12;

pub fn best_root_with_threads(t: &StochasticTournament, threads: usize) -> Result<usize> {
    let n = t.n();
    if n < 3 {
        return Err(Error::TooFewVertices { n, min: 3 });
    }
    let sums = total_discrepancy_with_threads(t, threads);
    Ok(argmin_with_ties(&sums.per_root))
}

pub(crate) fn argmin_with_ties(v: &[f64]) -> usize {
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    v.iter()
        .position(|&s| s <= min + TIE_SLACK * min.abs().max(1.0))
        .expect("non-empty")
}

/// Repair at [`best_root`]. The total change is at most
/// `(3/n) Σ_T disc(T)`.
pub fn repair(t: &StochasticTournament, tol: f64) -> Result<(StochasticTournament, RepairReport)> {
    repair_with_root(t, best_root(t)?, tol)
}

pub fn repair_default(t: &StochasticTournament) -> Result<(StochasticTournament, RepairReport)> {
    repair(t, DEFAULT_TOL)
}
