//! Desk-scale bounds on the L1 distance to the nearest reversible tournament,
//! `min_{w' reversible} Σ_e |w(e) − w'(e)|`.
//!
//! Upper bound: the cheapest root repair, then coordinate descent over BT
//! log-scores on `Σ_{x<y} |p_xy − σ(s_x − s_y)|`, started from both the
//! least-squares fit and the repaired weighting. Every BT weighting is reversible, so each value found
//! is attainable.
//!
//! Lower bound: `max_T min(|α|, |β|, |γ|)`. A reversible weighting balances
//! every triangle, and balancing one triangle costs at least its cheapest
//! single-edge fix.

use serde::Serialize;

use crate::approx::scores_from_root;
use crate::balance::{discrepancy_unchecked, triangles};
use crate::error::{Error, Result};
use crate::fit::fit_log_scores;
use crate::numeric::{sigmoid, KahanSum};
use crate::repair::repair_with_root;
use crate::tournament::{PairwiseOracle, StochasticTournament, DEFAULT_TOL};

pub const MAX_ORACLE_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceBounds {
    pub upper: f64,
    pub lower: f64,
    /// Best root-repair cost.
    pub repair_upper: f64,
    /// Coordinate-descent objective at its final point.
    pub descent_upper: f64,
    pub sweeps: usize,
}

pub fn l1_distance_oracle(t: &StochasticTournament, budget: usize) -> Result<DistanceBounds> {
    let n = t.n();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge {
            n,
            max: MAX_ORACLE_VERTICES,
        });
    }
    if n < 3 {
        // every two-vertex tournament is a BT model
        return Ok(DistanceBounds {
            upper: 0.0,
            lower: 0.0,
            repair_upper: 0.0,
            descent_upper: 0.0,
            sweeps: 0,
        });
    }

    let mut best: Option<(f64, StochasticTournament, usize)> = None;
    for r in 0..n {
        let (out, rep) = repair_with_root(t, r, DEFAULT_TOL)?;
        if best.as_ref().is_none_or(|b| rep.total_change < b.0) {
            best = Some((rep.total_change, out, r));
        }
    }
    let (repair_upper, repaired, root) = best.expect("n >= 3");

    let lower = triangles(n)
        .map(|tri| discrepancy_unchecked(t, tri).min_fix())
        .fold(0.0, f64::max);

    // descend from the least-squares fit and from the repaired weighting
    let from_repair: Vec<f64> = scores_from_root(&repaired, root)?
        .as_slice()
        .iter()
        .map(|a| a.ln())
        .collect();
    let (f_lsq, sw_lsq) = descend(t, fit_log_scores(t), budget);
    let (f_rep, sw_rep) = descend(t, from_repair, budget);
    let f = f_lsq.min(f_rep);
    let sweeps = sw_lsq + sw_rep;

    Ok(DistanceBounds {
        upper: repair_upper.min(f),
        lower,
        repair_upper,
        descent_upper: f,
        sweeps,
    })
}

/// Coordinate descent for at most `budget` sweeps; returns the final
/// objective and the sweeps used.
fn descend(t: &StochasticTournament, mut s: Vec<f64>, budget: usize) -> (f64, usize) {
    let mut f = bt_l1(t, &s);
    let mut sweeps = 0;
    while sweeps < budget {
        sweeps += 1;
        let before = f;
        for x in 0..t.n() {
            let (sx, fx) = minimize_coordinate(t, &s, x);
            if fx < f {
                s[x] = sx;
                f = fx;
            }
        }
        if before - f <= 1e-15 * before.max(1e-300) {
            break;
        }
    }
    (f, sweeps)
}

/// `Σ_{x<y} |p_xy − σ(s_x − s_y)|`.
pub fn bt_l1(t: &StochasticTournament, s: &[f64]) -> f64 {
    let n = t.n();
    let mut acc = KahanSum::new();
    for x in 0..n {
        for y in x + 1..n {
            acc.add((t.p(x, y) - sigmoid(s[x] - s[y])).abs());
        }
    }
    acc.value()
}

/// Best value of coordinate `x`: each term `|p_xy − σ(u − s_y)|` vanishes at
/// `u = s_y + logit(p_xy)`; candidates are those breakpoints, refined by
/// golden-section search on the two neighbouring intervals.
fn minimize_coordinate(t: &StochasticTournament, s: &[f64], x: usize) -> (f64, f64) {
    let n = t.n();
    let mut work = s.to_vec();
    let mut eval = |u: f64| {
        work[x] = u;
        bt_l1(t, &work)
    };
    let mut points: Vec<f64> = (0..n)
        .filter(|&y| y != x)
        .map(|y| s[y] + t.log_odds(x, y))
        .collect();
    points.push(s[x]);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let vals: Vec<f64> = points.iter().map(|&u| eval(u)).collect();
    let (mut best_i, mut best_f) = (0, f64::INFINITY);
    for (i, &v) in vals.iter().enumerate() {
        if v < best_f {
            best_i = i;
            best_f = v;
        }
    }
    let mut best_u = points[best_i];
    for (a, b) in [
        (
            best_i.checked_sub(1).map(|j| points[j]),
            Some(points[best_i]),
        ),
        (Some(points[best_i]), points.get(best_i + 1).copied()),
    ] {
        if let (Some(a), Some(b)) = (a, b) {
            let (u, v) = golden_section(&mut eval, a, b, 60);
            if v < best_f {
                best_u = u;
                best_f = v;
            }
        }
    }
    (best_u, best_f)
}

fn golden_section<F: FnMut(f64) -> f64>(
    f: &mut F,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
