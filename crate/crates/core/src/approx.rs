//! Scores from a root vertex, approximate Bradley–Terry verification, and
//! the passage from scores to stationary distributions.
//!
//! The chain of implications checked here:
//!
//! * every triangle through `r` is ε-balanced ⇒ `scores_from_root(t, r)` is
//!   an ε-approximate score;
//! * `a` is an ε-approximate score ⇒ `π ∝ 1/a` is 3ε-approximately
//!   reversible;
//! * ε-approximately reversible ⇒ every triangle is 7ε-balanced.

use crate::balance::{triangle_log_ratio, triangles, BalancePredicate};
use crate::error::{Error, Result};
use crate::tournament::{
    check_nonneg, check_reversible, PairwiseOracle, ScoreVector, StationaryDistribution,
    StochasticTournament,
};

/// `a(r) = 1`, `a(y) = p_yr / p_ry`.
pub fn scores_from_root(t: &StochasticTournament, r: usize) -> Result<ScoreVector> {
    let n = t.n();
    if r >= n {
        return Err(Error::VertexOutOfRange { vertex: r, n });
    }
    ScoreVector::new(
        (0..n)
            .map(|y| {
                if y == r {
                    1.0
                } else {
                    let (pyr, pry) = t.pair(y, r);
                    pyr / pry
                }
            })
            .collect(),
    )
}

/// Largest `|ln p_xy − ln(a(x) / (a(x) + a(y)))|` over ordered pairs.
pub fn approx_bt_log_gap(t: &StochasticTournament, a: &ScoreVector) -> Result<f64> {
    check_len(t, a.len())?;
    let a = a.as_slice();
    let mut worst = 0.0f64;
    for x in 0..t.n() {
        for y in x + 1..t.n() {
            let (pxy, pyx) = t.pair(x, y);
            let s = a[x] + a[y];
            worst = worst
                .max((pxy.ln() - (a[x] / s).ln()).abs())
                .max((pyx.ln() - (a[y] / s).ln()).abs());
        }
    }
    Ok(worst)
}

/// `(1+eps)^-1 · a(x)/(a(x)+a(y)) ≤ p_xy ≤ (1+eps) · a(x)/(a(x)+a(y))` for
/// every ordered pair, on a log scale with `tol` slack.
pub fn verify_approx_bt(
    t: &StochasticTournament,
    a: &ScoreVector,
    eps: f64,
    tol: f64,
) -> Result<bool> {
    check_nonneg("eps", eps)?;
    check_nonneg("tol", tol)?;
    Ok(approx_bt_log_gap(t, a)? <= eps.ln_1p() + tol)
}

/// Smallest `eps` (to within `precision`) accepted by
/// [`verify_approx_bt`], found by bisection.
pub fn min_approx_bt_eps(
    t: &StochasticTournament,
    a: &ScoreVector,
    tol: f64,
    precision: f64,
) -> Result<f64> {
    check_len(t, a.len())?;
    if !(precision.is_finite() && precision > 0.0) {
        return Err(Error::OutOfRange {
            name: "precision",
            value: precision,
        });
    }
    if verify_approx_bt(t, a, 0.0, tol)? {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while !verify_approx_bt(t, a, hi, tol)? {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::OutOfRange {
                name: "eps",
                value: hi,
            });
        }
    }
    let mut lo = 0.0;
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        if verify_approx_bt(t, a, mid, tol)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `π_x = (1/a(x)) / Σ_z 1/a(z)`.
pub fn scores_to_stationary(a: &ScoreVector) -> StationaryDistribution {
    let inv: Vec<f64> = a.as_slice().iter().map(|v| 1.0 / v).collect();
    StationaryDistribution::from_measure(&inv).expect("positive scores give a distribution")
}

/// Under the precondition that `(t, π)` is ε-approximately reversible,
/// reports whether every triangle is 7ε-balanced.
pub fn check_seven_eps(
    t: &StochasticTournament,
    pi: &StationaryDistribution,
    eps: f64,
    tol: f64,
) -> Result<bool> {
    if !check_reversible(t, pi, eps, tol)? {
        return Err(Error::PreconditionFailed(format!(
            "tournament is not {eps}-approximately reversible under the given distribution"
        )));
    }
    // the 3 tolerance slacks of a triangle's three pairs add up
    let pred = BalancePredicate::Approx {
        eps: 7.0 * eps,
        tol: 3.0 * tol,
    };
    Ok(triangles(t.n()).all(|tri| pred.holds(triangle_log_ratio(t, tri))))
}

fn check_len(t: &StochasticTournament, len: usize) -> Result<()> {
    if len != t.n() {
        Err(Error::DimensionMismatch {
            expected: t.n(),
            found: len,
        })
    } else {
        Ok(())
    }
}
