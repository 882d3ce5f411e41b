//! Least-squares scores on log-odds.
//!
//! Minimizes `F(s) = Σ_{x<y} (r_xy − (s_x − s_y))²` with
//! `r_xy = ln(p_xy / p_yx)`. On the complete graph the normal equations
//! `(nI − J) s = b`, `b_x = Σ_{y≠x} r_xy`, have the solution `s = b / n`
//! (unique up to an additive constant, since `Σ_x b_x = 0`). Scores are
//! `a(x) = exp(s_x − s_0)`.

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::tournament::{PairwiseOracle, ScoreVector, StochasticTournament};

/// Log-scores minimizing `F`, shifted so `s_0 = 0`.
pub fn fit_log_scores(t: &StochasticTournament) -> Vec<f64> {
    let n = t.n();
    let mut b = vec![KahanSum::new(); n];
    for x in 0..n {
        for y in x + 1..n {
            let r = t.log_odds(x, y);
            b[x].add(r);
            b[y].add(-r);
        }
    }
    let s: Vec<f64> = b.iter().map(|v| v.value() / n as f64).collect();
    let s0 = s[0];
    s.iter().map(|v| v - s0).collect()
}

/// Scores from [`fit_log_scores`], normalized to `a(0) = 1`.
pub fn fit_scores_least_squares(t: &StochasticTournament) -> ScoreVector {
    ScoreVector::new(fit_log_scores(t).into_iter().map(f64::exp).collect())
        .expect("exp of finite log-scores is positive")
}

/// `F(s)` at log-scores `s`.
pub fn log_odds_objective(t: &StochasticTournament, s: &[f64]) -> Result<f64> {
    check_len(t, s.len())?;
    let mut f = KahanSum::new();
    for x in 0..t.n() {
        for y in x + 1..t.n() {
            let d = t.log_odds(x, y) - (s[x] - s[y]);
            f.add(d * d);
        }
    }
    Ok(f.value())
}

/// `∇F(s)`.
pub fn log_odds_gradient(t: &StochasticTournament, s: &[f64]) -> Result<Vec<f64>> {
    check_len(t, s.len())?;
    let mut g = vec![0.0; t.n()];
    for x in 0..t.n() {
        for y in x + 1..t.n() {
            let d = t.log_odds(x, y) - (s[x] - s[y]);
            g[x] -= 2.0 * d;
            g[y] += 2.0 * d;
        }
    }
    Ok(g)
}

/// `F` evaluated at `ln a`.
pub fn log_odds_residual(t: &StochasticTournament, a: &ScoreVector) -> Result<f64> {
    let s: Vec<f64> = a.as_slice().iter().map(|v| v.ln()).collect();
    log_odds_objective(t, &s)
}

fn check_len(t: &StochasticTournament, len: usize) -> Result<()> {
    if len == t.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: t.n(),
            found: len,
        })
    }
}
