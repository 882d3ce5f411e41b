//! Stochastic tournaments, their Markov chains, and the score / stationary
//! vectors attached to them.
//!
//! A tournament on `n` vertices stores one weight per unordered pair,
//! together with the orientation of the edge that carries it. The reverse
//! probability is always derived as `1 - w`, so `p(x, y) + p(y, x) == 1`
//! holds for every pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible edge weight; every weight lives in `[floor, 1 - floor]`.
pub const DEFAULT_FLOOR: f64 = 1e-12;

/// Default tolerance on `|ln λ|` for "balanced" and on the relative gap in
/// detailed balance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Read access to pairwise win probabilities.
///
/// One call to [`PairwiseOracle::pair`] is one edge query: it returns both
/// `p_xy` and `p_yx`. Callers guarantee `x != y` and both in range.
pub trait PairwiseOracle {
    fn vertex_count(&self) -> usize;

    /// `(p_xy, p_yx)`.
    fn pair(&self, x: usize, y: usize) -> (f64, f64);

    fn p(&self, x: usize, y: usize) -> f64 {
        self.pair(x, y).0
    }

    /// `ln(p_xy / p_yx)`.
    fn log_odds(&self, x: usize, y: usize) -> f64 {
        let (pxy, pyx) = self.pair(x, y);
        crate::numeric::log_odds(pxy, pyx)
    }
}

impl<T: PairwiseOracle + ?Sized> PairwiseOracle for &T {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }

    fn pair(&self, x: usize, y: usize) -> (f64, f64) {
        (**self).pair(x, y)
    }
}

/// A directed edge of the tournament and the weight it carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

/// Complete graph with one oriented, weighted edge per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticTournament {
    n: usize,
    floor: f64,
    /// Weight of the present edge for pair index `pair_index(lo, hi)`.
    weights: Vec<f64>,
    /// `true` when the present edge is `lo -> hi`.
    forward: Vec<bool>,
}

#[inline]
fn pair_index(n: usize, lo: usize, hi: usize) -> usize {
    debug_assert!(lo < hi && hi < n);
    lo * (2 * n - lo - 1) / 2 + (hi - lo - 1)
}

pub(crate) fn check_probability(p: f64, floor: f64) -> Result<()> {
    if p.is_finite() && p >= floor && p <= 1.0 - floor {
        Ok(())
    } else {
        Err(Error::OutOfRangeProbability { value: p, floor })
    }
}

impl StochasticTournament {
    /// Builds a tournament from one `(x, y, p)` entry per unordered pair. The
    /// entry direction becomes the orientation of the edge.
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        Self::from_entries_with_floor(n, entries, DEFAULT_FLOOR)
    }

    pub fn from_entries_with_floor(
        n: usize,
        entries: &[(usize, usize, f64)],
        floor: f64,
    ) -> Result<Self> {
        let mut builder = TournamentBuilder::new(n, floor)?;
        for &(x, y, p) in entries {
            builder.insert(x, y, p)?;
        }
        builder.finish()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn pair_count(&self) -> usize {
        self.weights.len()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub(crate) fn check_pair(&self, x: usize, y: usize) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::SelfLoop { vertex: x });
        }
        Ok(())
    }

    /// `p_xy`, the probability that `x` beats `y`.
    pub fn prob(&self, x: usize, y: usize) -> Result<f64> {
        self.check_pair(x, y)?;
        Ok(self.p(x, y))
    }

    /// The present edge between `x` and `y`.
    pub fn edge(&self, x: usize, y: usize) -> Result<Edge> {
        self.check_pair(x, y)?;
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let i = pair_index(self.n, lo, hi);
        let (tail, head) = if self.forward[i] { (lo, hi) } else { (hi, lo) };
        Ok(Edge {
            tail,
            head,
            weight: self.weights[i],
        })
    }

    /// All present edges, pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |lo| {
            (lo + 1..self.n).map(move |hi| {
                let i = pair_index(self.n, lo, hi);
                let (tail, head) = if self.forward[i] { (lo, hi) } else { (hi, lo) };
                Edge {
                    tail,
                    head,
                    weight: self.weights[i],
                }
            })
        })
    }

    /// Sets `p_xy = p`, keeping the edge orientation. Returns the old weight of
    /// the present edge.
    pub fn set_prob(&mut self, x: usize, y: usize, p: f64) -> Result<f64> {
        self.check_pair(x, y)?;
        check_probability(p, self.floor)?;
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let i = pair_index(self.n, lo, hi);
        let along = self.forward[i] == (x < y);
        let w = if along { p } else { 1.0 - p };
        check_probability(w, self.floor)?;
        Ok(std::mem::replace(&mut self.weights[i], w))
    }

    /// Sets the weight of the present edge directly.
    pub fn set_edge_weight(&mut self, x: usize, y: usize, w: f64) -> Result<f64> {
        self.check_pair(x, y)?;
        check_probability(w, self.floor)?;
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let i = pair_index(self.n, lo, hi);
        Ok(std::mem::replace(&mut self.weights[i], w))
    }

    /// Dense matrix `P` with an unspecified (zero) diagonal.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                if x != y {
                    m[x][y] = self.p(x, y);
                }
            }
        }
        m
    }

    pub fn markov_matrix(&self) -> MarkovMatrix {
        MarkovMatrix::from_tournament(self)
    }
}

impl PairwiseOracle for StochasticTournament {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn pair(&self, x: usize, y: usize) -> (f64, f64) {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let i = pair_index(self.n, lo, hi);
        let w = self.weights[i];
        // along == "x -> y is the present edge"
        let along = self.forward[i] == (x < y);
        if along {
            (w, 1.0 - w)
        } else {
            (1.0 - w, w)
        }
    }
}

/// Incremental construction with duplicate / missing pair detection.
#[derive(Debug, Clone)]
pub struct TournamentBuilder {
    n: usize,
    floor: f64,
    weights: Vec<f64>,
    forward: Vec<bool>,
    seen: Vec<bool>,
}

impl TournamentBuilder {
    pub fn new(n: usize, floor: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices { n, min: 2 });
        }
        if !(floor.is_finite() && (0.0..0.5).contains(&floor)) {
            return Err(Error::OutOfRange {
                name: "floor",
                value: floor,
            });
        }
        let m = n * (n - 1) / 2;
        Ok(Self {
            n,
            floor,
            weights: vec![0.0; m],
            forward: vec![true; m],
            seen: vec![false; m],
        })
    }

    /// Adds the directed edge `x -> y` with weight `p`.
    pub fn insert(&mut self, x: usize, y: usize, p: f64) -> Result<()> {
        for v in [x, y] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        if x == y {
            return Err(Error::SelfLoop { vertex: x });
        }
        check_probability(p, self.floor)?;
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let i = pair_index(self.n, lo, hi);
        if self.seen[i] {
            return Err(Error::DuplicatePair { x: lo, y: hi });
        }
        self.seen[i] = true;
        self.weights[i] = p;
        self.forward[i] = x < y;
        Ok(())
    }

    pub fn finish(self) -> Result<StochasticTournament> {
        if let Some(i) = self.seen.iter().position(|s| !s) {
            let (x, y) = unpair(self.n, i);
            return Err(Error::MissingPair { x, y });
        }
        Ok(StochasticTournament {
            n: self.n,
            floor: self.floor,
            weights: self.weights,
            forward: self.forward,
        })
    }
}

fn unpair(n: usize, mut i: usize) -> (usize, usize) {
    for lo in 0..n {
        let row = n - lo - 1;
        if i < row {
            return (lo, lo + 1 + i);
        }
        i -= row;
    }
    unreachable!("pair index out of range")
}

/// Row-stochastic transition matrix of the chain attached to a tournament:
/// `q_xy = p_xy / n` off the diagonal, `q_xx = 1 - (1/n) Σ_{z≠x} p_xz`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMatrix {
    n: usize,
    q: Vec<f64>,
}

impl MarkovMatrix {
    pub fn from_tournament(t: &StochasticTournament) -> Self {
        let n = t.n();
        let nf = n as f64;
        let mut q = vec![0.0; n * n];
        for x in 0..n {
            let mut out = 0.0;
            for y in 0..n {
                if x != y {
                    let v = t.p(x, y) / nf;
                    q[x * n + y] = v;
                    out += v;
                }
            }
            q[x * n + x] = 1.0 - out;
        }
        Self { n, q }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.q[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.q[x * self.n..(x + 1) * self.n]
    }
}

/// Probability vector with strictly positive entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDistribution(Vec<f64>);

impl StationaryDistribution {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if pi.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(v) = pi.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "entry {v} is not strictly positive"
            )));
        }
        let s: f64 = pi.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("sums to {s}")));
        }
        Ok(Self(pi))
    }

    /// Normalizes a positive measure.
    pub fn from_measure(mu: &[f64]) -> Result<Self> {
        let s: f64 = mu.iter().sum();
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidDistribution(format!("total mass {s}")));
        }
        Self::new(mu.iter().map(|v| v / s).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Bradley–Terry scores `a(x) > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidScores("empty".into()));
        }
        if let Some(v) = a.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidScores(format!(
                "score {v} is not strictly positive and finite"
            )));
        }
        Ok(Self(a))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies every score by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * c).collect())
    }
}

/// Detailed-balance check of `(t, π)`.
///
/// With `eps == 0` every pair must satisfy
/// `|π_x p_xy − π_y p_yx| / max(π_x p_xy, π_y p_yx) ≤ tol`. With `eps > 0`
/// the ratio `π_x p_xy / (π_y p_yx)` must lie in `[(1+eps)^-1, 1+eps]`,
/// compared on a log scale with `tol` slack. Since `q_xy = p_xy / n`, this is
/// the same as detailed balance for the Markov matrix.
pub fn check_reversible(
    t: &StochasticTournament,
    pi: &StationaryDistribution,
    eps: f64,
    tol: f64,
) -> Result<bool> {
    if pi.len() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            found: pi.len(),
        });
    }
    check_nonneg("eps", eps)?;
    check_nonneg("tol", tol)?;
    let pi = pi.as_slice();
    let bound = eps.ln_1p() + tol;
    for x in 0..t.n() {
        for y in x + 1..t.n() {
            let (pxy, pyx) = t.pair(x, y);
            let lhs = pi[x] * pxy;
            let rhs = pi[y] * pyx;
            let ok = if eps == 0.0 {
                (lhs - rhs).abs() <= tol * lhs.max(rhs)
            } else {
                (lhs.ln() - rhs.ln()).abs() <= bound
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Largest `|ln(π_x p_xy / (π_y p_yx))|` over all pairs.
pub fn max_detailed_balance_log_gap(
    t: &StochasticTournament,
    pi: &StationaryDistribution,
) -> Result<f64> {
    if pi.len() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            found: pi.len(),
        });
    }
    let pi = pi.as_slice();
    let mut worst = 0.0f64;
    for x in 0..t.n() {
        for y in x + 1..t.n() {
            let (pxy, pyx) = t.pair(x, y);
            worst = worst.max(((pi[x] * pxy).ln() - (pi[y] * pyx).ln()).abs());
        }
    }
    Ok(worst)
}

pub(crate) fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value: v })
    }
}
