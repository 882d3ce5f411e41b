//! The one-sided constant-query tester.
//!
//! Draw `sample_size(eps, delta)` triangles independently and uniformly, query
//! their three edges, and accept iff every sampled triangle is balanced. If
//! the tournament is a Bradley–Terry model every triangle is balanced and the
//! tester always accepts. If it is ε-far, at least an ε fraction of triangles
//! is unbalanced, so all samples miss them with probability at most
//! `(1 - eps)^k ≤ delta`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::balance::{triangle_log_ratio, BalancePredicate, Triangle};
use crate::error::{Error, Result};
use crate::generate::rng_from_seed;
use crate::tournament::{PairwiseOracle, DEFAULT_TOL};

/// `⌈ln(1/delta) / -ln(1 - eps)⌉`, the least `k` with `(1 - eps)^k ≤ delta`.
/// With `delta = 1/3` this is `⌈-log_{1-eps} 3⌉`.
pub fn sample_size(eps: f64, delta: f64) -> Result<usize> {
    for (name, v) in [("eps", eps), ("delta", delta)] {
        if !(v.is_finite() && v > 0.0 && v < 1.0) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    let per = (-eps).ln_1p(); // ln(1 - eps) < 0
    let target = delta.ln(); // < 0
    let mut k = (target / per).ceil().max(1.0) as usize;
    // guard the ceiling against rounding right at integer ratios
    while k > 1 && (k - 1) as f64 * per <= target {
        k -= 1;
    }
    while (k as f64) * per > target {
        k += 1;
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestVerdict {
    pub outcome: Outcome,
    /// First unbalanced sampled triangle; present iff `Reject`.
    pub witness: Option<Triangle>,
    pub samples_used: usize,
    pub samples_requested: usize,
    /// Edge queries issued.
    pub queries: usize,
}

impl TestVerdict {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accept
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TesterConfig {
    /// Farness parameter in `(0, 1)`.
    pub eps: f64,
    /// Allowed failure probability on far inputs, in `(0, 1)`.
    pub delta: f64,
    pub seed: u64,
    /// Per-triangle check.
    pub predicate: BalancePredicate,
    /// Worker count; 1 runs the sequential sampler.
    pub threads: usize,
}

impl TesterConfig {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            delta: 1.0 / 3.0,
            seed: 0,
            predicate: BalancePredicate::Exact { tol: DEFAULT_TOL },
            threads: 1,
        }
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.predicate = match self.predicate {
            BalancePredicate::Exact { .. } => BalancePredicate::Exact { tol },
            BalancePredicate::Approx { eps, .. } => BalancePredicate::Approx { eps, tol },
        };
        self
    }

    /// Use the `(1+e)`-balanced predicate instead of exact balance.
    pub fn eps_balanced(mut self, e: f64) -> Self {
        let tol = match self.predicate {
            BalancePredicate::Exact { tol } | BalancePredicate::Approx { tol, .. } => tol,
        };
        self.predicate = BalancePredicate::Approx { eps: e, tol };
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self) -> Result<usize> {
        let k = sample_size(self.eps, self.delta)?;
        let (tol, extra) = match self.predicate {
            BalancePredicate::Exact { tol } => (tol, None),
            BalancePredicate::Approx { eps, tol } => (tol, Some(eps)),
        };
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::OutOfRange {
                name: "tol",
                value: tol,
            });
        }
        if let Some(e) = extra {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::OutOfRange {
                    name: "eps_balance",
                    value: e,
                });
            }
        }
        if self.threads == 0 {
            return Err(Error::OutOfRange {
                name: "threads",
                value: 0.0,
            });
        }
        Ok(k)
    }
}

/// Uniform triangles of `K_n`, drawn with replacement.
///
/// Each draw picks three distinct vertices by a virtual partial
/// Fisher–Yates shuffle (no array, three RNG calls), so every ordered triple
/// of distinct vertices is equally likely.
pub struct TriangleSampler {
    n: usize,
    rng: ChaCha8Rng,
}

impl TriangleSampler {
    pub fn new(n: usize, rng: ChaCha8Rng) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices { n, min: 3 });
        }
        Ok(Self { n, rng })
    }

    pub fn from_seed(n: usize, seed: u64) -> Result<Self> {
        Self::new(n, rng_from_seed(seed))
    }

    pub fn draw(&mut self) -> Triangle {
        let n = self.n;
        let a = self.rng.gen_range(0..n);
        let mut b = self.rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut c = self.rng.gen_range(0..n - 2);
        if c >= lo {
            c += 1;
        }
        if c >= hi {
            c += 1;
        }
        Triangle::new(a, b, c).expect("distinct by construction")
    }
}

/// Oracle wrapper counting edge queries.
pub struct CountingOracle<O> {
    inner: O,
    queries: AtomicUsize,
}

impl<O: PairwiseOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            queries: AtomicUsize::new(0),
        }
    }

    pub fn queries(&self) -> usize {
        self.queries.load(Ordering::Relaxed)
    }
}

impl<O: PairwiseOracle> PairwiseOracle for CountingOracle<O> {
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn pair(&self, x: usize, y: usize) -> (f64, f64) {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.pair(x, y)
    }
}

/// Runs the tester. Only the edges of sampled triangles are queried.
pub fn test_bt<O: PairwiseOracle + Sync>(o: &O, cfg: &TesterConfig) -> Result<TestVerdict> {
    let k = cfg.validate()?;
    let n = o.vertex_count();
    if n < 3 {
        return Err(Error::TooFewVertices { n, min: 3 });
    }
    if cfg.threads > 1 {
        return test_bt_parallel(o, cfg, k);
    }
    let counted = CountingOracle::new(o);
    let mut sampler = TriangleSampler::from_seed(n, cfg.seed)?;
    for i in 0..k {
        let t = sampler.draw();
        if !cfg.predicate.holds(triangle_log_ratio(&counted, t)) {
            return Ok(TestVerdict {
                outcome: Outcome::Reject,
                witness: Some(t),
                samples_used: i + 1,
                samples_requested: k,
                queries: counted.queries(),
            });
        }
    }
    Ok(TestVerdict {
        outcome: Outcome::Accept,
        witness: None,
        samples_used: k,
        samples_requested: k,
        queries: counted.queries(),
    })
}

/// First failing `(sample index, triangle)`, samples drawn, queries issued.
type WorkerResult = (Option<(usize, Triangle)>, usize, usize);

/// Worker `w` samples a contiguous block of indices from ChaCha stream
/// `w + 1` of the same seed. The witness is the failure with the lowest
/// global sample index.
fn test_bt_parallel<O: PairwiseOracle + Sync>(
    o: &O,
    cfg: &TesterConfig,
    k: usize,
) -> Result<TestVerdict> {
    let n = o.vertex_count();
    let workers = cfg.threads.min(k);
    let chunk = k.div_ceil(workers);
    let results: Vec<WorkerResult> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    let mut rng = rng_from_seed(cfg.seed);
                    rng.set_stream(w as u64 + 1);
                    let mut sampler = TriangleSampler::new(n, rng).expect("n >= 3");
                    let counted = CountingOracle::new(o);
                    let start = w * chunk;
                    let end = (start + chunk).min(k);
                    let mut used = 0;
                    for i in start..end {
                        let t = sampler.draw();
                        used += 1;
                        if !cfg.predicate.holds(triangle_log_ratio(&counted, t)) {
                            return (Some((i, t)), used, counted.queries());
                        }
                    }
                    (None, used, counted.queries())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let used = results.iter().map(|r| r.1).sum();
    let queries = results.iter().map(|r| r.2).sum();
    let first = results.iter().filter_map(|r| r.0).min_by_key(|(i, _)| *i);
    Ok(TestVerdict {
        outcome: if first.is_some() {
            Outcome::Reject
        } else {
            Outcome::Accept
        },
        witness: first.map(|(_, t)| t),
        samples_used: used,
        samples_requested: k,
        queries,
    })
}

/// Fraction of `samples` uniform triangles failing `pred`; an unbiased
/// estimate of the unbalanced fraction.
pub fn estimate_unbalanced_fraction<O: PairwiseOracle + ?Sized>(
    o: &O,
    samples: usize,
    seed: u64,
    pred: BalancePredicate,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::OutOfRange {
            name: "samples",
            value: 0.0,
        });
    }
    let mut sampler = TriangleSampler::from_seed(o.vertex_count(), seed)?;
    let bad = (0..samples)
        .filter(|_| !pred.holds(triangle_log_ratio(o, sampler.draw())))
        .count();
    Ok(bad as f64 / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_bt, gen_cyclic, random_scores};

    #[test]
    fn sample_sizes() {
        assert_eq!(sample_size(0.5, 1.0 / 3.0).unwrap(), 2);
        assert_eq!(sample_size(0.1, 1.0 / 3.0).unwrap(), 11);
        assert_eq!(sample_size(0.01, 1.0 / 3.0).unwrap(), 110);
        assert!(sample_size(0.0, 0.3).is_err());
        assert!(sample_size(0.5, 1.0).is_err());
        assert!(sample_size(f64::NAN, 0.3).is_err());
    }

    #[test]
    fn sample_size_is_minimal() {
        for i in 1..100 {
            let eps = i as f64 / 100.0;
            for delta in [0.01, 0.1, 1.0 / 3.0, 0.5] {
                let k = sample_size(eps, delta).unwrap();
                assert!((1.0 - eps).powi(k as i32) <= delta * (1.0 + 1e-12));
                if k > 1 {
                    assert!((1.0 - eps).powi(k as i32 - 1) > delta * (1.0 - 1e-12));
                }
            }
        }
    }

    #[test]
    fn cyclic_rejects_with_witness() {
        let t = gen_cyclic(3, 0.9).unwrap();
        let v = test_bt(&t, &TesterConfig::new(0.5).seed(7)).unwrap();
        assert_eq!(v.outcome, Outcome::Reject);
        assert_eq!(v.witness, Some(Triangle::new(0, 1, 2).unwrap()));
        assert_eq!(v.samples_used, 1);
        assert_eq!(v.queries, 3);
    }

    #[test]
    fn bt_accepts_and_counts_queries() {
        let t = gen_bt(&random_scores(40, 0.1, 10.0, 3).unwrap()).unwrap();
        for seed in 0..50 {
            let cfg = TesterConfig::new(0.05).seed(seed);
            let v = test_bt(&t, &cfg).unwrap();
            assert!(v.accepted());
            assert_eq!(v.witness, None);
            assert_eq!(v.queries, 3 * v.samples_requested);
        }
    }

    #[test]
    fn parallel_matches_outcome_on_extremes() {
        let bt = gen_bt(&random_scores(20, 0.1, 10.0, 1).unwrap()).unwrap();
        let cfg = TesterConfig::new(0.05).seed(3).threads(4);
        let v = test_bt(&bt, &cfg).unwrap();
        assert!(v.accepted());
        assert_eq!(v.samples_used, v.samples_requested);
        assert_eq!(v, test_bt(&bt, &cfg).unwrap());

        let cyc = gen_cyclic(3, 0.9).unwrap();
        let v = test_bt(&cyc, &TesterConfig::new(0.1).threads(4)).unwrap();
        assert_eq!(v.outcome, Outcome::Reject);
        assert!(v.samples_used <= v.samples_requested);
    }

    #[test]
    fn config_errors() {
        let t = gen_cyclic(3, 0.9).unwrap();
        assert!(test_bt(&t, &TesterConfig::new(1.5)).is_err());
        assert!(test_bt(&t, &TesterConfig::new(0.5).delta(0.0)).is_err());
        assert!(test_bt(&t, &TesterConfig::new(0.5).threads(0)).is_err());
        assert!(test_bt(&t, &TesterConfig::new(0.5).tol(-1.0)).is_err());
        let two = crate::tournament::StochasticTournament::from_entries(2, &[(0, 1, 0.3)]).unwrap();
        assert_eq!(
            test_bt(&two, &TesterConfig::new(0.5)),
            Err(Error::TooFewVertices { n: 2, min: 3 })
        );
    }

    #[test]
    fn eps_balanced_predicate_accepts_mild_cycles() {
        // λ = (0.51/0.49)^3 ≈ 1.127 on the only triangle
        let t = gen_cyclic(3, 0.51).unwrap();
        let strict = test_bt(&t, &TesterConfig::new(0.5)).unwrap();
        assert_eq!(strict.outcome, Outcome::Reject);
        let loose = test_bt(&t, &TesterConfig::new(0.5).eps_balanced(0.2)).unwrap();
        assert!(loose.accepted());
    }

    #[test]
    fn estimates() {
        let exact = BalancePredicate::Exact { tol: DEFAULT_TOL };
        let bt = gen_bt(&random_scores(8, 0.1, 10.0, 1).unwrap()).unwrap();
        assert_eq!(
            estimate_unbalanced_fraction(&bt, 500, 1, exact).unwrap(),
            0.0
        );
        let cyc = gen_cyclic(3, 0.9).unwrap();
        assert_eq!(
            estimate_unbalanced_fraction(&cyc, 50, 1, exact).unwrap(),
            1.0
        );
        assert!(estimate_unbalanced_fraction(&cyc, 0, 1, exact).is_err());
    }
}
