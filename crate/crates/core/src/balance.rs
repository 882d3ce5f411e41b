//! Triangle balance ratios, ε-balance, discrepancy, and whole-tournament
//! discrepancy sums.
//!
//! Triangles are stored with sorted vertices `x < y < z` and always read in
//! the cyclic direction `x -> y -> z -> x`. The balance ratio is
//!
//! ```text
//! λ = (p_xy · p_yz · p_zx) / (p_yx · p_zy · p_xz)
//! ```
//!
//! and a triangle is balanced when `λ = 1`. Comparisons are done on
//! `|ln λ|`, since the condition is multiplicative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::tournament::PairwiseOracle;

/// Three distinct vertices in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triangle {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Triangle {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::DegenerateCycle(format!(
                "triangle ({a}, {b}, {c}) repeats a vertex"
            )));
        }
        Ok(Self {
            x: v[0],
            y: v[1],
            z: v[2],
        })
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.x == v || self.y == v || self.z == v
    }

    /// The two vertices other than `r`, in ascending order.
    pub fn opposite(&self, r: usize) -> Option<(usize, usize)> {
        match r {
            r if r == self.x => Some((self.y, self.z)),
            r if r == self.y => Some((self.x, self.z)),
            r if r == self.z => Some((self.x, self.y)),
            _ => None,
        }
    }

    pub(crate) fn check_range(&self, n: usize) -> Result<()> {
        if self.z >= n {
            Err(Error::VertexOutOfRange { vertex: self.z, n })
        } else {
            Ok(())
        }
    }
}

/// All `C(n, 3)` triangles in lexicographic order.
pub fn triangles(n: usize) -> impl Iterator<Item = Triangle> {
    (0..n).flat_map(move |x| {
        (x + 1..n).flat_map(move |y| (y + 1..n).map(move |z| Triangle { x, y, z }))
    })
}

/// Triangles through `r`, ordered by their opposite edge.
pub fn triangles_through(n: usize, r: usize) -> impl Iterator<Item = Triangle> {
    (0..n).filter(move |&u| u != r).flat_map(move |u| {
        (u + 1..n)
            .filter(move |&v| v != r)
            .map(move |v| Triangle::new(r, u, v).expect("distinct"))
    })
}

/// `ln λ` for the canonical orientation. Three edge queries.
pub fn triangle_log_ratio<O: PairwiseOracle + ?Sized>(o: &O, t: Triangle) -> f64 {
    o.log_odds(t.x, t.y) + o.log_odds(t.y, t.z) + o.log_odds(t.z, t.x)
}

/// `λ = (p_xy p_yz p_zx) / (p_yx p_zy p_xz)`.
pub fn triangle_ratio<O: PairwiseOracle + ?Sized>(o: &O, t: Triangle) -> Result<f64> {
    t.check_range(o.vertex_count())?;
    let (pxy, pyx) = o.pair(t.x, t.y);
    let (pyz, pzy) = o.pair(t.y, t.z);
    let (pzx, pxz) = o.pair(t.z, t.x);
    Ok((pxy * pyz * pzx) / (pyx * pzy * pxz))
}

/// `|ln λ| ≤ tol`.
pub fn is_balanced<O: PairwiseOracle + ?Sized>(o: &O, t: Triangle, tol: f64) -> Result<bool> {
    t.check_range(o.vertex_count())?;
    Ok(BalancePredicate::Exact { tol }.holds(triangle_log_ratio(o, t)))
}

/// `(1+eps)^-1 ≤ λ ≤ 1+eps`, compared as `|ln λ| ≤ ln(1+eps) + tol`.
pub fn is_eps_balanced<O: PairwiseOracle + ?Sized>(
    o: &O,
    t: Triangle,
    eps: f64,
    tol: f64,
) -> Result<bool> {
    t.check_range(o.vertex_count())?;
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    Ok(BalancePredicate::Approx { eps, tol }.holds(triangle_log_ratio(o, t)))
}

/// Smallest `eps` for which the triangle is `eps`-balanced: `e^{|ln λ|} - 1`.
pub fn triangle_eps<O: PairwiseOracle + ?Sized>(o: &O, t: Triangle) -> f64 {
    triangle_log_ratio(o, t).abs().exp_m1()
}

/// Which notion of "balanced" a check uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BalancePredicate {
    /// `|ln λ| ≤ tol`.
    Exact { tol: f64 },
    /// `|ln λ| ≤ ln(1 + eps) + tol`.
    Approx { eps: f64, tol: f64 },
}

impl BalancePredicate {
    pub fn holds(&self, log_ratio: f64) -> bool {
        match *self {
            BalancePredicate::Exact { tol } => log_ratio.abs() <= tol,
            BalancePredicate::Approx { eps, tol } => log_ratio.abs() <= eps.ln_1p() + tol,
        }
    }
}

/// Single-edge repair costs of a triangle.
///
/// `alpha`, `beta` and `gamma` are the signed amounts by which `p_xy`, `p_yz`
/// and `p_zx` exceed the value that would balance the triangle if that edge
/// alone were changed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Discrepancy {
    /// `max(|α|, |β|, |γ|)`.
    pub fn value(&self) -> f64 {
        self.alpha.abs().max(self.beta.abs()).max(self.gamma.abs())
    }

    /// `min(|α|, |β|, |γ|)`: the cheapest single-edge fix.
    pub fn min_fix(&self) -> f64 {
        self.alpha.abs().min(self.beta.abs()).min(self.gamma.abs())
    }
}

pub fn discrepancy<O: PairwiseOracle + ?Sized>(o: &O, t: Triangle) -> Result<Discrepancy> {
    t.check_range(o.vertex_count())?;
    Ok(discrepancy_unchecked(o, t))
}

pub(crate) fn discrepancy_unchecked<O: PairwiseOracle + ?Sized>(o: &O, t: Triangle) -> Discrepancy {
    let (pxy, pyx) = o.pair(t.x, t.y);
    let (pyz, pzy) = o.pair(t.y, t.z);
    let (pzx, pxz) = o.pair(t.z, t.x);
    Discrepancy {
        alpha: pxy - balancing_value(pzy * pxz, pyz * pzx),
        beta: pyz - balancing_value(pyx * pxz, pxy * pzx),
        gamma: pzx - balancing_value(pyx * pzy, pxy * pyz),
    }
}

/// `num / (num + other)`: the probability on one edge that balances a
/// triangle given the products contributed by the other two edges.
#[inline]
pub(crate) fn balancing_value(num: f64, other: f64) -> f64 {
    num / (num + other)
}

/// Whole-tournament discrepancy totals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancySums {
    /// `Σ_T disc(T)` over all triangles.
    pub total: f64,
    /// `Σ_{T ∋ r} disc(T)` for each vertex `r`.
    pub per_root: Vec<f64>,
    pub triangles: u64,
}

/// O(n³) scan of every triangle with compensated summation.
pub fn total_discrepancy<O: PairwiseOracle + Sync + ?Sized>(o: &O) -> DiscrepancySums {
    total_discrepancy_with_threads(o, 1)
}

/// Same as [`total_discrepancy`], spreading the leading vertex over
/// `threads` workers. Partial sums are kept per leading vertex and reduced in
/// vertex order, so the result does not depend on `threads`.
pub fn total_discrepancy_with_threads<O: PairwiseOracle + Sync + ?Sized>(
    o: &O,
    threads: usize,
) -> DiscrepancySums {
    let n = o.vertex_count();
    let slab = |x: usize| -> (KahanSum, Vec<KahanSum>, u64) {
        let mut total = KahanSum::new();
        let mut per_root = vec![KahanSum::new(); n];
        let mut count = 0;
        for y in x + 1..n {
            for z in y + 1..n {
                let d = discrepancy_unchecked(o, Triangle { x, y, z }).value();
                total.add(d);
                per_root[x].add(d);
                per_root[y].add(d);
                per_root[z].add(d);
                count += 1;
            }
        }
        (total, per_root, count)
    };

    let threads = threads.max(1).min(n.max(1));
    let slabs: Vec<(KahanSum, Vec<KahanSum>, u64)> = if threads == 1 {
        (0..n).map(slab).collect()
    } else {
        let mut out: Vec<Option<(KahanSum, Vec<KahanSum>, u64)>> = vec![None; n];
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    let slab = &slab;
                    s.spawn(move || {
                        (w..n)
                            .step_by(threads)
                            .map(|x| (x, slab(x)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (x, r) in h.join().expect("worker panicked") {
                    out[x] = Some(r);
                }
            }
        });
        out.into_iter()
            .map(|r| r.expect("every slab computed"))
            .collect()
    };

    let mut total = KahanSum::new();
    let mut per_root = vec![KahanSum::new(); n];
    let mut triangles = 0;
    for (t, pr, c) in &slabs {
        total.add(t.value());
        for (acc, v) in per_root.iter_mut().zip(pr) {
            acc.add(v.value());
        }
        triangles += c;
    }
    DiscrepancySums {
        total: total.value(),
        per_root: per_root.iter().map(KahanSum::value).collect(),
        triangles,
    }
}

/// Number of triangles failing `pred`, by exhaustive enumeration.
pub fn count_unbalanced<O: PairwiseOracle + ?Sized>(o: &O, pred: BalancePredicate) -> u64 {
    triangles(o.vertex_count())
        .filter(|&t| !pred.holds(triangle_log_ratio(o, t)))
        .count() as u64
}

/// Whether every triangle satisfies `pred`.
pub fn all_triangles_balanced<O: PairwiseOracle + ?Sized>(o: &O, pred: BalancePredicate) -> bool {
    triangles(o.vertex_count()).all(|t| pred.holds(triangle_log_ratio(o, t)))
}

/// Whether every triangle through `r` satisfies `pred`.
pub fn root_triangles_balanced<O: PairwiseOracle + ?Sized>(
    o: &O,
    r: usize,
    pred: BalancePredicate,
) -> bool {
    triangles_through(o.vertex_count(), r).all(|t| pred.holds(triangle_log_ratio(o, t)))
}

/// Largest `e^{|ln λ|} - 1` over triangles through `r`.
pub fn root_triangle_eps<O: PairwiseOracle + ?Sized>(o: &O, r: usize) -> f64 {
    triangles_through(o.vertex_count(), r)
        .map(|t| triangle_eps(o, t))
        .fold(0.0, f64::max)
}
