//! Directed cycles, their balance ratios, and integer combinations of cycles
//! (elements of the cycle space over ℤ).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tournament::PairwiseOracle;
use crate::tree::SpanningTree;

/// A cyclic sequence of at least three distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedCycle(Vec<usize>);

impl DirectedCycle {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateCycle(format!(
                "length {} is below 3",
                vertices.len()
            )));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateCycle("repeated vertex".into()));
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive pairs `(v_i, v_{i+1})`, wrapping around.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        Self(v)
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&v| v >= n) {
            Some(&v) => Err(Error::VertexOutOfRange { vertex: v, n }),
            None => Ok(()),
        }
    }
}

/// `ln λ(C) = Σ ln(p_{v_i v_{i+1}} / p_{v_{i+1} v_i})`.
pub fn cycle_log_ratio<O: PairwiseOracle + ?Sized>(o: &O, c: &DirectedCycle) -> Result<f64> {
    c.check_range(o.vertex_count())?;
    Ok(c.arcs().map(|(a, b)| o.log_odds(a, b)).sum())
}

/// `λ(C) = Π p_{v_i v_{i+1}} / p_{v_{i+1} v_i}`.
pub fn cycle_ratio<O: PairwiseOracle + ?Sized>(o: &O, c: &DirectedCycle) -> Result<f64> {
    c.check_range(o.vertex_count())?;
    Ok(c.arcs()
        .map(|(a, b)| {
            let (pab, pba) = o.pair(a, b);
            pab / pba
        })
        .product())
}

pub fn is_cycle_balanced<O: PairwiseOracle + ?Sized>(
    o: &O,
    c: &DirectedCycle,
    tol: f64,
) -> Result<bool> {
    Ok(cycle_log_ratio(o, c)?.abs() <= tol)
}

/// An integer edge flow: coefficient `k` on `(lo, hi)` means `k` traversals
/// of `lo -> hi` (negative for `hi -> lo`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleChain {
    coeffs: BTreeMap<(usize, usize), i64>,
}

impl CycleChain {
    pub fn zero() -> Self {
        Self::default()
    }

    fn add_arc(&mut self, a: usize, b: usize, k: i64) {
        let (key, s) = if a < b { ((a, b), k) } else { ((b, a), -k) };
        let e = self.coeffs.entry(key).or_insert(0);
        *e += s;
        if *e == 0 {
            self.coeffs.remove(&key);
        }
    }

    pub fn from_cycle(c: &DirectedCycle) -> Self {
        let mut ch = Self::zero();
        for (a, b) in c.arcs() {
            ch.add_arc(a, b, 1);
        }
        ch
    }

    /// `self + k · other`.
    pub fn add_scaled(&mut self, other: &CycleChain, k: i64) {
        for (&(a, b), &c) in &other.coeffs {
            self.add_arc(a, b, k * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, a: usize, b: usize) -> i64 {
        if a < b {
            self.coeffs.get(&(a, b)).copied().unwrap_or(0)
        } else {
            -self.coeffs.get(&(b, a)).copied().unwrap_or(0)
        }
    }

    /// `ln λ` extended linearly: `Σ k_e ln(p_e / p_ē)`.
    pub fn log_ratio<O: PairwiseOracle + ?Sized>(&self, o: &O) -> f64 {
        self.coeffs
            .iter()
            .map(|(&(a, b), &k)| k as f64 * o.log_odds(a, b))
            .sum()
    }

    /// Splits the flow into simple directed cycles whose chains add up to
    /// `self`. Fails if the flow is not conserved at some vertex.
    pub fn decompose(&self) -> Result<Vec<DirectedCycle>> {
        let mut residual: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        let mut balance: BTreeMap<usize, i64> = BTreeMap::new();
        for (&(a, b), &k) in &self.coeffs {
            let (from, to) = if k > 0 { (a, b) } else { (b, a) };
            residual.insert((from, to), k.abs());
            *balance.entry(from).or_insert(0) += k.abs();
            *balance.entry(to).or_insert(0) -= k.abs();
        }
        if let Some((v, _)) = balance.iter().find(|(_, b)| **b != 0) {
            return Err(Error::DegenerateCycle(format!(
                "flow is not conserved at vertex {v}"
            )));
        }
        let mut cycles = Vec::new();
        while let Some((&(start, _), _)) = residual.iter().next() {
            let mut walk = vec![start];
            let mut pos: BTreeMap<usize, usize> = BTreeMap::from([(start, 0)]);
            let mut cur = start;
            loop {
                let next = residual
                    .range((cur, 0)..=(cur, usize::MAX))
                    .next()
                    .map(|(&(_, to), _)| to)
                    .expect("conserved flow always has an exit");
                if let Some(&i) = pos.get(&next) {
                    let cyc: Vec<usize> = walk[i..].to_vec();
                    let k = cyc.len();
                    for j in 0..k {
                        let arc = (cyc[j], cyc[(j + 1) % k]);
                        let c = residual.get_mut(&arc).expect("arc in residual");
                        *c -= 1;
                        if *c == 0 {
                            residual.remove(&arc);
                        }
                    }
                    cycles.push(DirectedCycle::new(cyc)?);
                    break;
                }
                pos.insert(next, walk.len());
                walk.push(next);
                cur = next;
            }
        }
        Ok(cycles)
    }
}

/// The cycle closed by chord `(u, v)`: the tree path `u ... v`, then `v -> u`.
pub fn fundamental_cycle(tree: &SpanningTree, u: usize, v: usize) -> Result<DirectedCycle> {
    if tree.contains(u, v) {
        return Err(Error::DegenerateCycle(format!("({u}, {v}) is a tree edge")));
    }
    DirectedCycle::new(tree.path(u, v))
}

/// Fundamental cycles of all chords, in chord order.
pub fn fundamental_cycles(tree: &SpanningTree) -> Vec<DirectedCycle> {
    tree.chords()
        .map(|(u, v)| fundamental_cycle(tree, u, v).expect("chord closes a cycle"))
        .collect()
}

/// Whether every fundamental cycle of `tree` is balanced within `tol`.
/// Fundamental cycles form a basis of the cycle space, so a `true` answer
/// means every cycle is balanced.
pub fn check_fundamental_cycles<O: PairwiseOracle + ?Sized>(
    o: &O,
    tree: &SpanningTree,
    tol: f64,
) -> Result<bool> {
    if tree.n() != o.vertex_count() {
        return Err(Error::NotASpanningTree(format!(
            "tree spans {} vertices, tournament has {}",
            tree.n(),
            o.vertex_count()
        )));
    }
    for c in fundamental_cycles(tree) {
        if !is_cycle_balanced(o, &c, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}
