//! Extending spanning-tree weights to a reversible tournament.
//!
//! A stationary measure is built along the tree from the lowest-id vertex,
//! `π(child) = π(parent) · ŵ / (1 − ŵ)` with `ŵ = p_{parent,child}`. Every
//! chord `{x, y}` then receives the unique weight with
//! `p_xy / p_yx = π(y) / π(x)`. Tree edges are copied bit-for-bit.

use serde::Serialize;

use crate::error::Result;
use crate::numeric::{log_odds, sigmoid};
use crate::tournament::{
    check_probability, StationaryDistribution, StochasticTournament, TournamentBuilder,
    DEFAULT_FLOOR,
};
use crate::tree::SpanningTree;

/// Spanning-tree edges `tail -> head` with weights `ŵ = p_{tail,head}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeWeights {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    tree: SpanningTree,
}

impl TreeWeights {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let tree = SpanningTree::new(n, edges.iter().map(|&(a, b, _)| (a, b)).collect())?;
        for &(_, _, w) in &edges {
            check_probability(w, DEFAULT_FLOOR)?;
        }
        Ok(Self { n, edges, tree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    pub tournament: StochasticTournament,
    pub stationary: StationaryDistribution,
    /// Chords whose detailed-balance value had to be clamped.
    pub clamped: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize)]
pub struct ExtensionSummary {
    pub clamped: Vec<(usize, usize)>,
    pub stationary: Vec<f64>,
}

impl Extension {
    pub fn summary(&self) -> ExtensionSummary {
        ExtensionSummary {
            clamped: self.clamped.clone(),
            stationary: self.stationary.as_slice().to_vec(),
        }
    }
}

pub fn extend_tree(tw: &TreeWeights) -> Result<Extension> {
    let n = tw.n;
    let tree = &tw.tree;
    // log-odds ln(p_{u,v} / p_{v,u}) on tree edges, both directions
    let mut lo = vec![None; n * n];
    for &(a, b, w) in &tw.edges {
        let l = log_odds(w, 1.0 - w);
        lo[a * n + b] = Some(l);
        lo[b * n + a] = Some(-l);
    }
    // ln π, with π(0) = 1
    let mut log_pi = vec![0.0; n];
    for v in tree.bfs_order() {
        if let Some(p) = tree.parent(v) {
            log_pi[v] = log_pi[p] + lo[p * n + v].expect("tree edge");
        }
    }

    let mut b = TournamentBuilder::new(n, DEFAULT_FLOOR)?;
    for &(a, bb, w) in &tw.edges {
        b.insert(a, bb, w)?;
    }
    let mut clamped = Vec::new();
    for (x, y) in tree.chords() {
        let raw = sigmoid(log_pi[y] - log_pi[x]);
        let w = raw.clamp(DEFAULT_FLOOR, 1.0 - DEFAULT_FLOOR);
        if w != raw {
            clamped.push((x, y));
        }
        b.insert(x, y, w)?;
    }
    let tournament = b.finish()?;

    let m = log_pi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mu: Vec<f64> = log_pi.iter().map(|l| (l - m).exp()).collect();
    let stationary = StationaryDistribution::from_measure(&mu)?;
    Ok(Extension {
        tournament,
        stationary,
        clamped,
    })
}
