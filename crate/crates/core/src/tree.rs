//! Spanning trees of the complete graph on `0..n`.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected spanning tree, rooted at vertex 0 for traversal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    parent: Vec<Option<usize>>,
    #[serde(skip)]
    depth: Vec<usize>,
    #[serde(skip)]
    in_tree: Vec<bool>,
}

impl SpanningTree {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotASpanningTree(format!("{n} vertices")));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotASpanningTree(format!(
                "{} edges, expected {}",
                edges.len(),
                n - 1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        let mut in_tree = vec![false; n * n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::NotASpanningTree(format!(
                    "edge ({u}, {v}) leaves 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::NotASpanningTree(format!("self loop at {u}")));
            }
            if in_tree[u * n + v] {
                return Err(Error::NotASpanningTree(format!("edge ({u}, {v}) repeated")));
            }
            in_tree[u * n + v] = true;
            in_tree[v * n + u] = true;
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        // n - 1 edges and connected implies acyclic
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::NotASpanningTree(format!(
                "vertex {v} is unreachable"
            )));
        }
        Ok(Self {
            n,
            edges,
            parent,
            depth,
            in_tree,
        })
    }

    /// All edges `(center, v)`.
    pub fn star(n: usize, center: usize) -> Result<Self> {
        Self::new(
            n,
            (0..n)
                .filter(|&v| v != center)
                .map(|v| (center, v))
                .collect(),
        )
    }

    /// Random recursive tree over a shuffled vertex order.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let edges = (1..n)
            .map(|i| (order[rng.gen_range(0..i)], order[i]))
            .collect();
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.in_tree[u * self.n + v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (self.depth[v], v));
        order
    }

    /// The unique tree path from `u` to `v`, both endpoints included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut left = vec![a];
        let mut right = vec![b];
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a].expect("non-root has parent");
                left.push(a);
            } else {
                b = self.parent[b].expect("non-root has parent");
                right.push(b);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    }

    /// Pairs `(u, v)`, `u < v`, not in the tree.
    pub fn chords(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n)
            .flat_map(move |u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(move |&(u, v)| !self.contains(u, v))
    }
}
