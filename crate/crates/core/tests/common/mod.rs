//! Test-side oracles. These work on a dense matrix of probabilities and share
//! no code paths with the library's balance and discrepancy routines.

#![allow(dead_code)]

use btprop_core::generate::{gen_bt, random_scores, rng_from_seed};
use btprop_core::{PairwiseOracle, StochasticTournament};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TAU: f64 = 1e-9;

pub fn matrix<O: PairwiseOracle>(o: &O) -> Vec<Vec<f64>> {
    let n = o.vertex_count();
    let mut m = vec![vec![f64::NAN; n]; n];
    for x in 0..n {
        for y in 0..n {
            if x != y {
                m[x][y] = o.p(x, y);
            }
        }
    }
    m
}

/// Cross-multiplied balance test: |P_cw − P_ccw| ≤ tol · max(P_cw, P_ccw).
pub fn balanced_by_products(m: &[Vec<f64>], x: usize, y: usize, z: usize, tol: f64) -> bool {
    let cw = m[x][y] * m[y][z] * m[z][x];
    let ccw = m[x][z] * m[z][y] * m[y][x];
    (cw - ccw).abs() <= tol * cw.max(ccw)
}

pub fn count_unbalanced_oracle(m: &[Vec<f64>], tol: f64) -> usize {
    let n = m.len();
    let mut c = 0;
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if !balanced_by_products(m, x, y, z, tol) {
                    c += 1;
                }
            }
        }
    }
    c
}

pub fn all_balanced_oracle(m: &[Vec<f64>], tol: f64) -> bool {
    count_unbalanced_oracle(m, tol) == 0
}

/// Single-edge fix on each edge of {x, y, z}: solve for the one probability
/// that equates the two cyclic products, edge by edge.
pub fn disc_oracle(m: &[Vec<f64>], x: usize, y: usize, z: usize) -> f64 {
    let fix = |a: usize, b: usize, c: usize| {
        // unknown q = p_ab; balance q·p_bc·p_ca = (1−q)·p_ac·p_cb
        let k = m[a][c] * m[c][b];
        let q = k / (m[b][c] * m[c][a] + k);
        (m[a][b] - q).abs()
    };
    fix(x, y, z).max(fix(y, z, x)).max(fix(z, x, y))
}

/// (Σ_T disc, per-root sums) by plain loops.
pub fn disc_sums_oracle(m: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let n = m.len();
    let mut total = 0.0;
    let mut per = vec![0.0; n];
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let d = disc_oracle(m, x, y, z);
                total += d;
                per[x] += d;
                per[y] += d;
                per[z] += d;
            }
        }
    }
    (total, per)
}

fn sigma(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn build(m: &[Vec<f64>]) -> StochasticTournament {
    let n = m.len();
    let mut entries = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            entries.push((x, y, m[x][y]));
        }
    }
    StochasticTournament::from_entries(n, &entries).unwrap()
}

/// BT tournament on `n` vertices with odds of selected pairs multiplied by
/// generic factors, chosen greedily until exactly `k` triangles are
/// unbalanced. Returns `None` if the greedy pass gets stuck.
pub fn exactly_k_unbalanced(n: usize, k: usize, seed: u64) -> Option<StochasticTournament> {
    let base = gen_bt(&random_scores(n, 0.5, 2.0, seed).unwrap()).unwrap();
    let mut m = matrix(&base);
    let mut rng = rng_from_seed(seed ^ 0x5eed);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    let mut perturbed = vec![vec![false; n]; n];
    let local = |m: &[Vec<f64>], u: usize, v: usize| {
        (0..n)
            .filter(|&w| w != u && w != v)
            .filter(|&w| {
                let mut t = [u, v, w];
                t.sort_unstable();
                !balanced_by_products(m, t[0], t[1], t[2], TAU)
            })
            .count()
    };
    let mut count = 0usize;
    for _pass in 0..20 {
        pairs.shuffle(&mut rng);
        for &(u, v) in &pairs {
            if count == k {
                return Some(build(&m));
            }
            if perturbed[u][v] {
                continue;
            }
            let before = local(&m, u, v);
            let old = m[u][v];
            let shift = rng.gen_range(0.3..1.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let new = sigma(logit(old) + shift);
            m[u][v] = new;
            m[v][u] = 1.0 - new;
            let after = local(&m, u, v);
            let next = count - before + after;
            if next <= k {
                count = next;
                perturbed[u][v] = true;
            } else {
                m[u][v] = old;
                m[v][u] = 1.0 - old;
            }
        }
    }
    (count == k).then(|| build(&m))
}

/// BT tournament whose odds are each multiplied by a factor drawn
/// log-uniformly from [(1+eps)^-1, 1+eps].
pub fn approx_bt(n: usize, eps: f64, seed: u64) -> StochasticTournament {
    let a = random_scores(n, 0.2, 5.0, seed).unwrap();
    let a = a.as_slice();
    let mut rng = rng_from_seed(seed.wrapping_add(1 << 32));
    let h = eps.ln_1p();
    let mut entries = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let lo = (a[x] / a[y]).ln() + rng.gen_range(-h..=h);
            entries.push((x, y, sigma(lo)));
        }
    }
    StochasticTournament::from_entries(n, &entries).unwrap()
}
