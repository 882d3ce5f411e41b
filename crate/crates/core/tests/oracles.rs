mod common;

use btprop_core::balance::{count_unbalanced, total_discrepancy, BalancePredicate};
use btprop_core::cycles::{cycle_ratio, is_cycle_balanced, DirectedCycle};
use btprop_core::fit::{fit_log_scores, log_odds_gradient, log_odds_objective};
use btprop_core::generate::{gen_perturbed, random_scores};
use btprop_core::repair::{best_root, repair_with_root};
use btprop_core::tester::{sample_size, CountingOracle, TriangleSampler};
use btprop_core::{
    estimate_unbalanced_fraction, gen_bt, gen_cyclic, gen_random, l1_distance_oracle, test_bt,
    StochasticTournament, TesterConfig,
};
use common::*;

#[test]
fn best_root_matches_exhaustive_search() {
    for seed in 0..20 {
        let t = gen_random(7, 300 + seed).unwrap();
        let (_, per_root) = disc_sums_oracle(&matrix(&t));
        let min = per_root.iter().cloned().fold(f64::INFINITY, f64::min);
        let r = best_root(&t).unwrap();
        assert!(per_root[r] <= min + 1e-12, "seed {seed}: root {r}");
        // repair from the chosen root costs no more than that root's sum
        let (_, rep) = repair_with_root(&t, r, TAU).unwrap();
        assert!(rep.total_change <= per_root[r] + 1e-12);
        assert!((rep.root_disc_sum - per_root[r]).abs() < 1e-9);
    }
}

#[test]
fn per_root_sums_match_oracle() {
    let t = gen_random(9, 11).unwrap();
    let (total, per_root) = disc_sums_oracle(&matrix(&t));
    let lib = total_discrepancy(&t);
    assert!((lib.total - total).abs() < 1e-9);
    for (a, b) in lib.per_root.iter().zip(&per_root) {
        assert!((a - b).abs() < 1e-9);
    }
    assert_eq!(lib.triangles, 84);
}

#[test]
fn sampled_fraction_tracks_exhaustive_count() {
    let t = gen_cyclic(9, 0.9).unwrap();
    let pred = BalancePredicate::Exact { tol: TAU };
    let exact = count_unbalanced(&t, pred) as f64 / 84.0;
    let oracle = count_unbalanced_oracle(&matrix(&t), TAU) as f64 / 84.0;
    assert_eq!(exact, oracle);
    let samples = 20_000;
    let est = estimate_unbalanced_fraction(&t, samples, 5, pred).unwrap();
    let se = (exact * (1.0 - exact) / samples as f64).sqrt();
    assert!((est - exact).abs() <= 3.0 * se, "estimate {est} vs {exact}");
}

#[test]
fn sampler_is_uniform_over_triangles() {
    let n = 6;
    let draws = 40_000;
    let mut counts = std::collections::HashMap::new();
    let mut s = TriangleSampler::from_seed(n, 17).unwrap();
    for _ in 0..draws {
        *counts.entry(s.draw()).or_insert(0usize) += 1;
    }
    assert_eq!(counts.len(), 20);
    let expect = draws as f64 / 20.0;
    let chi2: f64 = counts
        .values()
        .map(|&c| (c as f64 - expect).powi(2) / expect)
        .sum();
    // 19 degrees of freedom: mean 19, sd sqrt(38)
    assert!(chi2 < 19.0 + 5.0 * 38f64.sqrt(), "chi2 = {chi2}");
}

#[test]
fn query_count_is_bounded_by_samples() {
    for n in [5, 50, 500] {
        let t = gen_bt(&random_scores(n, 0.5, 2.0, 1).unwrap()).unwrap();
        let c = CountingOracle::new(&t);
        let eps = 0.1;
        let v = test_bt(&c, &TesterConfig::new(eps).seed(3)).unwrap();
        let k = sample_size(eps, 1.0 / 3.0).unwrap();
        assert_eq!(v.samples_used, k);
        assert!(c.queries() <= 3 * k);
        assert_eq!(v.queries, c.queries());
    }
}

#[test]
fn bt_inputs_are_never_rejected() {
    for seed in 0..200 {
        let t = gen_bt(&random_scores(12, 0.01, 100.0, seed).unwrap()).unwrap();
        for threads in [1, 3] {
            let cfg = TesterConfig::new(0.02).seed(seed).threads(threads);
            assert!(test_bt(&t, &cfg).unwrap().accepted());
        }
    }
}

#[test]
fn repair_output_is_reversible_under_oracle() {
    for seed in 0..30 {
        let base = gen_bt(&random_scores(10, 0.5, 2.0, seed).unwrap()).unwrap();
        let t = gen_perturbed(&base, 0.1, seed).unwrap();
        for r in [0, 4, 9] {
            let (out, rep) = repair_with_root(&t, r, TAU).unwrap();
            assert!(!rep.clamped(), "seed {seed} root {r}");
            assert!(
                all_balanced_oracle(&matrix(&out), TAU),
                "seed {seed} root {r}"
            );
            for e in &rep.edits {
                assert!((e.old - e.new).abs() <= e.disc + 1e-12);
            }
        }
    }
}

#[test]
fn lsq_gradient_matches_finite_differences_off_optimum() {
    for seed in 0..10 {
        let t = gen_random(8, 70 + seed).unwrap();
        let s: Vec<f64> = fit_log_scores(&t)
            .iter()
            .enumerate()
            .map(|(i, v)| v + 0.1 * i as f64)
            .collect();
        let g = log_odds_gradient(&t, &s).unwrap();
        let h = 1e-6;
        for x in 0..8 {
            let mut sp = s.clone();
            let mut sm = s.clone();
            sp[x] += h;
            sm[x] -= h;
            let fd = (log_odds_objective(&t, &sp).unwrap() - log_odds_objective(&t, &sm).unwrap())
                / (2.0 * h);
            assert!(
                (fd - g[x]).abs() <= 1e-5 * g[x].abs().max(1.0),
                "{fd} vs {}",
                g[x]
            );
        }
    }
}

#[test]
fn four_cycles_follow_triangles() {
    let bt = gen_bt(&random_scores(4, 0.5, 2.0, 2).unwrap()).unwrap();
    let c = DirectedCycle::new(vec![0, 1, 2, 3]).unwrap();
    assert!(is_cycle_balanced(&bt, &c, TAU).unwrap());

    let cyc = gen_cyclic(4, 0.9).unwrap();
    // 0->1->2->3->0 each at 0.9: ratio 9^4
    let r = cycle_ratio(&cyc, &c).unwrap();
    assert!((r - 6561.0).abs() / 6561.0 < 1e-9);
    let back = cycle_ratio(&cyc, &c.reversed()).unwrap();
    assert!((r * back - 1.0).abs() < 1e-9);
}

#[test]
fn distance_bounds_bracket() {
    for seed in 0..10 {
        let t: StochasticTournament = gen_random(6, 900 + seed).unwrap();
        let d = l1_distance_oracle(&t, 50).unwrap();
        assert!(d.lower <= d.upper + 1e-12, "{d:?}");
        let (total, _) = disc_sums_oracle(&matrix(&t));
        assert!(d.upper <= 3.0 / 6.0 * total + 1e-9);
    }
}
