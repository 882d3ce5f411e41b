use std::hint::black_box;

use btprop_core::balance::total_discrepancy_with_threads;
use btprop_core::{gen_random, repair, DEFAULT_TOL};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn discrepancy(c: &mut Criterion) {
    let mut g = c.benchmark_group("total_discrepancy");
    g.sample_size(10);
    for n in [50usize, 150] {
        let t = gen_random(n, 1).unwrap();
        for threads in [1usize, 4] {
            g.bench_with_input(
                BenchmarkId::new(format!("threads={threads}"), n),
                &t,
                |b, t| b.iter(|| total_discrepancy_with_threads(black_box(t), threads)),
            );
        }
    }
    g.finish();
}

fn best_root_repair(c: &mut Criterion) {
    let mut g = c.benchmark_group("repair");
    g.sample_size(10);
    for n in [20usize, 80] {
        let t = gen_random(n, 2).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| repair(black_box(t), DEFAULT_TOL).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, discrepancy, best_root_repair);
criterion_main!(benches);
