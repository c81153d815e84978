use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use treadmill_core::strain_energy::NeoHookean;
use treadmill_core::treadmill::{self, ModelParams};

fn params(mu_inf: f64) -> ModelParams {
    ModelParams::new(
        Arc::new(NeoHookean::new(1.0).unwrap()),
        1.0,
        1.0,
        0.0,
        1.0,
        mu_inf,
        1.0,
        1.0,
        1.0,
    )
    .unwrap()
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for eta in [1e-6, 1.0, 1e6] {
        let p = params(0.9).with_eta(eta);
        group.bench_with_input(BenchmarkId::from_parameter(eta), &p, |b, p| {
            b.iter(|| treadmill::solve(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let p = params(1.5);
    let etas: Vec<f64> = (0..121)
        .map(|i| 10f64.powf(-6.0 + 0.1 * i as f64))
        .collect();
    c.bench_function("sweep_121", |b| {
        b.iter(|| {
            etas.iter()
                .map(|&eta| treadmill::solve_at_eta(&p, eta).unwrap().nu)
                .sum::<f64>()
        })
    });
}

fn oracle(c: &mut Criterion) {
    let p = params(0.9);
    c.bench_function("grid_scan_oracle_10k", |b| {
        b.iter(|| treadmill::grid_scan_oracle(black_box(&p), 10.0, 10_000).unwrap())
    });
}

criterion_group!(benches, solve, sweep, oracle);
criterion_main!(benches);
