use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use superdyn::generators::{conditioned, conjugate, diag_circle, random_complex, rng};
use superdyn::numkernel::{eig, spectral_norm};
use superdyn::witness::{operator_witness_search_with, Execution, SearchConfig};
use superdyn::CMatrix;

fn equal_modulus(d: usize, seed: u64) -> CMatrix {
    let mut r = rng(seed);
    let phases: Vec<f64> = (0..d).map(|k| (k as f64 + 0.5) * 0.6180339887 % 1.0).collect();
    let diag = diag_circle(1.0, &phases).unwrap();
    let (v, vi) = conditioned(d, 5.0, false, &mut r).unwrap();
    conjugate(&diag, &v, &vi)
}

fn witness_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness_search");
    g.sample_size(10);
    for d in [2usize, 4, 6] {
        let a = equal_modulus(d, d as u64);
        let cfg = SearchConfig::new(5_000, 1e-9);
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            g.bench_with_input(BenchmarkId::new(name, d), &a, |b, a| {
                b.iter(|| operator_witness_search_with(black_box(a), &cfg, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    for d in [2usize, 4, 6] {
        let a = random_complex(d, &mut rng(d as u64));
        g.bench_with_input(BenchmarkId::new("eig", d), &a, |b, a| {
            b.iter(|| eig(black_box(a), 1e-6).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("spectral_norm", d), &a, |b, a| {
            b.iter(|| spectral_norm(black_box(a)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, witness_search, kernels);
criterion_main!(benches);
