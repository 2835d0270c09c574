//! Benchmarks of the performance-sensitive paths: the Betti product
//! expansion, the Euler series, the relation checkers, and the triple
//! product.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hilbgen_core::dmvv::{dmvv_product, DmvvTable};
use hilbgen_core::fock::check_heisenberg_relations;
use hilbgen_core::hilb::{hilbert_euler_series, hilbert_poincare};
use hilbgen_core::surface::k3;
use hilbgen_core::virasoro::check_virasoro_relations;

fn bench_hilbert_poincare(c: &mut Criterion) {
    let fx = k3();
    let mut group = c.benchmark_group("hilbert_poincare_k3");
    group.sample_size(10);
    for order in [10usize, 25] {
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            b.iter(|| hilbert_poincare(&fx.topology, order));
        });
    }
    group.finish();
}

fn bench_euler_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("euler_series");
    group.sample_size(10);
    for order in [100usize, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            b.iter(|| hilbert_euler_series(24, order));
        });
    }
    group.finish();
}

fn bench_heisenberg_check(c: &mut Criterion) {
    let fx = k3();
    let mut group = c.benchmark_group("heisenberg_check_k3");
    group.sample_size(10);
    group.bench_function("w3_k2", |b| {
        b.iter(|| check_heisenberg_relations(&fx.frobenius, 3, 2));
    });
    group.finish();
}

fn bench_virasoro_check(c: &mut Criterion) {
    let fx = k3();
    let mut group = c.benchmark_group("virasoro_check_k3");
    group.sample_size(10);
    group.bench_function("w1_k2", |b| {
        b.iter(|| check_virasoro_relations(&fx.frobenius, 2, 1, None).unwrap());
    });
    group.finish();
}

fn bench_dmvv(c: &mut Criterion) {
    let mut table = DmvvTable::new(16, 2);
    table.set(0, 0, 1).unwrap();
    table.set(1, 1, 2).unwrap();
    table.set(2, -1, -3).unwrap();
    let mut group = c.benchmark_group("dmvv_product");
    group.sample_size(10);
    group.bench_function("p4_q4", |b| {
        b.iter(|| dmvv_product(&table, 4, 4).unwrap());
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_hilbert_poincare,
    bench_euler_series,
    bench_heisenberg_check,
    bench_virasoro_check,
    bench_dmvv
);
criterion_main!(benches);
