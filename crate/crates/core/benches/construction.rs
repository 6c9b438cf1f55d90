use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use heisenharm::harmonics::{basis, basis_seq};
use heisenharm::verify::{verify_up_to, verify_up_to_seq};

fn bench_basis(c: &mut Criterion) {
    let mut group = c.benchmark_group("basis");
    for m in [6u32, 10, 14] {
        group.bench_with_input(BenchmarkId::new("parallel", m), &m, |b, &m| {
            b.iter(|| basis(black_box(3), m))
        });
        group.bench_with_input(BenchmarkId::new("sequential", m), &m, |b, &m| {
            b.iter(|| basis_seq(black_box(3), m))
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_up_to");
    group.sample_size(10);
    for max_degree in [4u32, 8] {
        group.bench_with_input(
            BenchmarkId::new("parallel", max_degree),
            &max_degree,
            |b, &d| b.iter(|| verify_up_to(black_box(-3), d)),
        );
        group.bench_with_input(
            BenchmarkId::new("sequential", max_degree),
            &max_degree,
            |b, &d| b.iter(|| verify_up_to_seq(black_box(-3), d)),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_basis, bench_verify);
criterion_main!(benches);
