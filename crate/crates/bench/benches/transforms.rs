use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plateau_core::field::Field;
use plateau_core::functions::trace_power;
use plateau_core::walsh::{walsh_fast, walsh_naive};
use std::sync::Arc;

fn bench_walsh(c: &mut Criterion) {
    let mut group = c.benchmark_group("walsh");
    for (p, n) in [(3u64, 3u32), (3, 5), (2, 8), (5, 3)] {
        let field = Arc::new(Field::canonical(p, n).unwrap());
        let f = trace_power(field, 5);
        let label = format!("F_{}^{}", p, n);
        group.bench_with_input(BenchmarkId::new("fast", &label), &f, |b, f| {
            b.iter(|| walsh_fast(f))
        });
        if field_order(p, n) <= 729 {
            group.bench_with_input(BenchmarkId::new("naive", &label), &f, |b, f| {
                b.iter(|| walsh_naive(f))
            });
        }
    }
    group.finish();
}

fn field_order(p: u64, n: u32) -> u64 {
    p.pow(n)
}

criterion_group!(benches, bench_walsh);
criterion_main!(benches);
