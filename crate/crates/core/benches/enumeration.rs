use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mldkit::germs::{enumerate_admissible_weights_with, HyperquotientGerm};
use mldkit::par::Exec;
use mldkit::thresholds::{enumerate_ct_set_with, CtKind};
use mldkit::toric::{quotient_germ_to_toric, toric_mld_with, ToricPair};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn toric_mld(c: &mut Criterion) {
    let mut group = c.benchmark_group("toric_mld");
    group.sample_size(10);
    for n in [7i64, 12] {
        let q = quotient_germ_to_toric(n, &[1, 1, 1, 1]).unwrap();
        let pair = ToricPair::without_boundary(q.germ);
        for (name, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(name, format!("1/{n}(1,1,1,1)")),
                &pair,
                |b, p| b.iter(|| toric_mld_with(black_box(p), exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn admissible_weights(c: &mut Criterion) {
    let mut group = c.benchmark_group("admissible_weights");
    group.sample_size(10);
    let germ = HyperquotientGerm::quotient(5, &[1, 2, 3, 4]).unwrap();
    for budget in [20i64, 40] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, budget), &budget, |b, &t| {
                b.iter(|| enumerate_admissible_weights_with(black_box(&germ), t, exec))
            });
        }
    }
    group.finish();
}

fn ct_set(c: &mut Criterion) {
    let mut group = c.benchmark_group("ct_set");
    group.sample_size(10);
    for cap in [100i64, 400] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, cap), &cap, |b, &cap| {
                b.iter(|| enumerate_ct_set_with(CtKind::Smooth, 2, black_box(cap), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, toric_mld, admissible_weights, ct_set);
criterion_main!(benches);
