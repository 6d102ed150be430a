use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use jdrift::hitting::HittingTimeTable;
use jdrift::shell::ShellProfile;
use jdrift::walker::{self, SubsetState, WalkConfig};
use jdrift::JohnsonParams;
use jdrift_bench::INSTANCES;

fn shells(c: &mut Criterion) {
    let mut group = c.benchmark_group("shell_profile");
    for (n, k) in INSTANCES {
        let params = JohnsonParams::new(n, k).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(params), &params, |b, &p| {
            b.iter(|| ShellProfile::new(black_box(p)))
        });
    }
    group.finish();
}

fn hitting(c: &mut Criterion) {
    let params = JohnsonParams::new(200, 40).unwrap();
    let mut group = c.benchmark_group("hitting_table_J(200,40)");
    for beta in [0.0, 1.0] {
        group.bench_with_input(BenchmarkId::from_parameter(beta), &beta, |b, &beta| {
            b.iter(|| HittingTimeTable::new(params, black_box(beta)).unwrap())
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let params = JohnsonParams::new(200, 40).unwrap();
    let target = SubsetState::first_k(params);
    let config = WalkConfig::new(params, 0.0, 1, 100, 500).seed(42).keep_paths(false);
    let mut group = c.benchmark_group("simulate");
    group.sample_size(20);
    group.bench_function("J(200,40) 100x500", |b| {
        b.iter(|| walker::simulate_batch(black_box(&config), &target).unwrap())
    });
    group.finish();
}

criterion_group!(benches, shells, hitting, simulation);
criterion_main!(benches);
