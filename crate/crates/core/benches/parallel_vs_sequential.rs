use std::hint::black_box;

use bridge_loe::kernelmat::{cdf_table, CdfKind};
use bridge_loe::montecarlo::{bridge_summary, loe_summary, PathGrid};
use bridge_loe::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn loe_sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("loe_summary_N8_2000");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| loe_summary(black_box(8), 2000, 1, exec).unwrap())
        });
    }
    g.finish();
}

fn bridge_sampling(c: &mut Criterion) {
    let grid = PathGrid::uniform_in_s(500, 3.5, true).unwrap();
    let mut g = c.benchmark_group("bridge_summary_N3_K500_200");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| bridge_summary(black_box(3), &grid, 200, 1, exec).unwrap())
        });
    }
    g.finish();
}

fn cdf_tables(c: &mut Criterion) {
    let grid: Vec<f64> = (0..200).map(|i| 0.05 + 0.02 * i as f64).collect();
    let mut g = c.benchmark_group("cdf_table_maxheight_N12_200pts");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cdf_table(CdfKind::Maxheight, black_box(12), &grid, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, loe_sampling, bridge_sampling, cdf_tables);
criterion_main!(benches);
