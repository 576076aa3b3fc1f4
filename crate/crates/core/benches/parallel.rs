use std::hint::black_box;

use cpns_core::contagion::{importance_counts, si_runs, EeiConfig, SIConfig};
use cpns_core::graph::{generate, Family, GeneratorSpec};
use cpns_core::spectral::{approx_resistance, SketchConfig};
use cpns_core::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn sketch(c: &mut Criterion) {
    let g = generate(&GeneratorSpec::new(Family::sbm4(), 500, 1)).unwrap();
    let mut group = c.benchmark_group("jl_sketch_sbm500");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SketchConfig::new(0.3, 7).with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| approx_resistance(black_box(&g), cfg).unwrap())
        });
    }
    group.finish();
}

fn importance(c: &mut Criterion) {
    let g = generate(&GeneratorSpec::new(Family::complete_normal(), 60, 2)).unwrap();
    let mut group = c.benchmark_group("eei_k60");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = EeiConfig::new(0.05, 5, 3).with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| importance_counts(black_box(&g), cfg).unwrap())
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let g = generate(&GeneratorSpec::new(Family::sbm4(), 500, 1)).unwrap();
    let cfg = SIConfig {
        gamma: 0.05,
        timesteps: 60,
        patient_zero: 0,
        seed: 4,
    };
    let mut group = c.benchmark_group("si_runs_sbm500");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| si_runs(black_box(&g), &cfg, 100, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sketch, importance, simulation);
criterion_main!(benches);
