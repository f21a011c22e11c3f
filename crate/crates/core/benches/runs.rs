use adax::adversary::StrategyKind;
use adax::harness::{run_experiment, run_experiment_sequential, ExperimentConfig, MechanismSpec, StrategySpec};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn config(runs: usize) -> ExperimentConfig {
    let strategy = StrategySpec {
        kind: StrategyKind::QuadraticAdaptive,
        k: 400,
        agreement_mode: true,
        clamp_eps: None,
    };
    let mut cfg = ExperimentConfig::new(MechanismSpec::Gaussian { rho: 0.01 }, strategy, 2000);
    cfg.runs = runs;
    cfg
}

fn runs(c: &mut Criterion) {
    let cfg = config(32);
    let mut g = c.benchmark_group("gaussian_quadratic_32_runs");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| run_experiment(black_box(&cfg)).unwrap()));
    g.bench_function("sequential", |b| b.iter(|| run_experiment_sequential(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, runs);
criterion_main!(benches);
