use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use arena_sde::envelope::audit_bundle;
use arena_sde::model::LogisticParams;
use arena_sde::montecarlo::{logistic_terminal_samples, system_terminal_samples, McConfig};
use arena_sde::sim::simulate_seeded;
use arena_sde::{Exec, ModelParams};

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn system_paths(c: &mut Criterion) {
    let params = ModelParams::figure2(0.5, 0.3);
    let n_paths = 256;
    let mut group = c.benchmark_group("system_terminal_1k_steps");
    group.throughput(Throughput::Elements(n_paths as u64));
    for (name, exec) in POLICIES {
        let cfg = McConfig {
            exec,
            ..McConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| system_terminal_samples(&params, 1.0, n_paths, 7, cfg).unwrap())
        });
    }
    group.finish();
}

fn logistic_paths(c: &mut Criterion) {
    let lp = LogisticParams::new(1.0, 0.1, 0.5, 1.0).unwrap();
    let n_paths = 256;
    let mut group = c.benchmark_group("logistic_exact_1k_steps");
    group.throughput(Throughput::Elements(n_paths as u64));
    for (name, exec) in POLICIES {
        let cfg = McConfig {
            exec,
            ..McConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| logistic_terminal_samples(&lp, 1.0, n_paths, 7, cfg).unwrap())
        });
    }
    group.finish();
}

fn envelope_audit(c: &mut Criterion) {
    let params = ModelParams::figure2(1.5, 1.3);
    let n_bundles = 32;
    let mut group = c.benchmark_group("envelope_audit_10k_steps");
    group.throughput(Throughput::Elements(n_bundles as u64));
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map_indexed(n_bundles, |i| {
                    let bundle = simulate_seeded(&params, 10.0, 10_000, 3, i as u64, 0.0).unwrap();
                    audit_bundle(&bundle, &params, 1e-2)
                })
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = system_paths, logistic_paths, envelope_audit
}
criterion_main!(benches);
