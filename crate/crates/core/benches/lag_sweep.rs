use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use netcorr::analysis::{shuffled_curves, LifetimeOptions};
use netcorr::generators::{build_dictionary, gen_darn, gen_logistic, DarnParams, LogisticParams};
use netcorr::{
    corr_curve_with, corr_matrix_with, EngineConfig, Execution, Kernel, LagRange, Trajectory,
};

const MODES: [(&str, Execution); 2] = [
    ("serial", Execution::Serial),
    ("parallel", Execution::Parallel),
];

fn darn(m: usize, n: usize) -> Trajectory {
    gen_darn(&DarnParams {
        m,
        n,
        order: 3,
        q: 0.6,
        y: 0.1,
        seed: 1,
        burn_in: None,
    })
    .unwrap()
}

fn logistic() -> Trajectory {
    let dict = build_dictionary(100, 1000, 0.4, 2).unwrap();
    gen_logistic(
        &LogisticParams {
            r: netcorr::generators::R_INFINITY,
            x0: 0.3,
            n: 10_000,
            transient: 1000,
        },
        &dict,
    )
    .unwrap()
}

fn lag_sweep(c: &mut Criterion) {
    let inputs = [
        ("darn_m50_n5000", darn(50, 5000)),
        ("logistic_m100_n10000", logistic()),
    ];
    let mut group = c.benchmark_group("corr_curve");
    group.sample_size(20);
    for (name, traj) in &inputs {
        let range = LagRange::up_to(100);
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), traj, |b, t| {
                b.iter(|| corr_curve_with(black_box(t), &range, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn shuffles(c: &mut Criterion) {
    let traj = darn(20, 4000);
    let lags: Vec<usize> = (1..=30).collect();
    let mut group = c.benchmark_group("shuffle_null");
    group.sample_size(10);
    for (mode, exec) in MODES {
        let opts = LifetimeOptions {
            n_shuffles: 16,
            exec,
            ..LifetimeOptions::default()
        };
        group.bench_function(mode, |b| {
            b.iter(|| shuffled_curves(black_box(&traj), &lags, &opts).unwrap())
        });
    }
    group.finish();
}

fn matrices(c: &mut Criterion) {
    let traj = darn(60, 2000);
    let mut group = c.benchmark_group("corr_matrix");
    group.sample_size(10);
    for (kernel, kname) in [(Kernel::Sparse, "sparse"), (Kernel::Dense, "dense")] {
        for (mode, exec) in MODES {
            let cfg = EngineConfig {
                kernel,
                exec,
                ..EngineConfig::default()
            };
            group.bench_function(BenchmarkId::new(kname, mode), |b| {
                b.iter(|| corr_matrix_with(black_box(&traj), 1, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, lag_sweep, shuffles, matrices);
criterion_main!(benches);
