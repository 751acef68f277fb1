use criterion::{criterion_group, criterion_main, Criterion};
use specshare::game::solve_equilibrium;
use specshare::numerics::{solve_lambda_double_prime, vr_kernel};
use specshare::sim::{
    measure_throughput, GammaRule, MeasureConfig, ProtocolStrategy, RateModel, SirMode, SirModel,
};
use specshare::{Density, GameConfig, Model, PathlossExponent};
use specshare_bench::default_topology;
use std::hint::black_box;

fn numerics(c: &mut Criterion) {
    let alpha = PathlossExponent::new(3.5).unwrap();
    c.bench_function("vr_kernel", |b| {
        b.iter(|| vr_kernel(black_box(Density::new(1.7).unwrap()), alpha).unwrap())
    });
    let five = PathlossExponent::new(5.0).unwrap();
    c.bench_function("lambda_double_prime", |b| {
        b.iter(|| solve_lambda_double_prime(black_box(five)).unwrap())
    });
}

fn equilibria(c: &mut Criterion) {
    for (name, model) in [
        ("equilibrium_fixed", Model::FixedRate),
        ("equilibrium_variable", Model::VariableRate),
    ] {
        let cfg = GameConfig::new(3.5, 2.0, 9.0, model).unwrap();
        c.bench_function(name, |b| {
            b.iter(|| solve_equilibrium(black_box(&cfg)).unwrap())
        });
    }
}

fn slots(c: &mut Criterion) {
    let cfg = MeasureConfig {
        sir: SirModel {
            mode: SirMode::Full,
            rate: RateModel::VariableRate,
        },
        slots: 10,
        gamma_rule: GammaRule::Candidate,
    };
    // Includes building the 600x600 gain matrix.
    let mut group = c.benchmark_group("measure_10_slots");
    group.sample_size(20);
    for alpha in [2.5, 4.5] {
        let topo = default_topology(alpha, 1);
        group.bench_function(format!("ra_alpha_{alpha}"), |b| {
            b.iter(|| {
                measure_throughput(
                    &topo,
                    ProtocolStrategy::RandomAccess { p1: 0.5, p2: 0.5 },
                    &cfg,
                    3,
                )
                .unwrap()
            })
        });
        group.bench_function(format!("csma_alpha_{alpha}"), |b| {
            b.iter(|| {
                measure_throughput(
                    &topo,
                    ProtocolStrategy::Csma {
                        gamma1_db: 0.0,
                        gamma2_db: 0.0,
                    },
                    &cfg,
                    3,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, numerics, equilibria, slots);
criterion_main!(benches);
