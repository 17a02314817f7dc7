use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use levy_smalltime::*;

fn integral_tests(c: &mut Criterion) {
    let loglog = JumpMeasure::v_profile_loglog();
    let stable = JumpMeasure::stable_like(1.0, 1.0, 1.5).unwrap();
    let mut g = c.benchmark_group("integral");
    g.bench_function("i_test_loglog", |b| b.iter(|| i_test(black_box(&loglog), 1.5)));
    g.bench_function("condition_2_stable", |b| {
        b.iter(|| test_condition_2(black_box(&stable), 0.8))
    });
    g.bench_function("condition_2_stable_numeric", |b| {
        let e = Engine::numeric();
        b.iter(|| e.condition_2(black_box(&stable), 0.8, None))
    });
    g.bench_function("critical_sqrt2", |b| {
        b.iter(|| critical_constant(&|a| i_test(black_box(&loglog), a)))
    });
    g.finish();
}

fn classification(c: &mut Criterion) {
    let s = LevyProcessSpec::with_drift(0.0, JumpMeasure::two_sided_stable(1.0, 0.7, 1.0, 0.3).unwrap()).unwrap();
    c.bench_function("query_two_sided_stable", |b| {
        b.iter(|| classify_query(black_box(&s), 2.0))
    });
}

fn simulation(c: &mut Criterion) {
    let s = LevyProcessSpec::new(0.0, 0.0, JumpMeasure::stable_like(1.0, 1.0, 1.2).unwrap()).unwrap();
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    for depth in [10usize, 40] {
        let cfg = SimConfig {
            depth,
            paths: 1,
            ..SimConfig::default()
        };
        g.bench_with_input(BenchmarkId::new("path", depth), &cfg, |b, cfg| {
            b.iter(|| sample_path_grid(&s, cfg, 0))
        });
    }
    let cfg = SimConfig {
        depth: 40,
        paths: 200,
        seed: 2024,
        ..SimConfig::default()
    };
    g.bench_function("trend_200_paths", |b| {
        b.iter(|| trend_statistic(&s, &cfg, 0.95, TrendMode::Absolute))
    });
    g.finish();
}

criterion_group!(benches, integral_tests, classification, simulation);
criterion_main!(benches);
