use std::hint::black_box;
use std::time::Duration;

use bergman_core::classes::{default_radii, dhat_profile};
use bergman_core::conditions::dp_sequence;
use bergman_core::grid::{PolarGrid, PolarGridFunction};
use bergman_core::projection::{project_grid, AnalyticPolynomial};
use bergman_core::{Config, ExecMode, RadialWeight};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

const MODES: [(&str, ExecMode); 2] = [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)];

fn config(mode: ExecMode) -> Config {
    Config {
        exec: mode,
        ..Config::default()
    }
}

fn exp(alpha: f64) -> RadialWeight {
    RadialWeight::Exponential { alpha, beta: 1.0, l: 1.0 }
}

fn dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp_sequence");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    let (omega, nu) = (exp(2.0), exp(3.0));
    for (name, mode) in MODES {
        let cfg = config(mode);
        group.bench_with_input(BenchmarkId::new(name, "exp n=200"), &cfg, |b, cfg| {
            b.iter(|| dp_sequence(black_box(&omega), black_box(&nu), 2.0, 200, cfg).unwrap())
        });
    }
    group.finish();
}

fn dhat(c: &mut Criterion) {
    let mut group = c.benchmark_group("dhat_profile");
    group.sample_size(10);
    let w = RadialWeight::RapidlyIncreasing { alpha: 2.0 };
    for (name, mode) in MODES {
        let cfg = config(mode);
        let radii = default_radii(&w, &cfg);
        group.bench_with_input(BenchmarkId::new(name, "ri"), &cfg, |b, cfg| {
            b.iter(|| dhat_profile(black_box(&w), &radii, cfg).unwrap())
        });
    }
    group.finish();
}

fn projection(c: &mut Criterion) {
    let mut group = c.benchmark_group("project_grid");
    group.sample_size(10);
    let w = RadialWeight::Standard { alpha: 1.0 };
    let poly = AnalyticPolynomial::new((0..=10).map(|k| Complex64::new(1.0 / (k + 1) as f64, 0.5)).collect());
    let grid = PolarGrid::for_weight(&w, &Config::default()).unwrap();
    let f = PolarGridFunction::sample(&grid, |z| poly.eval(z));
    let targets = [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.4), Complex64::new(-0.6, 0.1)];
    for (name, mode) in MODES {
        let cfg = config(mode);
        group.bench_with_input(BenchmarkId::new(name, grid.len()), &cfg, |b, cfg| {
            b.iter(|| project_grid(black_box(&w), &f, &targets, cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, dp, dhat, projection);
criterion_main!(benches);
