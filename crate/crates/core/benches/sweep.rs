use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use levicav::cooling::{default_detuning_grid, optimize_detuning};
use levicav::grid::{Grid, Spacing};
use levicav::params::{CavitySpec, OptomechParams, SphereSpec, TweezerSpec};
use levicav::sweep::{parameter_sweep, radius_sweep};
use levicav::validation::random_stable_grid;
use levicav::{cooling::DetuningScan, dynamics, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn radii(n: usize) -> Vec<f64> {
    Grid::new(10e-9, 2e-6, n, Spacing::Log).unwrap().values().unwrap()
}

fn bench_parameter_sweep(c: &mut Criterion) {
    let s = SphereSpec::fused_silica(1e-7);
    let (cav, tw) = (CavitySpec::default(), TweezerSpec::default());
    let rs = radii(200);
    let mut g = c.benchmark_group("parameter_sweep_200");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| parameter_sweep(&s, &cav, &tw, black_box(&rs), exec).unwrap())
        });
    }
    g.finish();
}

fn bench_full_sweep(c: &mut Criterion) {
    let s = SphereSpec::fused_silica(1e-7);
    let (cav, tw) = (CavitySpec::default(), TweezerSpec::default());
    let rs = radii(24);
    let scan = DetuningScan { points: Some(400), ..Default::default() };
    let mut g = c.benchmark_group("radius_sweep_24");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| radius_sweep(&s, &cav, &tw, black_box(&rs), &scan, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_detuning_grid(c: &mut Criterion) {
    let p = OptomechParams::compute(&SphereSpec::fused_silica(50e-9), &CavitySpec::default(), &TweezerSpec::default())
        .unwrap()
        .rates();
    let grid = default_detuning_grid(&p);
    let mut g = c.benchmark_group("optimize_detuning_2000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| optimize_detuning(black_box(&p), &grid, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_oracle_grid(c: &mut Criterion) {
    let pts = random_stable_grid(1000, 1);
    let mut g = c.benchmark_group("lyapunov_grid_1000");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                levicav::exec::map(exec, &pts, |(r, d)| {
                    dynamics::steady_state(&dynamics::build_system(r, *d)).map(|s| s.phonon_number())
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench_parameter_sweep, bench_full_sweep, bench_detuning_grid, bench_oracle_grid);
criterion_main!(benches);
