//! Sequential vs rayon data-parallel throughput of the batch workloads:
//! the Hardy corpus, per-sample energy tables, and a wave-stepping baseline.
//! The library's own batch helpers parallelize under the `parallel` feature
//! (default); the bench drives both paths explicitly through rayon so the
//! comparison exists in a single build.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use decaylab::diagnostics::{energy_dt, energy_dx, hardy_check, random_smooth_fields};
use decaylab::grid::{ModelParams, RadialGrid};
use decaylab::initial_data::{Family, InitialData};
use decaylab::wave::{run_wave, WaveStepper};
use rayon::prelude::*;

fn hardy_corpus(c: &mut Criterion) {
    let params = ModelParams::new(0.5, 3, 1.0).unwrap();
    let grid = RadialGrid::new(&params, 36.0, 1749).unwrap();
    let corpus = random_smooth_fields(&grid, 64, 7);
    let mut group = c.benchmark_group("hardy_corpus_64");
    group.bench_function(BenchmarkId::new("sequential", 64), |b| {
        b.iter(|| {
            corpus
                .iter()
                .map(|w| hardy_check(w, 1.0, 16.0, &grid, &params).unwrap().0)
                .sum::<f64>()
        })
    });
    group.bench_function(BenchmarkId::new("rayon", 64), |b| {
        b.iter(|| {
            corpus
                .par_iter()
                .map(|w| hardy_check(w, 1.0, 16.0, &grid, &params).unwrap().0)
                .sum::<f64>()
        })
    });
    group.finish();
}

fn energy_table(c: &mut Criterion) {
    let params = ModelParams::new(0.5, 3, 1.0).unwrap();
    let grid = RadialGrid::new(&params, 41.0, 799).unwrap();
    let data = InitialData::new(
        &params,
        &grid,
        Family::parse("bump:center=2,width=0.5,amp=1").unwrap(),
        Family::Zero,
    );
    let times: Vec<f64> = (0..32).map(|k| k as f64).collect();
    let states = run_wave(&data, &grid, &params, 31.0, 0.02, &times).unwrap();
    let mut group = c.benchmark_group("energy_table_32_samples");
    group.bench_function("sequential", |b| {
        b.iter(|| {
            states
                .iter()
                .map(|st| {
                    energy_dx(2.0, 16.0, st, &grid, &params)
                        + energy_dt(2.0, 16.0, st, &grid, &params)
                })
                .sum::<f64>()
        })
    });
    group.bench_function("rayon", |b| {
        b.iter(|| {
            states
                .par_iter()
                .map(|st| {
                    energy_dx(2.0, 16.0, st, &grid, &params)
                        + energy_dt(2.0, 16.0, st, &grid, &params)
                })
                .sum::<f64>()
        })
    });
    group.finish();
}

fn wave_stepping(c: &mut Criterion) {
    // single-trajectory stepping is strictly sequential by contract; this is
    // the baseline the batch layers sit on
    let params = ModelParams::new(0.5, 3, 1.0).unwrap();
    let grid = RadialGrid::new(&params, 41.0, 799).unwrap();
    let data = InitialData::new(
        &params,
        &grid,
        Family::parse("bump:center=2,width=0.5,amp=1").unwrap(),
        Family::Zero,
    );
    c.bench_function("wave_step_800_nodes", |b| {
        b.iter_batched(
            || WaveStepper::new(&grid, &params, &data, 0.02).unwrap(),
            |mut stepper| {
                for _ in 0..100 {
                    stepper.step().unwrap();
                }
            },
            criterion::BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, hardy_corpus, energy_table, wave_stepping);
criterion_main!(benches);
