use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use helitube::bloch::{BandModel, BandSource, BlochVector, KPath};
use helitube::oracle::{self, OracleOptions};
use helitube::{CellGrid, Gauge, HelixSpec, SurfaceOperators, WaveField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec() -> HelixSpec {
    HelixSpec::from_epsilon(1.0, 1.0, 0.05).unwrap()
}

fn assembly(c: &mut Criterion) {
    let s = spec();
    let k = BlochVector::zone_boundary(&s);
    c.bench_function("assemble_sector_64x64", |b| {
        b.iter(|| oracle::assemble_sector(black_box(&s), k, 64, 64, 0).unwrap())
    });
    c.bench_function("assemble_full_16x16", |b| b.iter(|| oracle::assemble_full(black_box(&s), k, 16, 16).unwrap()));
}

fn eigensolve(c: &mut Criterion) {
    let s = spec();
    let k = BlochVector::zone_boundary(&s);
    let sector = oracle::assemble_sector(&s, k, 64, 64, 0).unwrap();
    c.bench_function("eigensolve_sector_64", |b| b.iter(|| sector.eigensolve(2).unwrap()));
    let dense = oracle::assemble_full(&s, k, 16, 16).unwrap();
    c.bench_function("eigensolve_dense_256", |b| b.iter(|| dense.eigensolve(2).unwrap()));
    let model = BandModel::new(s);
    let ray = oracle::assemble_perturbed(&model, k, 7).unwrap();
    c.bench_function("eigensolve_ray_15", |b| b.iter(|| ray.eigensolve(2).unwrap()));
}

fn band_sweep(c: &mut Criterion) {
    let model = BandModel::new(spec());
    let path = KPath::default_for(&model.spec).points();
    let opts = OracleOptions::default();
    let mut group = c.benchmark_group("band_sweep_101");
    group.sample_size(10);
    for source in [BandSource::TwoBand, BandSource::OraclePerturbed, BandSource::OracleFull] {
        group.bench_function(source.tag(), |b| b.iter(|| oracle::band_sweep(&model, &path, source, &opts).unwrap()));
    }
    group.finish();
}

fn spectral_operator(c: &mut Criterion) {
    let s = spec();
    let grid = CellGrid::unit_cell(&s, 64, 64).unwrap();
    let ops = SurfaceOperators::new(&s, grid);
    let phi = WaveField::random_band_limited(grid, Gauge::Phi, 4, 4, &mut ChaCha8Rng::seed_from_u64(1));
    c.bench_function("transformed_operator_64x64", |b| b.iter(|| ops.transformed_operator(black_box(&phi)).unwrap()));
    c.bench_function("conjugated_laplace_beltrami_64x64", |b| {
        b.iter(|| ops.conjugated_laplace_beltrami(black_box(&phi)).unwrap())
    });
}

criterion_group!(benches, assembly, eigensolve, band_sweep, spectral_operator);
criterion_main!(benches);
