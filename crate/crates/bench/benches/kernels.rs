use cmera_core::correlators::smooth_part;
use cmera_core::gaussian_entropy::{block_entropy, sample_interval_boson, sample_interval_fermion, DEFAULT_TOL_EIG};
use cmera_core::polar2d::{boson_block, fermion_block, PolarGrid, PolarTables, RadialNodes};
use cmera_core::gaussian_entropy::HalfInteger;
use cmera_core::transforms::{cos_transform, QuadratureSpec};
use cmera_core::{Channel, Theory, TheoryConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("transform");
    for x in [0.1, 10.0, 1000.0] {
        let spec = QuadratureSpec::for_separation(1.0, x);
        g.bench_with_input(BenchmarkId::new("gaussian_cos", x), &x, |b, &x| {
            b.iter(|| cos_transform(|k| (-k * k).exp(), black_box(x), &spec).unwrap())
        });
        let cfg = TheoryConfig::new(Theory::Boson1d);
        g.bench_with_input(BenchmarkId::new("boson1d_pipi", x), &x, |b, &x| {
            b.iter(|| smooth_part(&cfg, Channel::PiPi, black_box(x)).unwrap())
        });
    }
    g.finish();
}

fn entropy(c: &mut Criterion) {
    let mut g = c.benchmark_group("interval_entropy");
    g.sample_size(10);
    for n in [100usize, 400] {
        let a = 0.01;
        let x = n as f64 * a;
        let b = sample_interval_boson(x, a, &TheoryConfig::new(Theory::Boson1d)).unwrap();
        g.bench_with_input(BenchmarkId::new("boson", n), &b, |bn, blocks| {
            bn.iter(|| block_entropy(blocks, DEFAULT_TOL_EIG).unwrap())
        });
        let f = sample_interval_fermion(x, a, &TheoryConfig::new(Theory::Fermion1d)).unwrap();
        g.bench_with_input(BenchmarkId::new("fermion", n), &f, |bn, blocks| {
            bn.iter(|| block_entropy(blocks, DEFAULT_TOL_EIG).unwrap())
        });
    }
    g.finish();
}

fn polar(c: &mut Criterion) {
    let mut g = c.benchmark_group("polar_block");
    g.sample_size(10);
    let grid = PolarGrid::new(0.025, 40, RadialNodes::Midpoint).unwrap();
    let bt = PolarTables::build(&TheoryConfig::new(Theory::Boson2d), 1.0).unwrap();
    g.bench_function("boson_l1_n40", |b| b.iter(|| boson_block(1, &grid, &bt).unwrap()));
    let ft = PolarTables::build(&TheoryConfig::new(Theory::Fermion2d), 1.0).unwrap();
    g.bench_function("fermion_j1/2_n40", |b| b.iter(|| fermion_block(HalfInteger::new(1), &grid, &ft).unwrap()));
    g.finish();
}

criterion_group!(benches, transforms, entropy, polar);
criterion_main!(benches);
