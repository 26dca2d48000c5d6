use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use squarecat_core::barcobar::{counit_check, DGAlgebra, TruncationPolicy};
use squarecat_core::chain::ChainComplex;
use squarecat_core::cset::{boundary, normalized_chains};
use squarecat_core::cube::enumerate_hom;
use squarecat_core::square::{chain_square, mapping_space, pi0};
use squarecat_core::Fp;

fn hom_sets(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_hom");
    for n in 2..=4 {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| enumerate_hom(black_box(n), n).len()));
    }
    g.finish();
}

fn boundary_chains(c: &mut Criterion) {
    let f = Fp::new(2).unwrap();
    let (x, _) = boundary(3);
    c.bench_function("boundary3_homology", |b| b.iter(|| normalized_chains(black_box(&x), f).homology()));
}

fn mapping_spaces(c: &mut Criterion) {
    let f = Fp::new(2).unwrap();
    let q = chain_square(f);
    let (x, y) = (ChainComplex::disk(f, 1), ChainComplex::sphere(f, 1));
    let mut g = c.benchmark_group("mapping_space");
    g.sample_size(10);
    for cap in [2, 3] {
        g.bench_with_input(BenchmarkId::new("disk1_sphere1", cap), &cap, |b, &cap| {
            b.iter(|| mapping_space(&q, &x, &y, cap).unwrap())
        });
    }
    let m = mapping_space(&q, &x, &y, 1).unwrap();
    g.bench_function("pi0", |b| b.iter(|| pi0(black_box(&m)).unwrap()));
    g.finish();
}

fn counit(c: &mut Criterion) {
    let f = Fp::new(2).unwrap();
    let policy = TruncationPolicy::default();
    let a = DGAlgebra::exterior(f, 1).unwrap();
    let mut g = c.benchmark_group("counit_check");
    g.sample_size(10);
    g.bench_function("exterior1", |b| b.iter(|| counit_check(&a, &policy).unwrap()));
    g.finish();
}

criterion_group!(benches, hom_sets, boundary_chains, mapping_spaces, counit);
criterion_main!(benches);
