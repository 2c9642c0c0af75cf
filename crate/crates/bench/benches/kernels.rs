use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hessemon::perm::{g0, g1, PermGroup};
use hessemon::rng::{complex_normal, random_cubic, seeded};
use hessemon::uniroots::{all_roots, UniPoly};
use hessemon::{catalog, locus, track, TrackingConfig};

fn roots(c: &mut Criterion) {
    let mut rng = seeded(1);
    let p = UniPoly::new((0..=9).map(|_| complex_normal(&mut rng)).collect()).unwrap();
    c.bench_function("all_roots degree 9", |b| b.iter(|| all_roots(black_box(&p)).unwrap()));
}

fn inflections(c: &mut Criterion) {
    let f = random_cubic(&mut seeded(2));
    c.bench_function("inflection_points random", |b| b.iter(|| locus::inflection_points(black_box(&f)).unwrap()));
    let cusp = catalog::cuspidal();
    c.bench_function("inflection_points cuspidal", |b| {
        b.iter(|| locus::inflection_points(black_box(&cusp)).unwrap())
    });
}

fn tracking(c: &mut Criterion) {
    let l = catalog::pi1_loop(0, 0.05);
    let labels = track::basepoint_labels(&l.basepoint).unwrap();
    let cfg = TrackingConfig::default();
    c.bench_function("track_loop c1", |b| b.iter(|| track::track_loop(black_box(&l), &labels, &cfg).unwrap()));
}

fn closure(c: &mut Criterion) {
    c.bench_function("closure <g0,g1>", |b| b.iter(|| PermGroup::closure(black_box(&[g0(), g1()]))));
}

criterion_group!(kernels, roots, inflections, tracking, closure);
criterion_main!(kernels);
