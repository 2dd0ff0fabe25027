use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dpcolor::colorer::{mt_phase1, Phase1Config};
use dpcolor::cover::{random_cover, CoverMode};
use dpcolor::exact::ind_count;
use dpcolor::graph::{generate, Family};
use dpcolor::harness::{layered_case, star_case};
use dpcolor::sampler::{layer_threshold, layered_sample, star_sample};
use dpcolor::seed;

fn independent_sets(c: &mut Criterion) {
    let mut group = c.benchmark_group("ind_count");
    for n in [12, 20, 28] {
        let g = generate(&Family::RandomKrFree { n, d: 4.0, r: 4, seed: 1 }).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| ind_count(g).unwrap()));
    }
    group.finish();
}

fn neighborhood_samplers(c: &mut Criterion) {
    let star = star_case(7);
    let inst = star.instance().unwrap();
    let mut rng = seed::rng(1);
    c.bench_function("star_sample", |b| b.iter(|| star_sample(&inst, &mut rng).unwrap()));

    let layered = layered_case(7);
    let inst = layered.instance().unwrap();
    let threshold = layer_threshold(layered.cover.graph().max_degree());
    c.bench_function("layered_sample", |b| {
        b.iter(|| layered_sample(&inst, black_box(threshold), &mut rng).unwrap())
    });
}

fn phase1(c: &mut Criterion) {
    let mut group = c.benchmark_group("mt_phase1");
    group.sample_size(10);
    for n in [200, 500] {
        let g = generate(&Family::RandomTriangleFree { n, d: 20.0, seed: 3 }).unwrap();
        let cover = random_cover(&g, g.max_degree() + 1, 3, CoverMode::Perfect).unwrap();
        let cfg = Phase1Config::triangle_free(8, n, 5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &cover, |b, cover| {
            b.iter(|| mt_phase1(cover, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, independent_sets, neighborhood_samplers, phase1);
criterion_main!(benches);
