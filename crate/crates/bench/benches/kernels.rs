use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use monopart::equitable::equitable_color;
use monopart::families::random_bounded_graph;
use monopart::oracle::min_partition_exact;
use monopart::ramsey::{find_mono_copy, CopyOptions};
use monopart::regularity::{check_regularity_exact, check_regularity_heuristic};
use monopart::{partition, GraphFamily, PipelineParams, Rational};
use monopart_bench::{pair, random_coloring, random_pair, split_coloring};
use rand::SeedableRng;

fn regularity(c: &mut Criterion) {
    let mut group = c.benchmark_group("regularity");
    for side in [8, 10, 12] {
        let (g, a, b) = random_pair(side, side, 0.5, 1);
        group.bench_with_input(BenchmarkId::new("exact", side), &side, |bch, _| {
            bch.iter(|| check_regularity_exact(&pair(&g, &a, &b), Rational::new(1, 5)).unwrap())
        });
    }
    let (g, a, b) = random_pair(200, 200, 0.5, 2);
    group.bench_function("heuristic_200", |bch| {
        bch.iter(|| check_regularity_heuristic(&pair(&g, &a, &b), Rational::new(1, 10), 3, 24))
    });
    group.finish();
}

fn equitable(c: &mut Criterion) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let g = random_bounded_graph(200, 8, &mut rng);
    c.bench_function("equitable_200_d8", |b| b.iter(|| equitable_color(black_box(&g), 9).unwrap()));
}

fn extraction(c: &mut Criterion) {
    let g = random_coloring(200, 0.5, 3);
    let all: Vec<usize> = (0..200).collect();
    let cycles = GraphFamily::cycles();
    let c50 = cycles.member(50).unwrap();
    c.bench_function("mono_c50_in_200", |b| {
        b.iter(|| find_mono_copy(&g, &all, &c50, &c50, CopyOptions::default()).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let g = random_coloring(10, 0.5, 4);
    let m = GraphFamily::matchings();
    c.bench_function("oracle_n10_matchings", |b| b.iter(|| min_partition_exact(&g, &m, &m).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    let fam = GraphFamily::paths();
    for n in [100, 300] {
        let g = split_coloring(n, n * 3 / 10);
        group.bench_with_input(BenchmarkId::new("split_paths", n), &n, |b, _| {
            b.iter(|| partition(&g, &fam, &fam, &PipelineParams::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, regularity, equitable, extraction, oracle, pipeline);
criterion_main!(benches);
