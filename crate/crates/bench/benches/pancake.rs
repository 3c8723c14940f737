use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use pancake_core::embed::{canonical_embedding, check_embedding, EmbeddingKind};
use pancake_core::perm::Sequence;
use pancake_core::reduction::{build_instance, check_theorem, parse_dimacs};
use pancake_core::search::{decide_efficiently_sortable, exact_distance, greedy_sort};

fn random_sequence(rng: &mut StdRng, n: usize) -> Sequence {
    let mut v: Vec<u32> = (1..=n as u32).collect();
    v.shuffle(rng);
    Sequence::new(v).unwrap()
}

fn bench_primitives(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(11);
    let s = random_sequence(&mut rng, 64);
    c.bench_function("breakpoints/n=64", |b| {
        b.iter(|| black_box(&s).breakpoint_count())
    });
    c.bench_function("efficient_flips/n=64", |b| {
        b.iter(|| black_box(&s).efficient_flips())
    });
    c.bench_function("flip/n=64", |b| b.iter(|| black_box(&s).flip(48).unwrap()));
}

fn bench_search(c: &mut Criterion) {
    let fig1 = Sequence::parse("5 2 3 1 4").unwrap();
    c.bench_function("decide/fig1", |b| {
        b.iter(|| decide_efficiently_sortable(black_box(&fig1)))
    });
    let mut rng = StdRng::seed_from_u64(12);
    let mid = random_sequence(&mut rng, 10);
    c.bench_function("exact_distance/n=10", |b| {
        b.iter(|| exact_distance(black_box(&mid)).unwrap())
    });
    let big = random_sequence(&mut rng, 64);
    c.bench_function("greedy_sort/n=64", |b| {
        b.iter(|| greedy_sort(black_box(&big)))
    });
}

fn bench_gadgets(c: &mut Criterion) {
    let clause = canonical_embedding(EmbeddingKind::Clause);
    c.bench_function("funnel/clause_canonical", |b| {
        b.iter(|| check_embedding(black_box(&clause), u64::MAX).unwrap())
    });
}

fn bench_reduction(c: &mut Criterion) {
    let sat = parse_dimacs("p cnf 2 1\n1 -2 2 0\n").unwrap();
    c.bench_function("build_instance/l=2_k=1", |b| {
        b.iter(|| build_instance(black_box(&sat)))
    });
    c.bench_function("check_theorem/l=2_k=1", |b| {
        b.iter(|| check_theorem(black_box(&sat)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_primitives,
    bench_search,
    bench_gadgets,
    bench_reduction
);
criterion_main!(benches);
