use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use seqalloc_core::ceei::ceei_test;
use seqalloc_core::efficiency::pareto_optimal_mask;
use seqalloc_core::sequences::enumerate_relation;
use seqalloc_core::*;

fn uniform(n: usize, m: usize) -> Instance {
    generate_instance(&GeneratorConfig::new(Model::Uniform, n, m, 17)).unwrap()
}

/// An envy-free outcome of some round-robin rotation, if any.
fn envy_free_outcome(inst: &Instance) -> Option<Allocation> {
    let (n, m) = (inst.num_agents(), inst.num_objects());
    (0..n).find_map(|shift| {
        let picks = (0..m).map(|k| (k + shift) % n).collect();
        execute_sequence(inst, &Sequence::new(picks))
            .unwrap()
            .into_iter()
            .find(|a| is_envy_free(inst, a))
    })
}

fn sequences(c: &mut Criterion) {
    let mut group = c.benchmark_group("sequences");
    for m in [4, 6, 8] {
        let inst = uniform(2, m);
        group.bench_with_input(BenchmarkId::new("enumerate_relation", m), &inst, |b, inst| {
            b.iter(|| enumerate_relation(black_box(inst)).unwrap())
        });
    }
    let inst = uniform(3, 8);
    let all: Vec<Allocation> = AllocationIter::new(3, 8).collect();
    group.bench_function("sequence_of_all_3x8", |b| {
        b.iter(|| all.iter().filter(|a| sequence_of(&inst, a).is_some()).count())
    });
    group.finish();
}

fn efficiency(c: &mut Criterion) {
    let mut group = c.benchmark_group("efficiency");
    for m in [6, 8] {
        let inst = uniform(3, m);
        group.bench_with_input(BenchmarkId::new("pareto_mask", m), &inst, |b, inst| {
            b.iter(|| pareto_optimal_mask(black_box(inst)).unwrap())
        });
    }
    group.finish();
}

fn fairness(c: &mut Criterion) {
    let inst = uniform(3, 8);
    c.bench_function("fair_shares_3x8", |b| b.iter(|| FairShares::compute(black_box(&inst)).unwrap()));
}

fn ceei(c: &mut Criterion) {
    let mut group = c.benchmark_group("ceei");
    group.sample_size(10);
    for (n, m) in [(3, 6), (3, 8), (3, 10)] {
        let inst = uniform(n, m);
        if let Some(a) = envy_free_outcome(&inst) {
            group.bench_function(format!("ceei_test_{n}x{m}"), |b| b.iter(|| ceei_test(&inst, &a).unwrap()));
        }
    }
    group.finish();
}

fn experiment(c: &mut Criterion) {
    let mut group = c.benchmark_group("experiment");
    group.sample_size(10);
    let inst = uniform(3, 6);
    group.bench_function("classify_all_3x6", |b| b.iter(|| classify_all(black_box(&inst)).unwrap()));
    group.finish();
}

criterion_group!(benches, sequences, efficiency, fairness, ceei, experiment);
criterion_main!(benches);
