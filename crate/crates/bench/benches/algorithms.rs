use coxforge::cox::presentation_for_graph;
use coxforge::graph::{extended_degree_matrix, CaseName, Family};
use coxforge::invariants::{degree_zero_hilbert_basis, toric_relations, InvariantGenerator};
use coxforge::reduction::{
    cokernel_dimension, cokernel_dimension_finite, full_equivalence_audit, reduce_nef_to_basic, reduce_to_nef,
    AuditCaps, DEFAULT_STEP_CAP, DEFAULT_TRUNCATION_CAP,
};
use coxforge::ring::MultiDegree;
use coxforge_bench::{degree_sample, graph};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn hilbert_bases(c: &mut Criterion) {
    let mut grp = c.benchmark_group("hilbert_basis");
    for (f, n) in [(Family::A, 6), (Family::D, 6), (Family::D, 9), (Family::E, 6), (Family::E, 8)] {
        let g = extended_degree_matrix(&graph(f, n));
        grp.bench_with_input(BenchmarkId::from_parameter(format!("{f}{n}")), &g, |b, g| {
            b.iter(|| degree_zero_hilbert_basis(black_box(g)).unwrap())
        });
    }
    grp.finish();
}

fn relations(c: &mut Criterion) {
    let g = extended_degree_matrix(&graph(Family::D, 7));
    let gens: Vec<InvariantGenerator> = degree_zero_hilbert_basis(&g)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, monomial)| InvariantGenerator { name: format!("G{i}"), monomial })
        .collect();
    c.bench_function("toric_relations/D7", |b| b.iter(|| toric_relations(black_box(&gens), 5)));
}

fn reductions(c: &mut Criterion) {
    let mut grp = c.benchmark_group("reduce");
    for (f, n) in [(Family::D, 5), (Family::E, 8)] {
        let g = graph(f, n);
        let sample = degree_sample(&g, 64);
        grp.bench_function(format!("{f}{n}"), |b| {
            b.iter(|| {
                for d in &sample {
                    let t = reduce_to_nef(d, &g, DEFAULT_STEP_CAP).unwrap();
                    black_box(reduce_nef_to_basic(&t.terminal, &g, DEFAULT_STEP_CAP).unwrap());
                }
            })
        });
    }
    grp.finish();
}

fn cokernels(c: &mut Criterion) {
    let g = graph(Family::D, 5);
    let p = presentation_for_graph(&g).unwrap();
    let t = reduce_nef_to_basic(&MultiDegree(vec![1, 0, 0, 0, 3]), &g, DEFAULT_STEP_CAP).unwrap();
    let step = t.steps[0].clone();
    let mut grp = c.benchmark_group("cokernel/D5_add_curve");
    grp.bench_function("finite", |b| b.iter(|| cokernel_dimension_finite(&p, black_box(&step)).unwrap()));
    grp.bench_function("truncated", |b| {
        b.iter(|| cokernel_dimension(&p, black_box(&step), DEFAULT_TRUNCATION_CAP).unwrap())
    });
    grp.finish();
}

fn audits(c: &mut Criterion) {
    let case: CaseName = "D6".parse().unwrap();
    let sample = degree_sample(&case.build().unwrap(), 16);
    let caps = AuditCaps { base_k_max: 0, ..AuditCaps::default() };
    c.bench_function("audit/D6x16", |b| {
        b.iter(|| {
            for d in &sample {
                black_box(full_equivalence_audit(&case, d, &caps).unwrap());
            }
        })
    });
}

criterion_group!(benches, hilbert_bases, relations, reductions, cokernels, audits);
criterion_main!(benches);
