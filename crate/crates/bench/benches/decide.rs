use std::hint::black_box;

use copossible_bench::{conjugated_factors, cospan_of, disjoint_subsets, line_and_plane, operation_pair};
use copossible_core::finvect::joint_extension_by_basis;
use copossible_core::latalg::boolean::adjudicate_atom_split;
use copossible_core::opalg::{search_joint_extension, tensor_operation, FeasibilityParams};
use copossible_core::{decide_mor_independence, Budget, FiniteCategory};
use criterion::{criterion_group, criterion_main, Criterion};

fn exhaustive(c: &mut Criterion) {
    let budget = Budget::default();
    let (set_cat, set_span) = disjoint_subsets();
    c.bench_function("finset disjoint pair in a 4-set", |b| {
        b.iter(|| decide_mor_independence(&set_cat, black_box(&set_span), &budget))
    });

    let (vect_cat, line, plane) = line_and_plane();
    let vect_span = cospan_of(&vect_cat, &line, &plane);
    c.bench_function("finvect line and plane in F_2^3", |b| {
        b.iter(|| decide_mor_independence(&vect_cat, black_box(&vect_span), &budget))
    });

    let ends_a = vect_cat.hom(&line.space(), &line.space());
    let ends_b = vect_cat.hom(&plane.space(), &plane.space());
    c.bench_function("finvect basis extension", |b| {
        b.iter(|| joint_extension_by_basis(&line, &plane, black_box(&ends_a[1]), black_box(&ends_b[7])))
    });

    c.bench_function("atom split n = 5, k = 2", |b| b.iter(|| adjudicate_atom_split(5, black_box(2), &budget)));
}

fn operators(c: &mut Criterion) {
    let (alpha_a, alpha_b) = operation_pair(7);
    c.bench_function("tensor operation on M_2 x M_2", |b| {
        b.iter(|| tensor_operation(black_box(&alpha_a), black_box(&alpha_b)))
    });

    let (f_a, f_b) = conjugated_factors(11);
    let params = FeasibilityParams::default();
    let mut group = c.benchmark_group("feasibility");
    group.sample_size(10);
    group.bench_function("conjugated factors in M_4", |b| {
        b.iter(|| search_joint_extension(&f_a, &f_b, &alpha_a, &alpha_b, black_box(&params)))
    });
    group.finish();
}

criterion_group!(benches, exhaustive, operators);
criterion_main!(benches);
