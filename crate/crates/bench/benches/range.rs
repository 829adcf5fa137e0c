use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use matrange_bench::{conjugated_image, q, quartic_with_trv};
use matrange_core::{
    build_witness, char_poly, coverable, critical_value_polynomial, decide_range, describe_range,
    jordan_decomposition, ramification_profile, segre_at, EntireFunction, Poly,
};

fn bench_matrices(c: &mut Criterion) {
    let f = quartic_with_trv();
    let a = conjugated_image(&f);
    c.bench_function("char_poly 6x6", |b| b.iter(|| char_poly(black_box(&a))));
    c.bench_function("segre_at 6x6", |b| {
        b.iter(|| segre_at(black_box(&a), &q("7")))
    });
    c.bench_function("jordan_decomposition 6x6", |b| {
        b.iter(|| jordan_decomposition(black_box(&a)).unwrap())
    });
}

fn bench_polynomials(c: &mut Criterion) {
    let p = Poly::from_ints(&[3, -1, 4, 1, -5, 9, 2, -6]);
    c.bench_function("critical_value_polynomial deg 7", |b| {
        b.iter(|| critical_value_polynomial(black_box(&p)).unwrap())
    });
    let f = quartic_with_trv();
    c.bench_function("ramification_profile quartic", |b| {
        b.iter(|| ramification_profile(black_box(&f)).unwrap())
    });
}

fn bench_range(c: &mut Criterion) {
    c.bench_function("coverable [4,3,3,2,2,1] M={2,3}", |b| {
        b.iter(|| coverable(black_box(&[4, 3, 3, 2, 2, 1]), &[2, 3], false, true))
    });
    let sine = EntireFunction::sin_family(q("0"), q("1"), q("1"), q("0")).unwrap();
    c.bench_function("describe_range sine n=8", |b| {
        b.iter(|| describe_range(black_box(&sine), 8).unwrap())
    });
    let f = quartic_with_trv();
    let a = conjugated_image(&f);
    c.bench_function("decide_range quartic 6x6", |b| {
        b.iter(|| decide_range(black_box(&f), black_box(&a)).unwrap())
    });
    let verdict = decide_range(&f, &a).unwrap();
    c.bench_function("build_witness quartic 6x6", |b| {
        b.iter(|| build_witness(black_box(&f), black_box(&a), &verdict).unwrap())
    });
}

criterion_group!(benches, bench_matrices, bench_polynomials, bench_range);
criterion_main!(benches);
