use anticross_bench::{family_member, reference, small, X_NEAR};
use anticross_core::linalg::eigenvalues;
use anticross_core::{
    assemble_hc_sym, build_core, build_full_hamiltonian, build_gevp, find_crossing, solve_b,
    solve_gevp,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn two_level(c: &mut Criterion) {
    c.bench_function("solve_b", |b| {
        b.iter(|| solve_b(black_box(1.0), black_box(2.5)))
    });
    let spec = reference();
    c.bench_function("find_crossing", |b| {
        b.iter(|| find_crossing(black_box(&spec)))
    });
}

fn reductions(c: &mut Criterion) {
    let mut g = c.benchmark_group("hc_sym");
    for m in [2, 4, 6] {
        let spec = family_member(m);
        g.bench_with_input(BenchmarkId::new("assemble", m), &spec, |b, s| {
            b.iter(|| assemble_hc_sym(s, black_box(X_NEAR)))
        });
        g.bench_with_input(BenchmarkId::new("core_eigen", m), &spec, |b, s| {
            b.iter(|| eigenvalues(&build_core(s, black_box(X_NEAR)).h_core))
        });
        g.bench_with_input(BenchmarkId::new("gevp", m), &spec, |b, s| {
            b.iter(|| solve_gevp(&build_gevp(s, black_box(X_NEAR)).unwrap()))
        });
    }
    g.finish();
}

fn full_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("full_hamiltonian");
    g.sample_size(10);
    for (name, spec) in [("n7", small()), ("n11", reference())] {
        g.bench_function(BenchmarkId::new("eigen", name), |b| {
            b.iter(|| eigenvalues(&build_full_hamiltonian(&spec, black_box(X_NEAR)).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, two_level, reductions, full_oracle);
criterion_main!(benches);
