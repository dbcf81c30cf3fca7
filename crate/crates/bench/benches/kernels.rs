use criterion::{black_box, criterion_group, criterion_main, Criterion};

use kumtors::cohomology::{h1_presentation, h_bar, BarContext};
use kumtors::linalg::{cokernel_invariants, smith_normal_form};
use kumtors::perm::alternating_group;
use kumtors::reductions::{derive_table_cell, EngineOptions, Table};
use kumtors::parse_module;
use kumtors_bench::random_sparse;

fn snf(c: &mut Criterion) {
    let a = random_sparse(200, 150, 0.03, 1);
    c.bench_function("snf_random_200x150", |b| b.iter(|| smith_normal_form(black_box(&a), false).unwrap()));
    let d = random_sparse(400, 400, 0.01, 2);
    c.bench_function("cokernel_random_400x400", |b| b.iter(|| cokernel_invariants(black_box(&d), 400).unwrap()));
}

fn cohomology(c: &mut Criterion) {
    let a4 = alternating_group(4).unwrap();
    let a5 = alternating_group(5).unwrap();
    let a6 = alternating_group(6).unwrap();
    let n5 = parse_module(&a5, "N").unwrap();
    let ctx = BarContext::new(&n5).unwrap();
    c.bench_function("coboundary_a5_n_d1", |b| b.iter(|| ctx.coboundary(black_box(1)).unwrap()));
    let n4 = parse_module(&a4, "N").unwrap();
    c.bench_function("h2_a4_n", |b| b.iter(|| h_bar(black_box(&n4), 2).unwrap()));
    let w6 = parse_module(&a6, "tensor(N,N)").unwrap();
    c.bench_function("h1_presentation_a6_nn", |b| b.iter(|| h1_presentation(black_box(&w6)).unwrap()));
    c.bench_function("table_cell_n8_p1", |b| {
        b.iter(|| derive_table_cell(black_box(8), 1, Table::Main, &EngineOptions::default()).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = snf, cohomology
}
criterion_main!(benches);
