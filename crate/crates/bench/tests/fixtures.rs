use kumtors::linalg::cokernel_invariants;
use kumtors_bench::random_sparse;

#[test]
fn benchmark_inputs_are_reducible() {
    let a = random_sparse(40, 30, 0.1, 3);
    let g = cokernel_invariants(&a, 40).unwrap();
    assert!(g.free_rank() >= 10);
}
