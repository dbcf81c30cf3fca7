use proptest::prelude::*;

use kumtors::cohomology::h_bar;
use kumtors::linalg::{invariant_factors_by_minors, smith_normal_form};
use kumtors::perm::{alternating_group, cyclic_group, symmetric_group};
use kumtors::{parse_module, AbGroup, PermGroup, SparseIntMatrix};

fn factors(dense: &[Vec<i64>]) -> Vec<num_bigint::BigInt> {
    let snf = smith_normal_form(&SparseIntMatrix::from_dense(dense), false).unwrap();
    snf.invariant_factors.iter().map(|d| d.to_big()).collect()
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_matches_minors(m in matrix(5)) {
        prop_assert_eq!(factors(&m), invariant_factors_by_minors(&m));
    }

    #[test]
    fn snf_invariant_under_row_and_column_operations(m in matrix(5), k in -3i64..=3, i in 0usize..5, j in 0usize..5) {
        let base = factors(&m);
        let (r, c) = (m.len(), m[0].len());
        let mut a = m.clone();
        let (i1, i2) = (i % r, j % r);
        if i1 != i2 {
            for col in 0..c {
                a[i1][col] += k * a[i2][col];
            }
        }
        a.swap(0, r - 1);
        let (j1, j2) = (i % c, j % c);
        if j1 != j2 {
            for row in a.iter_mut() {
                row[j1] += k * row[j2];
                row.swap(j1, j2);
            }
        }
        for row in a.iter_mut() {
            row[0] = -row[0];
        }
        prop_assert_eq!(factors(&a), base);
    }
}

fn small_groups() -> Vec<PermGroup> {
    vec![cyclic_group(2).unwrap(), cyclic_group(4).unwrap(), symmetric_group(3).unwrap(), alternating_group(4).unwrap()]
}

#[test]
fn cohomology_is_additive() {
    for g in small_groups() {
        for p in 1..=2 {
            let h = |s: &str| h_bar(&parse_module(&g, s).unwrap(), p).unwrap();
            assert_eq!(h("dsum(M,N)"), h("M").direct_sum(&h("N")), "{} p={p}", g.name());
            assert_eq!(h("dsum(triv,wedge2(M))"), h("triv").direct_sum(&h("wedge2(M)")), "{} p={p}", g.name());
        }
    }
}

#[test]
fn group_order_annihilates_positive_degrees() {
    for g in small_groups() {
        for src in ["triv", "sign", "N", "wedge2(N)", "tensor(N,N)"] {
            let Ok(m) = parse_module(&g, src) else { continue };
            for p in 1..=2 {
                let v: AbGroup = h_bar(&m, p).unwrap();
                assert_eq!(v.free_rank(), 0, "{} {src} p={p}", g.name());
                assert_eq!(g.order() % v.exponent().unwrap(), 0, "{} {src} p={p}", g.name());
            }
        }
    }
}
