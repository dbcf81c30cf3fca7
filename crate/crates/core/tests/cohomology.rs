use kumtors::cohomology::*;
use kumtors::gmodule::dsl::{eval_subgroup, parse};
use kumtors::perm::{alternating_group, cyclic_group, symmetric_group};
use kumtors::{parse_module, AbGroup, Error, PermGroup};

fn z(d: u64) -> AbGroup {
    AbGroup::cyclic(d)
}

fn module(g: &PermGroup, src: &str) -> kumtors::GModule {
    parse_module(g, src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

#[test]
fn bar_values_with_trivial_coefficients() {
    let a3 = alternating_group(3).unwrap();
    assert_eq!(h_bar(&module(&a3, "triv"), 2).unwrap(), z(3));
    let a4 = alternating_group(4).unwrap();
    assert_eq!(h_bar(&module(&a4, "triv"), 3).unwrap(), z(2));
    let a5 = alternating_group(5).unwrap();
    assert_eq!(h_bar(&module(&a5, "triv"), 1).unwrap(), AbGroup::zero());
}

#[test]
fn sign_module_of_cyclic_two() {
    let c2 = cyclic_group(2).unwrap();
    assert_eq!(h_bar(&module(&c2, "sign"), 1).unwrap(), z(2));
    assert_eq!(h_bar(&module(&c2, "sign"), 0).unwrap(), AbGroup::zero());
    assert_eq!(h_bar(&module(&c2, "triv"), 2).unwrap(), z(2));
}

#[test]
fn degree_zero_is_fixed_points() {
    let a4 = alternating_group(4).unwrap();
    assert_eq!(h_bar(&module(&a4, "M"), 0).unwrap(), AbGroup::free(1));
    assert_eq!(h_bar(&module(&a4, "N"), 0).unwrap(), AbGroup::zero());
    assert_eq!(h_bar(&module(&a4, "tensor(M,M)"), 0).unwrap(), AbGroup::free(2));
}

#[test]
fn presentation_values() {
    let a4 = alternating_group(4).unwrap();
    assert_eq!(h1_presentation(&module(&a4, "triv")).unwrap(), AbGroup::zero());
    let want = AbGroup::from_cyclic_orders(0, [4, 4, 4, 4, 2, 2, 2, 2, 2, 2]).unwrap();
    assert_eq!(h1_presentation(&module(&a4, "kummer(4,2)")).unwrap(), want);
    let a6 = alternating_group(6).unwrap();
    assert_eq!(h1_presentation(&module(&a6, "wedge2(M)")).unwrap(), z(2));
    assert_eq!(h1_presentation(&module(&a6, "tensor(M,M)")).unwrap(), AbGroup::zero());
}

#[test]
fn trivial_coefficients_through_homology() {
    let a4 = alternating_group(4).unwrap();
    assert_eq!(h_trivial_via_uct(&a4, 2).unwrap(), z(3));
    let a5 = alternating_group(5).unwrap();
    assert_eq!(h_trivial_via_uct(&a5, 3).unwrap(), z(2));
    // H_2(A6) needs 359^3 chains, past the default budget
    let a6 = alternating_group(6).unwrap();
    assert!(matches!(h_trivial_via_uct(&a6, 3), Err(Error::Infeasible(_))));
    assert_eq!(abelianization(&a6).unwrap(), AbGroup::zero());
    assert_eq!(abelianization(&symmetric_group(4).unwrap()).unwrap(), z(2));
}

#[test]
fn uct_agrees_with_bar() {
    for g in [alternating_group(4).unwrap(), symmetric_group(3).unwrap(), cyclic_group(4).unwrap()] {
        for p in [2, 3] {
            assert_eq!(h_trivial_via_uct(&g, p).unwrap(), h_bar(&module(&g, "triv"), p).unwrap(), "{} p={p}", g.name());
        }
    }
}

#[test]
fn backends_are_selectable() {
    let a4 = alternating_group(4).unwrap();
    let m = module(&a4, "wedge2(N)");
    let b = Budget::default();
    for be in [Backend::Bar, Backend::Pres, Backend::Auto] {
        assert_eq!(compute(&m, 1, be, &b).unwrap().group, z(4));
    }
    assert!(compute(&m, 2, Backend::Pres, &b).is_err());
    assert!(compute(&m, 2, Backend::Uct, &b).is_err());
    assert_eq!(compute(&module(&a4, "triv"), 2, Backend::Uct, &b).unwrap().group, z(3));
}

#[test]
fn additivity_of_direct_sums() {
    let a4 = alternating_group(4).unwrap();
    for p in 1..=2 {
        let lhs = h_bar(&module(&a4, "dsum(N,wedge2(N))"), p).unwrap();
        let rhs = h_bar(&module(&a4, "N"), p).unwrap().direct_sum(&h_bar(&module(&a4, "wedge2(N)"), p).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn pair_sign_needs_a_pair_preserving_group() {
    let a4 = alternating_group(4).unwrap();
    assert!(matches!(parse_module(&a4, "dsum(N,sign({1,2}))"), Err(Error::Parse { .. })));
}

#[test]
fn sylow_bounds() {
    let a5 = alternating_group(5).unwrap();
    let b = sylow_exponent_bound(&module(&a5, "triv"), 1, &Budget::default()).unwrap();
    assert_eq!(60 % b.bound, 0);
    let a4 = alternating_group(4).unwrap();
    let m = module(&a4, "kummer(4,2)");
    let b = sylow_exponent_bound(&m, 1, &Budget::default()).unwrap();
    assert_eq!(b.bound % 4, 0);
    assert!(b.factors.iter().all(|f| f.sylow_value.is_some()));
}

#[test]
fn sylow_bound_on_a8_kummer_module_is_a_two_power() {
    let a8 = alternating_group(8).unwrap();
    let m = module(&a8, "kummer(8,2)");
    let b = sylow_exponent_bound(&m, 1, &Budget::default()).unwrap();
    let odd: u64 = b.factors.iter().filter(|f| f.prime != 2).map(|f| f.factor).product();
    assert_eq!(odd, 1, "{:?}", b.factors);
}

#[test]
fn subgroups_from_expressions() {
    let a5 = alternating_group(5).unwrap();
    let h = eval_subgroup(&a5, &parse("stab(pairs,{1,2})").unwrap()).unwrap();
    assert_eq!(h.order(), 6);
    assert_eq!(h_bar(&module(&h, "sign({1,2})"), 1).unwrap(), z(2));
}
