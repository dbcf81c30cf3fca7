use serde_json::json;

use kumtors::cohomology::h_bar;
use kumtors::gmodule::dsl::{eval_subgroup, parse};
use kumtors::perm::alternating_group;
use kumtors::reductions::{derive_table_cell, Engine, Output, Rule, Status, VerifyOptions};
use kumtors::{parse_module, AbGroup, Certificate, CohCell, EngineOptions, Table};

fn exact(c: &CohCell) -> AbGroup {
    c.status.value().cloned().unwrap_or_else(|| panic!("{c} is not exact"))
}

fn chain_opts() -> EngineOptions {
    EngineOptions { brute_max_n: 4, ..Default::default() }
}

#[test]
fn table_cells_with_certificates() {
    let cases = [
        (4, 1, Table::Main, AbGroup::from_cyclic_orders(0, [4, 4, 4, 4, 2, 2, 2, 2, 2, 2]).unwrap()),
        (6, 2, Table::Main, AbGroup::cyclic(3).power(4)),
        (9, 1, Table::Main, AbGroup::cyclic(2).power(4)),
        (7, 3, Table::Trivial, AbGroup::cyclic(6)),
    ];
    for (n, p, t, want) in cases {
        let (cell, cert) = derive_table_cell(n, p, t, &EngineOptions::default()).unwrap();
        assert_eq!(exact(&cell), want, "n={n} p={p}");
        cert.verify(&VerifyOptions::default()).unwrap();
        assert_eq!(Certificate::from_json(&cert.to_json_pretty()).unwrap(), cert);
    }
}

#[test]
fn large_n_uses_rules_only() {
    let (cell, cert) = derive_table_cell(10, 2, Table::Main, &chain_opts()).unwrap();
    assert!(cell.status.is_zero());
    assert!(cert.provenance_summary().starts_with("rules"));
    assert!(cert.axioms().contains(&Rule::RestrictionInjectivity));
}

#[test]
fn injectivity_below_seven_is_rejected() {
    let (_, mut cert) = derive_table_cell(7, 2, Table::Main, &chain_opts()).unwrap();
    let i = cert.steps.iter().position(|s| s.rule == Rule::RestrictionInjectivity).expect("n = 7 uses injectivity");
    cert.steps[i].params = json!({ "n": 6 });
    assert!(cert.verify(&VerifyOptions::default()).is_err());
}

#[test]
fn tampered_values_are_rejected() {
    let (_, cert) = derive_table_cell(8, 1, Table::Main, &chain_opts()).unwrap();
    let last = cert.conclusion;
    let mut bad = cert.clone();
    if let Output::Cell(c) = &mut bad.steps[last].output {
        c.status = Status::exact(AbGroup::cyclic(2).power(3));
    }
    assert!(bad.verify(&VerifyOptions::default()).is_err());
    let mut bad = cert.clone();
    bad.steps[0].quote = "anything".into();
    assert!(bad.verify(&VerifyOptions::default()).is_err());
    let mut bad = cert;
    bad.steps[last].inputs = vec![last];
    assert!(bad.verify(&VerifyOptions::default()).is_err());
}

#[test]
fn schur_value_is_consistent_with_sylow_bound() {
    let opts = EngineOptions { sylow_checks: true, ..chain_opts() };
    let (_, cert) = derive_table_cell(7, 3, Table::Trivial, &opts).unwrap();
    let s = cert.steps.iter().find(|s| s.rule == Rule::SylowConsistency).expect("sylow step");
    let bound = s.output.fact().unwrap().value.unwrap();
    assert_eq!(bound % 6, 0);
    cert.verify(&VerifyOptions::default()).unwrap();
}

#[test]
fn inflation_restriction_matches_direct_computation() {
    let mut e = Engine::new(EngineOptions::default());
    let id = e.pair_stabilizer_sign(5).unwrap();
    let a5 = alternating_group(5).unwrap();
    let h = eval_subgroup(&a5, &parse("stab(pairs,{1,2})").unwrap()).unwrap();
    let direct = h_bar(&parse_module(&h, "sign({1,2})").unwrap(), 1).unwrap();
    assert_eq!(exact(e.cell(id)), direct);
    assert_eq!(direct, AbGroup::cyclic(2));
}

#[test]
fn shapiro_values_match_induced_modules() {
    let a5 = alternating_group(5).unwrap();
    let mut e = Engine::new(chain_opts());
    for (src, id) in [
        ("M", e.natural(5, 1).unwrap()),
        ("perm(opairs)", e.off_diagonal(5, 1).unwrap()),
        ("wedge2(M)", e.wedge_natural(5, 1).unwrap()),
    ] {
        assert_eq!(e.cell(id).status.value().unwrap(), &h_bar(&parse_module(&a5, src).unwrap(), 1).unwrap(), "{src}");
    }
    for n in 6..=10 {
        let id = e.wedge_natural(n, 1).unwrap();
        assert_eq!(exact(e.cell(id)), AbGroup::cyclic(2));
        let id = e.tensor_natural(n, 1).unwrap();
        assert_eq!(exact(e.cell(id)), AbGroup::zero());
    }
}

#[test]
fn recompute_mode_checks_leaves() {
    let (_, cert) = derive_table_cell(5, 1, Table::Main, &EngineOptions::default()).unwrap();
    let r = cert.verify(&VerifyOptions { recompute: true, ..Default::default() }).unwrap();
    assert!(r.recomputed > 0);
}
