use kumtors::pipeline::{cover_bound, expected_annihilator, spectral_bound, MAX_N};
use kumtors::reductions::VerifyOptions;
use kumtors::{annihilator, EngineOptions};

#[test]
fn spectral_bounds() {
    let opts = EngineOptions::default();
    for (n, want) in [(3, 2), (4, 32), (5, 24), (6, 72), (7, 24), (8, 8), (13, 8)] {
        assert_eq!(spectral_bound(n, &opts).unwrap(), want, "n = {n}");
    }
}

#[test]
fn annihilators_match_closed_form() {
    let opts = EngineOptions::default();
    for n in 3..=MAX_N {
        let r = annihilator(n, &opts).unwrap();
        assert_eq!(r.annihilator, expected_annihilator(n), "n = {n}");
        assert!(r.matches_expected);
        assert_eq!(r.cover_bound, cover_bound(n).unwrap());
        r.certificate.verify(&VerifyOptions::default()).unwrap();
    }
}

#[test]
fn report_serializes_with_schema() {
    let r = annihilator(9, &EngineOptions::default()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["annihilator"], 1);
    assert_eq!(v["exponents"].as_array().unwrap().len(), 3);
    assert_eq!(v["certificate"]["schema_version"], 1);
}

#[test]
fn out_of_range_n() {
    let opts = EngineOptions::default();
    assert!(annihilator(2, &opts).is_err());
    assert!(annihilator(MAX_N + 1, &opts).is_err());
}
