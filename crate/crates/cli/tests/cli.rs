use std::process::{Command, Output};

fn kumtors(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kumtors")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bound_json() {
    let o = kumtors(&["--json", "bound", "--n", "9"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["annihilator"], 1);
    assert_eq!(v["spectral_bound"], 8);
    assert_eq!(v["cover_bound"], 9);
    assert_eq!(v["matches_expected"], true);
}

#[test]
fn table_renders_both_grids() {
    let o = kumtors(&["table", "--n-min", "3", "--n-max", "5", "--which", "trivial"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("Z/3"), "{s}");
    assert!(s.contains("brute"), "{s}");
}

#[test]
fn compute_reports_value() {
    let o = kumtors(&["--json", "compute", "--group", "A4", "--module", "wedge2(M)", "--degree", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["display"], "Z/2");
}

#[test]
fn certificate_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.json");
    let p = path.to_str().unwrap();
    assert!(kumtors(&["bound", "--n", "8", "--emit-certificate", p]).status.success());
    let o = kumtors(&["verify-cert", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("8 annihilates"));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let last = v["conclusion"].as_u64().unwrap() as usize;
    v["steps"][last]["output"]["value"] = serde_json::json!(4);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(kumtors(&["verify-cert", p]).status.code(), Some(1));

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(kumtors(&["verify-cert", p]).status.code(), Some(1));
}

#[test]
fn table_certificates_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(kumtors(&["table", "--n-min", "8", "--n-max", "8", "--which", "main", "--emit-certificates", d]).status.success());
    for p in 1..=3 {
        let f = dir.path().join(format!("main_n8_p{p}.json"));
        assert!(kumtors(&["verify-cert", f.to_str().unwrap()]).status.success());
    }
}

#[test]
fn exit_codes() {
    // over budget
    let o = kumtors(&["compute", "--group", "A7", "--module", "N", "--degree", "3", "--backend", "bar"]);
    assert_eq!(o.status.code(), Some(2));
    // bad module expression, with a caret under the error
    let o = kumtors(&["compute", "--group", "A4", "--module", "wedge2(Q)", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains('^'));
    // usage error
    assert_eq!(kumtors(&["bound"]).status.code(), Some(3));
    assert_eq!(kumtors(&["bound", "--n", "2"]).status.code(), Some(3));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.toml");
    std::fs::write(&path, "max_rows = 10\n").unwrap();
    let o = kumtors(&["--config", path.to_str().unwrap(), "compute", "--group", "A4", "--module", "N", "--degree", "2", "--backend", "bar"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&path, "unknown_key = 1\n").unwrap();
    let o = kumtors(&["--config", path.to_str().unwrap(), "bound", "--n", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn selftest_passes() {
    let o = kumtors(&["selftest", "--cases", "100"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 4);
}
