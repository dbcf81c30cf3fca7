use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use kumtors::cohomology::{h1_presentation, h_bar, h_bar_detailed, BarContext, Budget};
use kumtors::linalg::{invariant_factors_by_minors, smith_normal_form};
use kumtors::perm::alternating_group;
use kumtors::reductions::VerifyOptions;
use kumtors::{annihilator, parse_module, Config, Error, Result, SparseIntMatrix};

const DEFAULT_SEED: u64 = 0x5eed;

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
    seconds: f64,
}

fn timed(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let t = Instant::now();
    let (ok, detail) = f().unwrap_or_else(|e| (false, e.to_string()));
    Check { name, ok, detail, seconds: t.elapsed().as_secs_f64() }
}

fn snf_oracle(cases: usize, seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let dense: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-9..=9) }).collect())
            .collect();
        let snf = smith_normal_form(&SparseIntMatrix::from_dense(&dense), false)?;
        let got: Vec<_> = snf.invariant_factors.iter().map(|d| d.to_big()).collect();
        let want = invariant_factors_by_minors(&dense);
        if got != want {
            return Ok((false, format!("case {case}: {dense:?} gave {got:?}, minors give {want:?}")));
        }
    }
    Ok((true, format!("{cases} matrices, seed {seed}")))
}

fn d_squared() -> Result<(bool, String)> {
    let g = alternating_group(4)?;
    let mut checked = 0;
    for src in ["triv", "N", "wedge2(N)", "M"] {
        let ctx = BarContext::new(&parse_module(&g, src)?)?;
        for p in 0..2 {
            if !ctx.coboundary(p + 1)?.matmul(&ctx.coboundary(p)?)?.is_zero() {
                return Ok((false, format!("A4 {src} p = {p}")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} composites")))
}

fn backends_agree() -> Result<(bool, String)> {
    let g = alternating_group(4)?;
    for src in ["triv", "M", "N", "wedge2(N)", "tensor(N,N)", "kummer(4,2)"] {
        let m = parse_module(&g, src)?;
        let (a, b) = (h1_presentation(&m)?, h_bar(&m, 1)?);
        if a != b {
            return Ok((false, format!("A4 {src}: presentation {a}, bar {b}")));
        }
    }
    Ok((true, "A4, 6 modules".into()))
}

fn annihilators(config: &Config) -> Result<(bool, String)> {
    let want = [1, 4, 1, 6, 1, 8, 1, 2, 1, 4];
    let mut got = Vec::new();
    for n in 3..=12 {
        let r = annihilator(n, &config.engine_options())?;
        r.certificate.verify(&VerifyOptions::default())?;
        got.push(r.annihilator);
    }
    Ok((got == want, format!("{got:?}")))
}

pub fn run(config: &Config, cases: usize, bench: bool, as_json: bool) -> Result<()> {
    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    let mut checks = vec![
        timed("snf_minor_oracle", || snf_oracle(cases, seed)),
        timed("d_squared_zero", d_squared),
        timed("h1_backends_agree", backends_agree),
        timed("annihilators_3_to_12", || annihilators(config)),
    ];
    if bench {
        checks.push(timed("bench_h2_a5_n", || {
            let g = alternating_group(5)?;
            let m = parse_module(&g, "N")?;
            let budget = Budget { snf: config.budget().snf, ..Budget::default() };
            let r = h_bar_detailed(&m, 2, &budget)?;
            let sizes: Vec<String> = r.matrices.iter().map(|(a, b, c)| format!("{a}x{b} nnz {c}")).collect();
            Ok((r.group.to_string() == "Z/3", format!("{} via {:?}; {}", r.group, r.free_rank_method, sizes.join(", "))))
        }));
        checks.push(timed("bench_snf_random_5x5", || snf_oracle(1000, seed)));
    }
    let all_ok = checks.iter().all(|c| c.ok);
    if as_json {
        let v: Vec<_> = checks
            .iter()
            .map(|c| json!({ "check": c.name, "ok": c.ok, "detail": c.detail, "seconds": c.seconds }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&json!({ "ok": all_ok, "checks": v }))?);
    } else {
        for c in &checks {
            println!("{} {:<22} {:>8.3}s  {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.seconds, c.detail);
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(Error::Verification("self-test failed".into()))
    }
}
