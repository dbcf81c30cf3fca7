use std::collections::HashMap;

use serde_json::json;

use super::*;
use crate::cohomology::{abelianization, compute, sylow_exponent_bound, Backend, Budget};
use crate::gmodule::parse_module;
use crate::linalg::SnfConfig;
use crate::perm::parse_group;

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Budget for leaf computations.
    pub budget: Budget,
    /// Cells over `A_n` with `n` at most this are computed directly when the
    /// budget allows; larger `n` go through the rules.
    pub brute_max_n: usize,
    /// Cross-check Schur multiplier values against Sylow bounds.
    pub sylow_checks: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            budget: Budget { max_rows: 1_000_000, max_nnz: 3_000_000, snf: SnfConfig::default() },
            brute_max_n: 6,
            sylow_checks: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    /// `H^p(A_n, H^{3-p}(K_{n-1}(A), Z))`.
    Main,
    /// `H^p(A_n, Z_triv)`.
    Trivial,
}

/// Deterministic planner: every cell is derived once, in a fixed strategy
/// order, and appended to the certificate with its inputs.
pub struct Engine {
    opts: EngineOptions,
    steps: Vec<Step>,
    memo: HashMap<(String, String, usize), usize>,
}

type Key = (String, String, usize);

fn key(group: &str, module: &str, p: usize) -> Key {
    (group.to_string(), module.to_string(), p)
}

impl Engine {
    pub fn new(opts: EngineOptions) -> Engine {
        Engine { opts, steps: Vec::new(), memo: HashMap::new() }
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn push(&mut self, rule: Rule, inputs: Vec<usize>, output: Output, params: serde_json::Value) -> usize {
        let id = self.steps.len();
        debug_assert!(inputs.iter().all(|&i| i < id));
        self.steps.push(Step {
            id,
            rule,
            cite: rule.cite().to_string(),
            quote: rule.quote().to_string(),
            inputs,
            output,
            params,
        });
        id
    }

    fn push_cell(&mut self, k: &Key, rule: Rule, inputs: Vec<usize>, status: Status, params: serde_json::Value) -> usize {
        let cell = CohCell {
            group: k.0.clone(),
            module: k.1.clone(),
            degree: k.2,
            status,
            provenance: rule.name().to_string(),
        };
        let id = self.push(rule, inputs, Output::Cell(cell), params);
        self.memo.insert(k.clone(), id);
        id
    }

    pub fn cell(&self, id: usize) -> &CohCell {
        self.steps[id].output.cell().expect("step produces a cell")
    }

    fn status(&self, id: usize) -> &Status {
        &self.cell(id).status
    }

    pub fn finish(self, conclusion: usize) -> Certificate {
        Certificate { schema_version: SCHEMA_VERSION, steps: self.steps, conclusion }
    }

    fn allow_brute(&self, n: usize) -> bool {
        n <= self.opts.brute_max_n.max(4)
    }

    /// Runs a backend; `None` when it is beyond budget.
    fn brute(&mut self, k: &Key, backend: Backend) -> Result<Option<usize>> {
        let g = parse_group(&k.0)?;
        let m = parse_module(&g, &k.1)?;
        match compute(&m, k.2, backend, &self.opts.budget) {
            Ok(r) => {
                let params = json!({ "backend": r.backend, "free_rank_method": r.free_rank_method });
                let id = self.push_cell(k, Rule::Backend, vec![], Status::exact(r.group), params);
                if let Output::Cell(c) = &mut self.steps[id].output {
                    c.provenance = format!("backend:{}", backend_name(r.backend));
                }
                Ok(Some(id))
            }
            Err(e) if e.is_budget() => {
                log::debug!("{} H^{}({}) beyond budget: {e}", k.0, k.2, k.1);
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn order_bound(&mut self, k: &Key, n: usize) -> usize {
        let status = match alternating_order(n) {
            Some(o) => Status::Bound { exponent: o },
            None => Status::Unknown,
        };
        self.push_cell(k, Rule::OrderBound, vec![], status, json!({ "n": n }))
    }

    fn default_backend(module: &str, p: usize) -> Backend {
        match (module, p) {
            ("triv", 2 | 3) => Backend::Uct,
            (_, 1) => Backend::Auto,
            _ => Backend::Bar,
        }
    }

    /// Direct computation if allowed and within budget, else `derive`.
    fn with_brute(&mut self, n: usize, module: &str, p: usize, derive: impl FnOnce(&mut Engine, &Key) -> Result<usize>) -> Result<usize> {
        let k = key(&alt_label(n), module, p);
        if let Some(&id) = self.memo.get(&k) {
            return Ok(id);
        }
        if self.allow_brute(n) {
            if let Some(id) = self.brute(&k, Self::default_backend(module, p))? {
                return Ok(id);
            }
        }
        derive(self, &k)
    }

    /// `H^p(A_n, Z_triv)`.
    pub fn trivial(&mut self, n: usize, p: usize) -> Result<usize> {
        let k = key(&alt_label(n), "triv", p);
        if let Some(&id) = self.memo.get(&k) {
            return Ok(id);
        }
        if p == 1 {
            return Ok(self.push_cell(&k, Rule::FiniteH1, vec![], Status::exact(AbGroup::zero()), json!(null)));
        }
        if n >= 3 && self.allow_brute(n) && (p == 2 || p == 3) {
            if let Some(id) = self.brute(&k, Backend::Uct)? {
                return Ok(id);
            }
        }
        match p {
            2 if (3..=crate::perm::presentation::MAX_PRESENTED_DEGREE).contains(&n) => {
                let ab = abelianization(&parse_group(&k.0)?)?;
                Ok(self.push_cell(&k, Rule::Abelianization, vec![], Status::exact(ab.clone()), json!({ "abelianization": ab })))
            }
            2 if n >= 5 => Ok(self.push_cell(&k, Rule::PerfectGroup, vec![], Status::exact(AbGroup::zero()), json!({ "n": n }))),
            3 => {
                let id = self.push_cell(&k, Rule::SchurMultiplier, vec![], Status::exact(schur_h3(n)), json!({ "n": n }));
                if self.opts.sylow_checks {
                    self.sylow_check(id, n)?;
                }
                Ok(id)
            }
            _ => Ok(self.order_bound(&k, n)),
        }
    }

    fn sylow_check(&mut self, cell: usize, n: usize) -> Result<usize> {
        let g = parse_group(&alt_label(n))?;
        let m = parse_module(&g, "triv")?;
        let c = self.cell(cell).clone();
        let b = sylow_exponent_bound(&m, c.degree, &self.opts.budget)?;
        let factors: Vec<_> = b.factors.iter().map(|f| json!({ "prime": f.prime, "factor": f.factor, "computed": f.sylow_value.is_some() })).collect();
        let fact = Fact { statement: format!("Sylow bound on the exponent of H^{}({}, {})", c.degree, c.group, c.module), value: Some(b.bound) };
        Ok(self.push(Rule::SylowConsistency, vec![cell], Output::Fact(fact), json!({ "factors": factors })))
    }

    /// `H^p(A_n, M)`.
    pub fn natural(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "M", p, |e, k| {
            if n >= 4 && p >= 1 {
                let sub = e.trivial(n - 1, p)?;
                let st = e.status(sub).clone();
                Ok(e.push_cell(k, Rule::Shapiro, vec![sub], st, json!({ "subgroup": alt_label(n - 1), "coset_space": "points" })))
            } else {
                Ok(e.order_bound(k, n))
            }
        })
    }

    /// `H^p(A_n, Z[ordered pairs of distinct points])`.
    pub fn off_diagonal(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "perm(opairs)", p, |e, k| {
            if n >= 5 && p >= 1 {
                let sub = e.trivial(n - 2, p)?;
                let st = e.status(sub).clone();
                Ok(e.push_cell(k, Rule::Shapiro, vec![sub], st, json!({ "subgroup": alt_label(n - 2), "coset_space": "opairs" })))
            } else {
                Ok(e.order_bound(k, n))
            }
        })
    }

    /// `H^1(Stab_{A_n}({1,2}), Z_-)` through `1 → A_{n-2} → Stab → Z/2 → 1`.
    pub fn pair_stabilizer_sign(&mut self, n: usize) -> Result<usize> {
        let k = key(&pair_stabilizer_label(n), "sign({1,2})", 1);
        if let Some(&id) = self.memo.get(&k) {
            return Ok(id);
        }
        let quotient = match self.memo.get(&key("S2", "sign", 1)) {
            Some(&id) => id,
            None => self.brute(&key("S2", "sign", 1), Backend::Bar)?.expect("order two"),
        };
        let kernel = self.trivial(n - 2, 1)?;
        let st = if self.status(kernel).is_zero() { self.status(quotient).clone() } else { Status::Unknown };
        Ok(self.push_cell(&k, Rule::InflationRestriction, vec![quotient, kernel], st, json!({ "n": n, "kernel": alt_label(n - 2), "quotient": "S2" })))
    }

    /// `H^1(A_n, ∧²M)`.
    pub fn wedge_natural(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "wedge2(M)", p, |e, k| {
            if n >= 4 && p == 1 {
                let sub = e.pair_stabilizer_sign(n)?;
                let st = e.status(sub).clone();
                Ok(e.push_cell(k, Rule::Shapiro, vec![sub], st, json!({ "subgroup": pair_stabilizer_label(n), "coset_space": "pairs" })))
            } else {
                Ok(e.order_bound(k, n))
            }
        })
    }

    /// `H^1(A_n, M⊗M)` through `M⊗M ≅ M ⊕ Z[ordered pairs]`.
    pub fn tensor_natural(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "tensor(M,M)", p, |e, k| {
            let parts = [e.natural(n, p)?, e.off_diagonal(n, p)?];
            let sum_key = key(&k.0, "dsum(M,perm(opairs))", p);
            let st = sum_status(&[(e.status(parts[0]), 1), (e.status(parts[1]), 1)]);
            let sum = e.push_cell(&sum_key, Rule::DirectSum, parts.to_vec(), st.clone(), json!({ "multiplicities": [1, 1] }));
            Ok(e.push_cell(k, Rule::OrbitDecomposition, vec![sum], st, json!(null)))
        })
    }

    fn les_squeeze(&mut self, k: &Key, ses: &str, n: usize, start: usize, x: usize, z: usize) -> usize {
        let st = match (self.status(x).exponent(), self.status(z).exponent()) {
            (Some(1), Some(1)) => Status::exact(AbGroup::zero()),
            (Some(a), Some(b)) => a.checked_mul(b).map_or(Status::Unknown, |e| Status::Bound { exponent: e }),
            _ => Status::Unknown,
        };
        self.push_cell(k, Rule::LesSqueeze, vec![x, z], st, json!({ "ses": ses, "n": n, "start": start }))
    }

    /// `H^p(A_n, N)`.
    pub fn reduced(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "N", p, |e, k| match p {
            // H^1(M) → H^1(N) → H^2(Z)
            1 => {
                let (x, z) = (e.natural(n, 1)?, e.trivial(n, 2)?);
                Ok(e.les_squeeze(k, "triv_m_n", n, 4, x, z))
            }
            // H^2(M) → H^2(N) → H^3(Z) → H^3(M)
            2 => {
                let x = e.natural(n, 2)?;
                if n >= 7 && e.status(x).is_zero() {
                    let fact = Fact {
                        statement: format!("restriction H^3({}, Z) -> H^3({}, Z) is injective", alt_label(n), alt_label(n - 1)),
                        value: None,
                    };
                    let inj = e.push(Rule::RestrictionInjectivity, vec![], Output::Fact(fact), json!({ "n": n }));
                    Ok(e.push_cell(k, Rule::LesInjectiveTail, vec![x, inj], Status::exact(AbGroup::zero()), json!({ "ses": "triv_m_n", "n": n, "start": 7 })))
                } else {
                    let z = e.trivial(n, 3)?;
                    Ok(e.les_squeeze(k, "triv_m_n", n, 7, x, z))
                }
            }
            _ => Ok(e.order_bound(k, n)),
        })
    }

    /// `H^1(A_n, ∧²N)`.
    pub fn wedge_reduced(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "wedge2(N)", p, |e, k| {
            if p != 1 {
                return Ok(e.order_bound(k, n));
            }
            // H^1(N) → H^1(∧²M) → H^1(∧²N) → H^2(N)
            let (w, x, z) = (e.reduced(n, 1)?, e.wedge_natural(n, 1)?, e.reduced(n, 2)?);
            if e.status(w).is_zero() && e.status(z).is_zero() {
                let st = e.status(x).clone();
                Ok(e.push_cell(k, Rule::LesIsomorphism, vec![w, x, z], st, json!({ "ses": "n_wedge", "n": n, "start": 3, "known": 1 })))
            } else {
                Ok(e.les_squeeze(k, "n_wedge", n, 4, x, z))
            }
        })
    }

    /// `H^p(A_n, K)`, `K = Z⊗M + M⊗Z`.
    pub fn k_module(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "K", p, |e, k| {
            if p != 2 {
                return Ok(e.order_bound(k, n));
            }
            // H^2(Z) → H^2(K) → H^2(N ⊕ N)
            let x = e.trivial(n, 2)?;
            let nn = e.reduced(n, 2)?;
            let sum_key = key(&k.0, "dsum(N,N)", 2);
            let z = match e.memo.get(&sum_key) {
                Some(&id) => id,
                None => {
                    let st = sum_status(&[(e.status(nn), 1), (e.status(nn), 1)]);
                    e.push_cell(&sum_key, Rule::DirectSum, vec![nn, nn], st, json!({ "multiplicities": [1, 1] }))
                }
            };
            Ok(e.les_squeeze(k, "triv_k_nn", n, 6, x, z))
        })
    }

    /// `H^1(A_n, N⊗N)`.
    pub fn tensor_reduced(&mut self, n: usize, p: usize) -> Result<usize> {
        self.with_brute(n, "tensor(N,N)", p, |e, k| {
            if p != 1 {
                return Ok(e.order_bound(k, n));
            }
            // H^1(M⊗M) → H^1(N⊗N) → H^2(K)
            let (x, z) = (e.tensor_natural(n, 1)?, e.k_module(n, 2)?);
            Ok(e.les_squeeze(k, "k_tensor", n, 4, x, z))
        })
    }

    fn module_cell(&mut self, n: usize, module: &str, p: usize) -> Result<usize> {
        match module {
            "triv" => self.trivial(n, p),
            "N" => self.reduced(n, p),
            "wedge2(N)" => self.wedge_reduced(n, p),
            "tensor(N,N)" => self.tensor_reduced(n, p),
            _ => Err(Error::invalid(format!("no derivation for module {module}"))),
        }
    }

    /// `H^p(A_n, H^q(K_{n-1}(A), Z))` by additivity over its summands.
    pub fn kummer(&mut self, n: usize, q: usize, p: usize) -> Result<usize> {
        let k = key(&alt_label(n), &kummer_label(n, q), p);
        if let Some(&id) = self.memo.get(&k) {
            return Ok(id);
        }
        let parts = kummer_summands(q).ok_or_else(|| Error::invalid(format!("no Kummer module in degree {q}")))?;
        let mut inputs = Vec::new();
        for (m, _) in &parts {
            inputs.push(self.module_cell(n, m, p)?);
        }
        let mults: Vec<usize> = parts.iter().map(|(_, k)| *k).collect();
        let statuses: Vec<(&Status, usize)> = inputs.iter().zip(&mults).map(|(&i, &m)| (self.status(i), m)).collect();
        let st = sum_status(&statuses);
        Ok(self.push_cell(&k, Rule::DirectSum, inputs, st, json!({ "multiplicities": mults })))
    }

    pub fn table_cell(&mut self, table: Table, n: usize, p: usize) -> Result<usize> {
        if n < 3 || !(1..=3).contains(&p) {
            return Err(Error::invalid(format!("table cells need n >= 3 and p in 1..=3, got n = {n}, p = {p}")));
        }
        match table {
            Table::Main => self.kummer(n, 3 - p, p),
            Table::Trivial => self.trivial(n, p),
        }
    }
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Bar => "bar",
        Backend::Pres => "pres",
        Backend::Uct => "uct",
        Backend::Auto => "auto",
    }
}

/// One table cell with a self-contained certificate concluding in it.
pub fn derive_table_cell(n: usize, p: usize, table: Table, opts: &EngineOptions) -> Result<(CohCell, Certificate)> {
    let mut e = Engine::new(opts.clone());
    let id = e.table_cell(table, n, p)?;
    let cell = e.cell(id).clone();
    Ok((cell, e.finish(id)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(cell: &CohCell) -> AbGroup {
        cell.status.value().cloned().unwrap_or_else(|| panic!("{cell} is not exact"))
    }

    #[test]
    fn chains_for_large_n() {
        let opts = EngineOptions { brute_max_n: 4, ..Default::default() };
        let mut e = Engine::new(opts);
        for n in [8, 9] {
            let p1 = e.table_cell(Table::Main, n, 1).unwrap();
            assert_eq!(exact(e.cell(p1)), AbGroup::cyclic(2).power(4));
            let p2 = e.table_cell(Table::Main, n, 2).unwrap();
            assert_eq!(exact(e.cell(p2)), AbGroup::zero());
            let p3 = e.table_cell(Table::Main, n, 3).unwrap();
            assert_eq!(exact(e.cell(p3)), AbGroup::cyclic(2));
        }
        let last = e.steps().len() - 1;
        let cert = e.finish(last);
        cert.verify(&VerifyOptions::default()).unwrap();
        let back = Certificate::from_json(&cert.to_json_pretty()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn tampered_certificate_fails() {
        let (_, mut cert) = derive_table_cell(8, 2, Table::Main, &EngineOptions::default()).unwrap();
        let inj = cert.steps.iter().position(|s| s.rule == Rule::RestrictionInjectivity).unwrap();
        cert.steps[inj].params = json!({ "n": 6 });
        assert!(cert.verify(&VerifyOptions::default()).is_err());
    }

    #[test]
    fn small_cells_are_computed() {
        let (cell, cert) = derive_table_cell(4, 1, Table::Main, &EngineOptions::default()).unwrap();
        assert_eq!(exact(&cell), AbGroup::from_cyclic_orders(0, [4, 4, 4, 4, 2, 2, 2, 2, 2, 2]).unwrap());
        let report = cert.verify(&VerifyOptions { recompute: true, ..Default::default() }).unwrap();
        assert!(report.recomputed > 0);
    }
}
