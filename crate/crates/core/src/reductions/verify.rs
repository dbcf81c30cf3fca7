//! Step-by-step re-verification of certificates. Rule preconditions and
//! arithmetic are always checked; backend values and the short exact
//! sequences behind LES steps are recomputed on request.

use super::*;
use crate::cohomology::{abelianization, compute, Backend, Budget};
use crate::gmodule::{parse_module, ses_k_tensor, ses_n_wedge, ses_triv_k_nn, ses_triv_m_n};
use crate::perm::{alternating_group, parse_group};

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Recompute backend leaves and rebuild the exact sequences.
    pub recompute: bool,
    pub budget: Budget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub steps: usize,
    pub recomputed: usize,
    pub axioms: Vec<Rule>,
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn param_usize(s: &Step, name: &str) -> std::result::Result<usize, String> {
    s.params.get(name).and_then(|v| v.as_u64()).map(|v| v as usize).ok_or_else(|| format!("missing parameter {name}"))
}

fn param_str<'a>(s: &'a Step, name: &str) -> std::result::Result<&'a str, String> {
    s.params.get(name).and_then(|v| v.as_str()).ok_or_else(|| format!("missing parameter {name}"))
}

fn alt_n(group: &str) -> std::result::Result<usize, String> {
    parse_alt_label(group).ok_or_else(|| format!("{group} is not an alternating group label"))
}

impl Certificate {
    pub fn verify(&self, opts: &VerifyOptions) -> Result<VerifyReport> {
        let mut recomputed = 0;
        for (i, s) in self.steps.iter().enumerate() {
            let fail = |m: String| Error::Verification(format!("step {i} ({}): {m}", s.rule.name()));
            if s.id != i {
                return Err(fail(format!("id {} out of sequence", s.id)));
            }
            if let Some(&bad) = s.inputs.iter().find(|&&j| j >= i) {
                return Err(fail(format!("input {bad} is not an earlier step")));
            }
            if s.cite != s.rule.cite() || s.quote != s.rule.quote() {
                return Err(fail("citation does not match the rule".into()));
            }
            if let Output::Cell(c) = &s.output {
                if c.provenance.is_empty() && c.status != Status::Unknown {
                    return Err(fail("cell without provenance".into()));
                }
            }
            self.check_step(s).map_err(fail)?;
            if opts.recompute && self.recompute_step(s, &opts.budget).map_err(fail)? {
                recomputed += 1;
            }
        }
        if self.conclusion >= self.steps.len() {
            return Err(Error::Verification(format!("conclusion {} is not a step", self.conclusion)));
        }
        Ok(VerifyReport { steps: self.steps.len(), recomputed, axioms: self.axioms() })
    }

    fn input_cell(&self, s: &Step, k: usize) -> std::result::Result<&CohCell, String> {
        let id = *s.inputs.get(k).ok_or_else(|| format!("missing input {k}"))?;
        self.steps[id].output.cell().ok_or_else(|| format!("input {id} is not a cell"))
    }

    fn input_fact(&self, s: &Step, k: usize) -> std::result::Result<(&Step, &Fact), String> {
        let id = *s.inputs.get(k).ok_or_else(|| format!("missing input {k}"))?;
        let st = &self.steps[id];
        Ok((st, st.output.fact().ok_or_else(|| format!("input {id} is not a fact"))?))
    }

    fn check_step(&self, s: &Step) -> Check {
        let out_cell = || s.output.cell().ok_or_else(|| "output is not a cell".to_string());
        let out_fact = || s.output.fact().ok_or_else(|| "output is not a fact".to_string());
        let arity = |k: usize| ensure(s.inputs.len() == k, || format!("expected {k} inputs, got {}", s.inputs.len()));
        match s.rule {
            Rule::Backend => {
                arity(0)?;
                let c = out_cell()?;
                param_str(s, "backend")?;
                if c.degree > 0 {
                    let order = parse_group(&c.group).map_err(|e| e.to_string())?.order();
                    let e = c.status.exponent().ok_or("positive-degree value with a free part")?;
                    ensure(order % e == 0, || format!("exponent {e} does not divide |G| = {order}"))?;
                }
                Ok(())
            }
            Rule::FiniteH1 => {
                arity(0)?;
                let c = out_cell()?;
                ensure(c.module == "triv" && c.degree == 1, || "applies to H^1 with trivial coefficients".into())?;
                ensure(c.status == Status::exact(AbGroup::zero()), || "value must be 0".into())
            }
            Rule::Abelianization => {
                arity(0)?;
                let c = out_cell()?;
                ensure(c.module == "triv" && c.degree == 2, || "applies to H^2 with trivial coefficients".into())?;
                let ab: AbGroup = serde_json::from_value(s.params.get("abelianization").cloned().unwrap_or_default())
                    .map_err(|e| format!("bad abelianization parameter: {e}"))?;
                ensure(ab.is_finite(), || "abelianization of a finite group is finite".into())?;
                ensure(c.status == Status::exact(ab), || "value differs from the abelianization".into())
            }
            Rule::PerfectGroup => {
                arity(0)?;
                let c = out_cell()?;
                let n = alt_n(&c.group)?;
                ensure(n >= 5 && c.module == "triv" && c.degree == 2, || "needs H^2(A_n, Z) with n >= 5".into())?;
                ensure(c.status.is_zero(), || "value must be 0".into())
            }
            Rule::SchurMultiplier => {
                arity(0)?;
                let c = out_cell()?;
                let n = alt_n(&c.group)?;
                ensure(c.module == "triv" && c.degree == 3, || "applies to H^3(A_n, Z)".into())?;
                ensure(c.status == Status::exact(schur_h3(n)), || format!("expected {}", schur_h3(n)))
            }
            Rule::Shapiro => {
                arity(1)?;
                let (c, inp) = (out_cell()?, self.input_cell(s, 0)?);
                let n = alt_n(&c.group)?;
                let (sub, w, min_n) = match c.module.as_str() {
                    "M" => (alt_label(n - 1), "triv", 4),
                    "perm(opairs)" => (alt_label(n.saturating_sub(2)), "triv", 4),
                    "wedge2(M)" => (pair_stabilizer_label(n), "sign({1,2})", 4),
                    other => return Err(format!("{other} is not a recognized induced module")),
                };
                ensure(n >= min_n, || format!("needs n >= {min_n}"))?;
                ensure(inp.same_slot(&sub, w, c.degree), || format!("input must be H^{}({sub}, {w})", c.degree))?;
                ensure(inp.status == c.status, || "value not transferred".into())
            }
            Rule::OrbitDecomposition => {
                arity(1)?;
                let (c, inp) = (out_cell()?, self.input_cell(s, 0)?);
                ensure(c.module == "tensor(M,M)", || "applies to M⊗M".into())?;
                ensure(inp.same_slot(&c.group, "dsum(M,perm(opairs))", c.degree), || "input must be the orbit sum".into())?;
                ensure(inp.status == c.status, || "value not transferred".into())
            }
            Rule::DirectSum => {
                let c = out_cell()?;
                let parts = summands_of(&c.module, &c.group).ok_or("module is not a recognized direct sum")?;
                let mults: Vec<usize> = serde_json::from_value(s.params.get("multiplicities").cloned().unwrap_or_default())
                    .map_err(|e| format!("bad multiplicities: {e}"))?;
                let expected: Vec<usize> = parts.iter().map(|(_, k)| *k).collect();
                ensure(mults == expected, || format!("multiplicities {mults:?}, expected {expected:?}"))?;
                arity(parts.len())?;
                let mut statuses = Vec::new();
                for (k, (m, mult)) in parts.iter().enumerate() {
                    let inp = self.input_cell(s, k)?;
                    ensure(inp.same_slot(&c.group, m, c.degree), || format!("input {k} must be H^{}({}, {m})", c.degree, c.group))?;
                    statuses.push((&inp.status, *mult));
                }
                let want = sum_status(&statuses);
                ensure(c.status == want, || format!("sum should be {want}"))
            }
            Rule::InflationRestriction => {
                arity(2)?;
                let c = out_cell()?;
                let n = param_usize(s, "n")?;
                ensure(n >= 4, || "needs n >= 4".into())?;
                ensure(c.same_slot(&pair_stabilizer_label(n), "sign({1,2})", 1), || "output must be H^1 of the pair stabilizer with Z_-".into())?;
                let (q, k) = (self.input_cell(s, 0)?, self.input_cell(s, 1)?);
                ensure(q.same_slot("S2", "sign", 1), || "first input must be H^1(Z/2, Z_-)".into())?;
                ensure(k.same_slot(&alt_label(n - 2), "triv", 1), || "second input must be H^1(A_(n-2), Z)".into())?;
                ensure(k.status.is_zero(), || "kernel term must vanish".into())?;
                ensure(c.status == q.status, || "value not transferred".into())
            }
            Rule::RestrictionInjectivity => {
                arity(0)?;
                out_fact()?;
                ensure(param_usize(s, "n")? >= 7, || "injectivity is only available for n >= 7".into())
            }
            Rule::LesSqueeze | Rule::LesIsomorphism | Rule::LesInjectiveTail => self.check_les(s),
            Rule::OrderBound => {
                arity(0)?;
                let c = out_cell()?;
                let n = alt_n(&c.group)?;
                ensure(c.degree > 0, || "needs positive degree".into())?;
                let want = alternating_order(n).map_or(Status::Unknown, |o| Status::Bound { exponent: o });
                ensure(c.status == want, || format!("bound should be {want}"))
            }
            Rule::SylowConsistency => {
                arity(1)?;
                let (inp, f) = (self.input_cell(s, 0)?, out_fact()?);
                let b = f.value.ok_or("missing bound")?;
                let e = inp.status.exponent().ok_or("input without exponent")?;
                ensure(b % e == 0, || format!("exponent {e} does not divide the Sylow bound {b}"))
            }
            Rule::CoverBound => {
                arity(0)?;
                let n = param_usize(s, "n")?;
                ensure(n >= 3, || "needs n >= 3".into())?;
                ensure(out_fact()?.value == Some(n as u64), || format!("cover bound must be {n}"))
            }
            Rule::SpectralBound => {
                arity(3)?;
                let n = param_usize(s, "n")?;
                let mut b = 2u64;
                for p in 1..=3 {
                    let c = self.input_cell(s, p - 1)?;
                    ensure(c.same_slot(&alt_label(n), &kummer_label(n, 3 - p), p), || format!("input {} must be the degree {p} table cell", p - 1))?;
                    let e = c.status.exponent().ok_or("table cell without exponent")?;
                    b = b.checked_mul(e).ok_or("bound overflows")?;
                }
                ensure(out_fact()?.value == Some(b), || format!("spectral bound must be {b}"))
            }
            Rule::Gcd => {
                arity(2)?;
                let (a, b) = (self.input_fact(s, 0)?, self.input_fact(s, 1)?);
                let x = a.1.value.ok_or("missing value")?;
                let y = b.1.value.ok_or("missing value")?;
                ensure(out_fact()?.value == Some(num_integer::gcd(x, y)), || "gcd mismatch".into())
            }
        }
    }

    fn check_les(&self, s: &Step) -> Check {
        let c = s.output.cell().ok_or("output is not a cell")?;
        let ses = param_str(s, "ses")?;
        let n = param_usize(s, "n")?;
        let start = param_usize(s, "start")?;
        ensure(c.group == alt_label(n), || "group does not match n".into())?;
        let term = |t: usize| les_term(ses, t).ok_or_else(|| format!("unknown sequence {ses}"));
        let at = |cell: &CohCell, t: usize| -> Check {
            let (m, d) = term(t)?;
            ensure(cell.same_slot(&c.group, m, d), || format!("expected H^{d}({}, {m}) at position {t}", c.group))
        };
        match s.rule {
            Rule::LesSqueeze => {
                let (x, z) = (self.input_cell(s, 0)?, self.input_cell(s, 1)?);
                at(x, start)?;
                at(c, start + 1)?;
                at(z, start + 2)?;
                let want = match (x.status.exponent(), z.status.exponent()) {
                    (Some(1), Some(1)) => Status::exact(AbGroup::zero()),
                    (Some(a), Some(b)) => a.checked_mul(b).map_or(Status::Unknown, |e| Status::Bound { exponent: e }),
                    _ => Status::Unknown,
                };
                ensure(c.status == want, || format!("middle term should be {want}"))
            }
            Rule::LesIsomorphism => {
                let known = param_usize(s, "known")?;
                ensure(known == 1 || known == 2, || "known position must be 1 or 2".into())?;
                let (w, x, z) = (self.input_cell(s, 0)?, self.input_cell(s, 1)?, self.input_cell(s, 2)?);
                at(w, start)?;
                at(x, start + known)?;
                at(c, start + 3 - known)?;
                at(z, start + 3)?;
                ensure(w.status.is_zero() && z.status.is_zero(), || "outer terms must vanish".into())?;
                ensure(c.status == x.status, || "value not transferred".into())
            }
            _ => {
                let x = self.input_cell(s, 0)?;
                let (fs, _) = self.input_fact(s, 1)?;
                ensure(ses == "triv_m_n" && start == 7, || "injective tail is H^2(M) -> H^2(N) -> H^3(Z) -> H^3(M)".into())?;
                ensure(fs.rule == Rule::RestrictionInjectivity && param_usize(fs, "n")? == n, || "needs injectivity for the same n".into())?;
                at(x, start)?;
                at(c, start + 1)?;
                ensure(x.status.is_zero(), || "first term must vanish".into())?;
                ensure(c.status.is_zero(), || "conclusion must be 0".into())
            }
        }
    }

    /// Returns whether anything was recomputed.
    fn recompute_step(&self, s: &Step, budget: &Budget) -> std::result::Result<bool, String> {
        let err = |e: Error| e.to_string();
        match s.rule {
            Rule::Backend => {
                let c = s.output.cell().expect("checked");
                let backend: Backend = param_str(s, "backend")?.parse().map_err(err)?;
                let g = parse_group(&c.group).map_err(err)?;
                let m = parse_module(&g, &c.module).map_err(err)?;
                let r = compute(&m, c.degree, backend, budget).map_err(err)?;
                ensure(c.status == Status::exact(r.group.clone()), || format!("recomputed {}", r.group))?;
                Ok(true)
            }
            Rule::Abelianization => {
                let c = s.output.cell().expect("checked");
                let ab = abelianization(&parse_group(&c.group).map_err(err)?).map_err(err)?;
                ensure(c.status == Status::exact(ab.clone()), || format!("recomputed {ab}"))?;
                Ok(true)
            }
            Rule::LesSqueeze | Rule::LesIsomorphism | Rule::LesInjectiveTail => {
                let n = param_usize(s, "n")?;
                let g = alternating_group(n).map_err(err)?;
                match param_str(s, "ses")? {
                    "triv_m_n" => ses_triv_m_n(&g).map(drop),
                    "n_wedge" => ses_n_wedge(&g).map(drop),
                    "k_tensor" => ses_k_tensor(&g).map(drop),
                    "triv_k_nn" => ses_triv_k_nn(&g).map(drop),
                    other => return Err(format!("unknown sequence {other}")),
                }
                .map_err(err)?;
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}
