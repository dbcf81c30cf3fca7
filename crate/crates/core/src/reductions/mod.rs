//! Rule engine for cohomology cells: values and exponent bounds derived by
//! citable rewriting steps, recorded in a re-verifiable certificate.

pub mod engine;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::AbGroup;

pub use engine::{derive_table_cell, Engine, EngineOptions, Table};
pub use verify::{VerifyOptions, VerifyReport};

pub const SCHEMA_VERSION: u32 = 1;

/// What is known about one cohomology group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Exact { value: AbGroup },
    /// The exponent divides this integer.
    Bound { exponent: u64 },
    Unknown,
}

impl Status {
    pub fn exact(value: AbGroup) -> Status {
        Status::Exact { value }
    }

    /// Exponent, or the bound; `None` for unknown or infinite groups.
    pub fn exponent(&self) -> Option<u64> {
        match self {
            Status::Exact { value } => value.exponent(),
            Status::Bound { exponent } => Some(*exponent),
            Status::Unknown => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponent() == Some(1)
    }

    pub fn value(&self) -> Option<&AbGroup> {
        match self {
            Status::Exact { value } => Some(value),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Exact { value } => write!(f, "{value}"),
            Status::Bound { exponent } => write!(f, "exponent | {exponent}"),
            Status::Unknown => write!(f, "?"),
        }
    }
}

/// `H^degree(group, module)` with its status and the rule or backend that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohCell {
    pub group: String,
    pub module: String,
    pub degree: usize,
    pub status: Status,
    pub provenance: String,
}

impl CohCell {
    pub fn same_slot(&self, group: &str, module: &str, degree: usize) -> bool {
        self.group == group && self.module == module && self.degree == degree
    }
}

impl fmt::Display for CohCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{}({}, {}) = {} [{}]", self.degree, self.group, self.module, self.status, self.provenance)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Output {
    Cell(CohCell),
    Fact(Fact),
}

impl Output {
    pub fn cell(&self) -> Option<&CohCell> {
        match self {
            Output::Cell(c) => Some(c),
            Output::Fact(_) => None,
        }
    }

    pub fn fact(&self) -> Option<&Fact> {
        match self {
            Output::Fact(f) => Some(f),
            Output::Cell(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Backend,
    FiniteH1,
    Abelianization,
    PerfectGroup,
    SchurMultiplier,
    Shapiro,
    OrbitDecomposition,
    DirectSum,
    InflationRestriction,
    RestrictionInjectivity,
    LesSqueeze,
    LesIsomorphism,
    LesInjectiveTail,
    OrderBound,
    SylowConsistency,
    CoverBound,
    SpectralBound,
    Gcd,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Backend => "backend",
            Rule::FiniteH1 => "finite_h1",
            Rule::Abelianization => "abelianization",
            Rule::PerfectGroup => "perfect_group",
            Rule::SchurMultiplier => "schur_multiplier",
            Rule::Shapiro => "shapiro",
            Rule::OrbitDecomposition => "orbit_decomposition",
            Rule::DirectSum => "direct_sum",
            Rule::InflationRestriction => "inflation_restriction",
            Rule::RestrictionInjectivity => "restriction_injectivity",
            Rule::LesSqueeze => "les_squeeze",
            Rule::LesIsomorphism => "les_isomorphism",
            Rule::LesInjectiveTail => "les_injective_tail",
            Rule::OrderBound => "order_bound",
            Rule::SylowConsistency => "sylow_consistency",
            Rule::CoverBound => "cover_bound",
            Rule::SpectralBound => "spectral_bound",
            Rule::Gcd => "gcd",
        }
    }

    pub fn cite(self) -> &'static str {
        match self {
            Rule::Backend => "direct computation",
            Rule::FiniteH1 => "H^1 with trivial coefficients",
            Rule::Abelianization | Rule::PerfectGroup => "universal coefficients",
            Rule::SchurMultiplier => "Schur multiplier of alternating groups",
            Rule::Shapiro => "Shapiro's lemma",
            Rule::OrbitDecomposition => "permutation modules split along orbits",
            Rule::DirectSum => "additivity of cohomology",
            Rule::InflationRestriction => "inflation-restriction sequence",
            Rule::RestrictionInjectivity => "Schur's description of H^3(A_n, Z)",
            Rule::LesSqueeze | Rule::LesIsomorphism | Rule::LesInjectiveTail => "long exact cohomology sequence",
            Rule::OrderBound => "restriction-corestriction",
            Rule::SylowConsistency => "restriction to Sylow subgroups",
            Rule::CoverBound => "torsion of a degree-n rational cover",
            Rule::SpectralBound => "Cartan-Leray spectral sequence of the A_n quotient",
            Rule::Gcd => "combination of annihilators",
        }
    }

    pub fn quote(self) -> &'static str {
        match self {
            Rule::Backend => "value computed by a cochain or presentation backend",
            Rule::FiniteH1 => "H^1(G, Z_triv) = Hom(G, Z) = 0 for finite G",
            Rule::Abelianization => "H^2(G, Z_triv) = Ext^1(H_1(G, Z), Z) = Ext^1(G^ab, Z) = G^ab for finite G",
            Rule::PerfectGroup => "A_n is simple for n >= 5, so A_n^ab = 0 and H^2(A_n, Z_triv) = 0",
            Rule::SchurMultiplier => {
                "H^3(A_n, Z_triv) = H_2(A_n, Z): 0 for n <= 3, Z/6 for n = 6, 7, Z/2 otherwise"
            }
            Rule::Shapiro => "H^*(G, Ind_H^G W) = H^*(H, W) for H of finite index",
            Rule::OrbitDecomposition => "Z[X x X] = Z[diagonal] + Z[off-diagonal]; the diagonal is Z[X]",
            Rule::DirectSum => "H^p(G, A + B) = H^p(G, A) + H^p(G, B)",
            Rule::InflationRestriction => "0 -> H^1(H/K, W^K) -> H^1(H, W) -> H^1(K, W)^(H/K) for K normal in H",
            Rule::RestrictionInjectivity => {
                "the restriction H^3(A_n, Z) -> H^3(A_(n-1), Z) is injective for n >= 7; composed with Shapiro it is H^3(A_n, Z) -> H^3(A_n, M)"
            }
            Rule::LesSqueeze => "in an exact segment X -> Y -> Z, exponent(Y) divides exponent(X) * exponent(Z)",
            Rule::LesIsomorphism => "in an exact segment 0 -> X -> Y -> 0, X = Y",
            Rule::LesInjectiveTail => "in an exact segment 0 -> Y -> Z -> W with Z -> W injective, Y = 0",
            Rule::OrderBound => "|G| * H^p(G, W) = 0 for p > 0",
            Rule::SylowConsistency => "the q-primary part of H^p(G, W) injects into H^p(P_q, W)",
            Rule::CoverBound => {
                "H^3(A^[n-1], Z) is torsion-free and a dominant rational map of degree n makes H^3(Kum_(n-1)(A), Z)_tors n-torsion"
            }
            Rule::SpectralBound => {
                "2 N_1 N_2 N_3 annihilates H^3(Kum_(n-1)(A), Z)_tors, N_p the exponent of H^p(A_n, H^(3-p)(K_(n-1)(A), Z))"
            }
            Rule::Gcd => "if a and b both annihilate a group, so does gcd(a, b)",
        }
    }

    /// Steps with no inputs that rest on imported results rather than on
    /// computation.
    pub fn is_axiom(self) -> bool {
        matches!(
            self,
            Rule::SchurMultiplier | Rule::RestrictionInjectivity | Rule::CoverBound | Rule::PerfectGroup
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub id: usize,
    pub rule: Rule,
    pub cite: String,
    pub quote: String,
    pub inputs: Vec<usize>,
    pub output: Output,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
}

/// Steps in dependency order; `conclusion` is the id of the final step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub steps: Vec<Step>,
    pub conclusion: usize,
}

impl Certificate {
    pub fn conclusion_step(&self) -> Option<&Step> {
        self.steps.get(self.conclusion)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        let c: Certificate = serde_json::from_str(s)?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(Error::Verification(format!(
                "certificate schema {} differs from supported {SCHEMA_VERSION}",
                c.schema_version
            )));
        }
        Ok(c)
    }

    /// Provenance of the leaf cells (steps without inputs), deduplicated.
    pub fn leaf_sources(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .steps
            .iter()
            .filter(|s| s.inputs.is_empty())
            .map(|s| s.output.cell().map_or_else(|| s.rule.name().to_string(), |c| c.provenance.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `brute (backends)` when every leaf was computed directly, otherwise
    /// `rules`, followed by any imported axioms.
    pub fn provenance_summary(&self) -> String {
        let leaves = self.leaf_sources();
        let backends: Vec<&str> = leaves.iter().filter_map(|l| l.strip_prefix("backend:")).collect();
        if backends.len() == leaves.len() {
            return format!("brute ({})", backends.join(", "));
        }
        let axioms: Vec<&str> = self.axioms().iter().map(|r| r.name()).collect();
        if axioms.is_empty() {
            "rules".into()
        } else {
            format!("rules + {}", axioms.join(", "))
        }
    }

    /// Axiom rules the certificate depends on.
    pub fn axioms(&self) -> Vec<Rule> {
        let mut out: Vec<Rule> = self.steps.iter().map(|s| s.rule).filter(|r| r.is_axiom()).collect();
        out.sort_by_key(|r| r.name());
        out.dedup();
        out
    }
}

/// Label of `A_n`.
pub fn alt_label(n: usize) -> String {
    format!("A{n}")
}

/// Label of the stabilizer of `{1, 2}` in `A_n`.
pub fn pair_stabilizer_label(n: usize) -> String {
    format!("Stab_A{n}({{1,2}})")
}

pub(crate) fn parse_alt_label(s: &str) -> Option<usize> {
    s.strip_prefix('A')?.parse().ok()
}

/// `H^3(A_n, Z)` as given by the Schur multiplier.
pub fn schur_h3(n: usize) -> AbGroup {
    match n {
        0..=3 => AbGroup::zero(),
        6 | 7 => AbGroup::cyclic(6),
        _ => AbGroup::cyclic(2),
    }
}

/// `|A_n|`, if it fits.
pub fn alternating_order(n: usize) -> Option<u64> {
    if n < 2 {
        return Some(1);
    }
    (3..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Summands of the Kummer coefficient modules `H^q(K_{n-1}(A), Z)`.
pub fn kummer_summands(q: usize) -> Option<Vec<(&'static str, usize)>> {
    match q {
        0 => Some(vec![("triv", 1)]),
        1 => Some(vec![("N", 4)]),
        2 => Some(vec![("wedge2(N)", 4), ("tensor(N,N)", 6)]),
        _ => None,
    }
}

pub fn kummer_label(n: usize, q: usize) -> String {
    format!("kummer({n},{q})")
}

/// Expected decomposition of a module label as a direct sum, if it has one.
pub(crate) fn summands_of(module: &str, group: &str) -> Option<Vec<(String, usize)>> {
    if let Some(inner) = module.strip_prefix("kummer(").and_then(|s| s.strip_suffix(')')) {
        let (n, q) = inner.split_once(',')?;
        let (n, q): (usize, usize) = (n.trim().parse().ok()?, q.trim().parse().ok()?);
        if parse_alt_label(group)? != n {
            return None;
        }
        return Some(kummer_summands(q)?.into_iter().map(|(m, k)| (m.to_string(), k)).collect());
    }
    let inner = module.strip_prefix("dsum(")?.strip_suffix(')')?;
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push((inner[start..i].trim().to_string(), 1));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((inner[start..].trim().to_string(), 1));
    Some(out)
}

/// Status of a direct sum from the statuses of its summands.
pub(crate) fn sum_status(parts: &[(&Status, usize)]) -> Status {
    if parts.iter().all(|(s, _)| matches!(s, Status::Exact { .. })) {
        let value = parts
            .iter()
            .fold(AbGroup::zero(), |acc, (s, k)| acc.direct_sum(&s.value().expect("exact").power(*k)));
        return Status::exact(value);
    }
    let mut e = 1u64;
    for (s, _) in parts {
        match s.exponent() {
            Some(x) => e = num_integer::lcm(e, x),
            None => return Status::Unknown,
        }
    }
    Status::Bound { exponent: e }
}

/// Module labels of the short exact sequences used by the LES rules:
/// `(sub, middle, quotient)`.
pub fn ses_terms(name: &str) -> Option<[&'static str; 3]> {
    match name {
        "triv_m_n" => Some(["triv", "M", "N"]),
        "n_wedge" => Some(["N", "wedge2(M)", "wedge2(N)"]),
        "k_tensor" => Some(["K", "tensor(M,M)", "tensor(N,N)"]),
        "triv_k_nn" => Some(["triv", "K", "dsum(N,N)"]),
        _ => None,
    }
}

/// Module and degree at position `t` of the long exact sequence of `ses`,
/// ordered `H^0(sub), H^0(mid), H^0(quot), H^1(sub), …`.
pub fn les_term(ses: &str, t: usize) -> Option<(&'static str, usize)> {
    Some((ses_terms(ses)?[t % 3], t / 3))
}
