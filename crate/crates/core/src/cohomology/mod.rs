//! `H^p(G, M)` by the normalized bar complex, by crossed homomorphisms on a
//! presentation, and with trivial coefficients through homology; plus a
//! Sylow-restriction bound on exponents.

pub mod bar;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmodule::{restrict, trivial_module, GModule, Mat};
use crate::linalg::{
    cokernel_invariants_with, smith_normal_form_with, subquotient_detailed, AbGroup, RankMethod,
    SnfConfig, SparseIntMatrix,
};
use crate::perm::{prime_divisors, PermGroup};
pub use bar::BarContext;

/// Explicit size limits; computations beyond them refuse rather than approximate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Budget {
    /// Largest row count of a differential that may be built.
    pub max_rows: usize,
    /// Largest estimated nonzero count of a differential that may be built.
    pub max_nnz: usize,
    #[serde(skip)]
    pub snf: SnfConfig,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rows: 2_000_000, max_nnz: 25_000_000, snf: SnfConfig::default() }
    }
}

impl Budget {
    fn admits(&self, ctx: &BarContext, p: usize) -> bool {
        match (ctx.cochain_dim(p + 1), ctx.nnz_estimate(p)) {
            (Some(rows), Some(nnz)) => rows <= self.max_rows && nnz <= self.max_nnz,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Bar,
    Pres,
    Uct,
    Auto,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "bar" => Ok(Backend::Bar),
            "pres" => Ok(Backend::Pres),
            "uct" => Ok(Backend::Uct),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::invalid(format!("unknown backend {s:?}; expected bar, pres, uct or auto"))),
        }
    }
}

/// How the free rank of a result was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeRankMethod {
    /// Rank of the outgoing differential, certified modularly or exactly.
    Computed(RankMethod),
    /// `H^p(G, M) ⊗ Q = 0` for finite `G` and `p > 0`; the outgoing
    /// differential was beyond budget.
    RationalVanishing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub group: AbGroup,
    pub backend: Backend,
    pub free_rank_method: FreeRankMethod,
    /// `(rows, cols, nnz)` of each matrix reduced.
    pub matrices: Vec<(usize, usize, usize)>,
    pub seconds: f64,
}

fn fixed_points(m: &GModule, cfg: &SnfConfig) -> Result<AbGroup> {
    let r = m.rank();
    let blocks: Vec<Mat> = m.generator_matrices().iter().map(|a| a.sub(&Mat::identity(r))).collect();
    if blocks.is_empty() {
        return Ok(AbGroup::free(r));
    }
    let stacked = Mat::vstack(&blocks).to_sparse();
    let rank = smith_normal_form_with(&stacked, false, cfg)?.rank;
    Ok(AbGroup::free(r - rank))
}

fn shape(a: &SparseIntMatrix) -> (usize, usize, usize) {
    (a.rows(), a.cols(), a.nnz())
}

/// `H^p(G, M)` from the normalized bar complex, `p ≤ 3`. `H^0` is the
/// fixed-point lattice. For `p > 0` the torsion is that of `coker d_{p-1}`
/// and the free rank comes from `rank d_p` when `d_p` fits the budget.
pub fn h_bar_detailed(m: &GModule, p: usize, budget: &Budget) -> Result<CohomologyResult> {
    let start = Instant::now();
    if p > 3 {
        return Err(Error::invalid(format!("degree {p} above 3")));
    }
    if p == 0 {
        let group = fixed_points(m, &budget.snf)?;
        return Ok(CohomologyResult {
            group,
            backend: Backend::Bar,
            free_rank_method: FreeRankMethod::Computed(RankMethod::Exact),
            matrices: Vec::new(),
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    let g = m.group();
    if g.order() > crate::perm::DEFAULT_ENUMERATION_CAP {
        return Err(Error::Infeasible(format!("{} has order {} beyond the bar backend", g.name(), g.order())));
    }
    let ctx = BarContext::new(m)?;
    if !budget.admits(&ctx, p - 1) {
        return Err(Error::Infeasible(format!(
            "bar complex of {} with {} in degree {p} exceeds budget (rows {:?})",
            g.name(),
            m.label(),
            ctx.cochain_dim(p)
        )));
    }
    let d_prev = ctx.coboundary(p - 1)?;
    let mut matrices = vec![shape(&d_prev)];
    if p >= 2 {
        let d_pp = ctx.coboundary(p - 2)?;
        if !d_prev.matmul(&d_pp)?.is_zero() {
            return Err(Error::BrokenDifferential(format!("d_{} d_{} != 0", p - 1, p - 2)));
        }
    }
    let dim = ctx.cochain_dim(p).expect("admitted");
    let (group, method) = if budget.admits(&ctx, p) {
        let d_p = ctx.coboundary(p)?;
        matrices.push(shape(&d_p));
        let sq = subquotient_detailed(&d_p, &d_prev, &budget.snf)?;
        (sq.group, FreeRankMethod::Computed(sq.rank_method))
    } else {
        let coker = cokernel_invariants_with(&d_prev, dim, &budget.snf)?;
        (AbGroup::new(0, coker.torsion().to_vec())?, FreeRankMethod::RationalVanishing)
    };
    Ok(CohomologyResult {
        group,
        backend: Backend::Bar,
        free_rank_method: method,
        matrices,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn h_bar(m: &GModule, p: usize) -> Result<AbGroup> {
    Ok(h_bar_detailed(m, p, &Budget::default())?.group)
}

/// Relator matrix for crossed homomorphisms: unknowns `f(s_1), …, f(s_k)`,
/// one block row per relator from its Fox expansion.
pub fn cocycle_matrix(m: &GModule) -> Result<SparseIntMatrix> {
    let pres = m.group().presentation()?;
    let (k, r) = (pres.num_generators(), m.rank());
    let fox = pres.fox_expansions();
    let mut trip = Vec::new();
    for (ri, terms) in fox.iter().enumerate() {
        let mut blocks: Vec<Mat> = vec![Mat::zeros(r, r); k];
        for t in terms {
            let a = m.act(&t.element);
            let b = &mut blocks[t.generator];
            for (i, j, v) in a.nonzeros() {
                b.set(i, j, b.get(i, j) + t.sign as i64 * v);
            }
        }
        for (s, b) in blocks.iter().enumerate() {
            trip.extend(b.nonzeros().map(|(i, j, v)| (ri * r + i, s * r + j, crate::linalg::Int::from(v))));
        }
    }
    SparseIntMatrix::from_triplets(fox.len() * r, k * r, trip)
}

/// `H^1(G, M)` as crossed homomorphisms modulo principal ones.
pub fn h1_presentation_detailed(m: &GModule, budget: &Budget) -> Result<CohomologyResult> {
    let start = Instant::now();
    let z = cocycle_matrix(m)?;
    let r = m.rank();
    let blocks: Vec<Mat> = m.generator_matrices().iter().map(|a| a.sub(&Mat::identity(r))).collect();
    let b = if blocks.is_empty() { SparseIntMatrix::zeros(0, r) } else { Mat::vstack(&blocks).to_sparse() };
    let sq = subquotient_detailed(&z, &b, &budget.snf)?;
    Ok(CohomologyResult {
        group: sq.group,
        backend: Backend::Pres,
        free_rank_method: FreeRankMethod::Computed(sq.rank_method),
        matrices: vec![shape(&z), shape(&b)],
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn h1_presentation(m: &GModule) -> Result<AbGroup> {
    Ok(h1_presentation_detailed(m, &Budget::default())?.group)
}

/// `H^p(G, Z) ≅ Ext^1(H_{p-1}(G, Z), Z) ≅ tors H_{p-1}(G, Z)` for `p ∈ {2, 3}`.
/// The torsion of `H_{p-1}` is that of `coker ∂_p`, where `∂_p` on
/// normalized bar chains with trivial coefficients is the transpose of the
/// cochain differential `d_{p-1}`.
pub fn h_trivial_via_uct_detailed(g: &PermGroup, p: usize, budget: &Budget) -> Result<CohomologyResult> {
    let start = Instant::now();
    if !(2..=3).contains(&p) {
        return Err(Error::invalid(format!("trivial-coefficient route covers p = 2, 3, got {p}")));
    }
    if g.order() > crate::perm::DEFAULT_ENUMERATION_CAP {
        return Err(Error::Infeasible(format!("{} has order {} beyond the bar backend", g.name(), g.order())));
    }
    let ctx = BarContext::new(&trivial_module(g))?;
    if !budget.admits(&ctx, p - 1) {
        return Err(Error::Infeasible(format!(
            "bar chains of {} in degree {p} exceed budget (columns {:?})",
            g.name(),
            ctx.cochain_dim(p)
        )));
    }
    let boundary = ctx.coboundary(p - 1)?.transpose();
    let homology = cokernel_invariants_with(&boundary, boundary.rows(), &budget.snf)?;
    Ok(CohomologyResult {
        group: AbGroup::new(0, homology.torsion().to_vec())?,
        backend: Backend::Uct,
        free_rank_method: FreeRankMethod::RationalVanishing,
        matrices: vec![shape(&boundary)],
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn h_trivial_via_uct(g: &PermGroup, p: usize) -> Result<AbGroup> {
    Ok(h_trivial_via_uct_detailed(g, p, &Budget::default())?.group)
}

/// `G^{ab}` as the cokernel of the exponent-sum matrix of the relators.
pub fn abelianization(g: &PermGroup) -> Result<AbGroup> {
    let pres = g.presentation()?;
    let k = pres.num_generators();
    let mut trip = Vec::new();
    for (j, rel) in pres.relators().iter().enumerate() {
        let mut sums = vec![0i64; k];
        for &l in rel {
            sums[crate::perm::presentation::letter_generator(l)] += l.signum() as i64;
        }
        trip.extend(sums.into_iter().enumerate().filter(|(_, v)| *v != 0).map(|(i, v)| (i, j, crate::linalg::Int::from(v))));
    }
    let a = SparseIntMatrix::from_triplets(k, pres.relators().len(), trip)?;
    crate::linalg::cokernel_invariants(&a, k)
}

/// Chooses a backend: fixed points for `p = 0`, the presentation for
/// `p = 1`, the bar complex otherwise.
pub fn compute(m: &GModule, p: usize, backend: Backend, budget: &Budget) -> Result<CohomologyResult> {
    match backend {
        Backend::Bar => h_bar_detailed(m, p, budget),
        Backend::Pres if p == 1 => h1_presentation_detailed(m, budget),
        Backend::Pres => Err(Error::invalid("presentation backend computes H^1 only")),
        Backend::Uct => {
            if m.rank() != 1 || !m.generator_matrices().iter().all(Mat::is_identity) {
                return Err(Error::invalid("UCT backend needs trivial coefficients"));
            }
            h_trivial_via_uct_detailed(m.group(), p, budget)
        }
        Backend::Auto if p == 1 => match h1_presentation_detailed(m, budget) {
            Err(e) if e.is_budget() => h_bar_detailed(m, p, budget),
            other => other,
        },
        Backend::Auto => h_bar_detailed(m, p, budget),
    }
}

/// Per-prime contribution to a Sylow bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SylowFactor {
    pub prime: u64,
    /// `q`-part of the bound.
    pub factor: u64,
    /// Computed `H^p(P, M)` when it was within budget.
    pub sylow_value: Option<AbGroup>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SylowBound {
    pub bound: u64,
    pub factors: Vec<SylowFactor>,
}

fn prime_part(x: u64, q: u64) -> u64 {
    let mut out = 1;
    let mut x = x;
    while x.is_multiple_of(q) {
        x /= q;
        out *= q;
    }
    out
}

/// `E` with `exponent(H^p(G, M)) | E`: restriction to a Sylow `q`-subgroup
/// is injective on the `q`-primary part, so `E` is the product over `q` of
/// the `q`-part of `exponent(H^p(P_q, M))`. A prime whose Sylow computation is
/// beyond budget contributes the full `q`-part of `|G|`.
pub fn sylow_exponent_bound(m: &GModule, p: usize, budget: &Budget) -> Result<SylowBound> {
    if p == 0 {
        return Err(Error::invalid("Sylow bound applies to p > 0"));
    }
    let g = m.group();
    let mut factors = Vec::new();
    for q in prime_divisors(g.order()) {
        let full = prime_part(g.order(), q);
        let attempt = g.sylow_subgroup(q).and_then(|s| {
            let res = restrict(m, &s)?;
            compute(&res, p, Backend::Auto, budget)
        });
        let f = match attempt {
            Ok(r) => {
                let e = r.group.exponent().ok_or_else(|| Error::Verification("free part in positive degree".into()))?;
                SylowFactor { prime: q, factor: prime_part(e, q), sylow_value: Some(r.group) }
            }
            Err(e) if e.is_budget() => SylowFactor { prime: q, factor: full, sylow_value: None },
            Err(e) => return Err(e),
        };
        factors.push(f);
    }
    Ok(SylowBound { bound: factors.iter().map(|f| f.factor).product(), factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::{module_n, sign_module, wedge2, natural_module, SignKind};
    use crate::perm::{alternating_group, cyclic_group, symmetric_group};

    #[test]
    fn cyclic_three_degree_two() {
        let c3 = cyclic_group(3).unwrap();
        let z = trivial_module(&c3);
        assert_eq!(h_bar(&z, 2).unwrap(), AbGroup::cyclic(3));
        assert_eq!(h_bar(&z, 1).unwrap(), AbGroup::zero());
        assert_eq!(h_bar(&z, 0).unwrap(), AbGroup::free(1));
    }

    #[test]
    fn sign_module_of_order_two() {
        let s2 = symmetric_group(2).unwrap();
        let m = sign_module(&s2, SignKind::Parity).unwrap();
        assert_eq!(h_bar(&m, 1).unwrap(), AbGroup::cyclic(2));
        assert_eq!(h1_presentation(&m).unwrap(), AbGroup::cyclic(2));
    }

    #[test]
    fn small_alternating_trivial() {
        let a4 = alternating_group(4).unwrap();
        assert_eq!(h_bar(&trivial_module(&a4), 3).unwrap(), AbGroup::cyclic(2));
        assert_eq!(h_trivial_via_uct(&a4, 2).unwrap(), AbGroup::cyclic(3));
        assert_eq!(abelianization(&a4).unwrap(), AbGroup::cyclic(3));
        let a5 = alternating_group(5).unwrap();
        assert_eq!(h_bar(&trivial_module(&a5), 1).unwrap(), AbGroup::zero());
    }

    #[test]
    fn backends_agree_on_wedge() {
        let a4 = alternating_group(4).unwrap();
        let m = wedge2(&natural_module(&a4));
        assert_eq!(h1_presentation(&m).unwrap(), h_bar(&m, 1).unwrap());
        assert_eq!(h1_presentation(&m).unwrap(), AbGroup::cyclic(2));
        let n = module_n(&a4).unwrap();
        assert_eq!(h1_presentation(&n).unwrap(), h_bar(&n, 1).unwrap());
    }

    #[test]
    fn budget_refusal_is_structured() {
        let a5 = alternating_group(5).unwrap();
        let tiny = Budget { max_rows: 10, max_nnz: 10, snf: SnfConfig::default() };
        let e = h_bar_detailed(&trivial_module(&a5), 2, &tiny).unwrap_err();
        assert!(matches!(e, Error::Infeasible(_)));
    }

    #[test]
    fn sylow_bound_contains_exponent() {
        let a4 = alternating_group(4).unwrap();
        let n = module_n(&a4).unwrap();
        let truth = h_bar(&n, 2).unwrap().exponent().unwrap();
        let b = sylow_exponent_bound(&n, 2, &Budget::default()).unwrap();
        assert_eq!(b.bound % truth, 0);
    }
}
