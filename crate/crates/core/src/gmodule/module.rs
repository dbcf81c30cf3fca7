use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gmodule::Mat;
use crate::linalg::{left_inverse, SparseIntMatrix};
use crate::perm::{alternating_group, GSet, GSetKind, GroupKind, PermGroup, Permutation};

/// How a rank-one sign module reads off the sign of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignKind {
    /// Sign of the permutation.
    Parity,
    /// `-1` exactly when the element swaps the two points (which it must
    /// preserve as a set).
    PairSwap(u8, u8),
}

/// Coset representatives of `H` in `G` and a way to locate `g·g_y`.
pub(crate) struct Cosets {
    pub(crate) reps: Vec<Permutation>,
    locate: Locator,
}

enum Locator {
    /// `H` is the stabilizer of `base` in the derived set; cosets are the orbit.
    Orbit { set: GSet, base: usize, pos: HashMap<usize, usize> },
    /// Every element of `G` mapped to its coset.
    Table(HashMap<Permutation, usize>),
}

impl Cosets {
    fn locate(&self, g: &Permutation) -> usize {
        match &self.locate {
            Locator::Orbit { set, base, pos } => pos[&set.act(g, *base)],
            Locator::Table(t) => t[g],
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.reps.len()
    }
}

pub(crate) enum Expr {
    Triv,
    Sign(SignKind),
    Perm(GSet),
    N,
    Dsum(Vec<GModule>),
    Tensor(GModule, GModule),
    Wedge2(GModule),
    Induce { sub: PermGroup, w: GModule, cosets: Arc<Cosets> },
    Restrict(GModule),
    /// Invariant saturated sublattice spanned by the columns of `basis`.
    Sub { ambient: GModule, basis: Mat, left_inv: Mat },
}

struct ModData {
    group: PermGroup,
    rank: usize,
    label: String,
    expr: Expr,
    gens: OnceLock<Vec<Mat>>,
}

/// A finitely generated free `Z[G]`-module built from a constructor
/// expression. Any group element's action is available through [`GModule::act`].
#[derive(Clone)]
pub struct GModule(Arc<ModData>);

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {} (rank {})", self.label(), self.group().name(), self.rank())
    }
}

impl fmt::Display for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Label equality over the same group.
impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.label() == other.label() && self.group() == other.group()
    }
}

impl GModule {
    fn build(group: &PermGroup, rank: usize, label: String, expr: Expr) -> GModule {
        GModule(Arc::new(ModData { group: group.clone(), rank, label, expr, gens: OnceLock::new() }))
    }

    pub fn group(&self) -> &PermGroup {
        &self.0.group
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Same module under a new label.
    pub fn relabel(&self, label: impl Into<String>) -> GModule {
        let expr = Expr::Dsum(vec![self.clone()]);
        GModule::build(self.group(), self.rank(), label.into(), expr)
    }

    /// Direct summands when built as a direct sum.
    pub fn summands(&self) -> Option<&[GModule]> {
        match &self.0.expr {
            Expr::Dsum(parts) if parts.len() > 1 => Some(parts),
            Expr::Dsum(parts) => parts[0].summands(),
            _ => None,
        }
    }

    /// `(H, W)` when built as `ind(H, W)`.
    pub fn as_induced(&self) -> Option<(&PermGroup, &GModule)> {
        match &self.0.expr {
            Expr::Induce { sub, w, .. } => Some((sub, w)),
            Expr::Dsum(parts) if parts.len() == 1 => parts[0].as_induced(),
            _ => None,
        }
    }

    /// Coset representatives `g_y` when induced, in basis-block order.
    pub fn induction_representatives(&self) -> Option<&[Permutation]> {
        match &self.0.expr {
            Expr::Induce { cosets, .. } => Some(&cosets.reps),
            Expr::Dsum(parts) if parts.len() == 1 => parts[0].induction_representatives(),
            _ => None,
        }
    }

    /// Action matrix of `g`, acting on column vectors.
    pub fn act(&self, g: &Permutation) -> Mat {
        let r = self.rank();
        match &self.0.expr {
            Expr::Triv => Mat::identity(1),
            Expr::Sign(SignKind::Parity) => Mat::scalar(1, if g.is_even() { 1 } else { -1 }),
            Expr::Sign(SignKind::PairSwap(a, _)) => {
                Mat::scalar(1, if g.apply(*a as usize) == *a as usize { 1 } else { -1 })
            }
            Expr::Perm(set) => {
                let mut m = Mat::zeros(r, r);
                for x in 0..r {
                    m.set(set.act(g, x), x, 1);
                }
                m
            }
            Expr::N => {
                let mut m = Mat::zeros(r, r);
                for i in 0..r {
                    let j = g.apply(i);
                    if j < r {
                        m.set(j, i, 1);
                    } else {
                        for k in 0..r {
                            m.set(k, i, -1);
                        }
                    }
                }
                m
            }
            Expr::Dsum(parts) => Mat::block_diag(&parts.iter().map(|p| p.act(g)).collect::<Vec<_>>()),
            Expr::Tensor(a, b) => a.act(g).kron(&b.act(g)),
            Expr::Wedge2(a) => wedge2_matrix(&a.act(g)),
            Expr::Induce { w, cosets, .. } => {
                let k = w.rank();
                let mut m = Mat::zeros(r, r);
                for (y, rep) in cosets.reps.iter().enumerate() {
                    let moved = g.mul(rep);
                    let z = cosets.locate(&moved);
                    let h = cosets.reps[z].inverse().mul(&moved);
                    m.set_block(z * k, y * k, &w.act(&h));
                }
                m
            }
            Expr::Restrict(m) => m.act(g),
            Expr::Sub { ambient, basis, left_inv } => left_inv.mul(&ambient.act(g).mul(basis)),
        }
    }

    /// Action matrices of the group's generators.
    pub fn generator_matrices(&self) -> &[Mat] {
        self.0.gens.get_or_init(|| self.group().generators().iter().map(|g| self.act(g)).collect())
    }

    /// Checks invertibility over `Z` of every generator matrix and that the
    /// matrices satisfy the relators of the group's presentation.
    pub fn verify(&self) -> Result<()> {
        let r = self.rank();
        for (g, a) in self.group().generators().iter().zip(self.generator_matrices()) {
            if a.rows() != r || a.cols() != r {
                return Err(Error::Verification(format!("{}: action matrix has wrong shape", self.label())));
            }
            if !a.mul(&self.act(&g.inverse())).is_identity() {
                return Err(Error::Verification(format!("{}: action of {g} is not invertible over Z", self.label())));
            }
        }
        match self.group().presentation() {
            Ok(p) => {
                let mats = self.generator_matrices();
                let inv: Vec<Mat> = self.group().generators().iter().map(|g| self.act(&g.inverse())).collect();
                for (i, rel) in p.relators().iter().enumerate() {
                    let mut acc = Mat::identity(r);
                    for &l in rel {
                        let k = crate::perm::presentation::letter_generator(l);
                        acc = acc.mul(if l > 0 { &mats[k] } else { &inv[k] });
                    }
                    if !acc.is_identity() {
                        return Err(Error::Verification(format!("{}: relator {i} acts nontrivially", self.label())));
                    }
                }
                Ok(())
            }
            Err(e) if e.is_budget() => {
                // no presentation within budget: check multiplicativity on generator pairs
                for g in self.group().generators() {
                    for h in self.group().generators() {
                        if self.act(&g.mul(h)) != self.act(g).mul(&self.act(h)) {
                            return Err(Error::Verification(format!("{}: action is not multiplicative", self.label())));
                        }
                    }
                }
                Ok(())
            }
            Err(e) => Err(e),
        }
    }
}

/// `(A∧A)_{(ij),(kl)} = A_ik A_jl - A_il A_jk` on the basis `e_i∧e_j`, `i < j`.
pub fn wedge2_matrix(a: &Mat) -> Mat {
    let n = a.rows();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut m = Mat::zeros(pairs.len(), pairs.len());
    for (row, &(i, j)) in pairs.iter().enumerate() {
        for (col, &(k, l)) in pairs.iter().enumerate() {
            let v = a.get(i, k) * a.get(j, l) - a.get(i, l) * a.get(j, k);
            if v != 0 {
                m.set(row, col, v);
            }
        }
    }
    m
}

/// Index of `e_i∧e_j` (`i < j`) among pairs of `0..n` in lex order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn same_group(parts: &[&GModule]) -> Result<()> {
    if let Some(first) = parts.first() {
        if let Some(other) = parts.iter().find(|p| p.group() != first.group()) {
            return Err(Error::invalid(format!(
                "group mismatch: {} is over {}, {} over {}",
                first.label(),
                first.group().name(),
                other.label(),
                other.group().name()
            )));
        }
    }
    Ok(())
}

pub fn trivial_module(g: &PermGroup) -> GModule {
    GModule::build(g, 1, "triv".into(), Expr::Triv)
}

pub fn sign_module(h: &PermGroup, kind: SignKind) -> Result<GModule> {
    let label = match kind {
        SignKind::Parity => "sign".to_string(),
        SignKind::PairSwap(a, b) => {
            let (a, b) = (a.min(b), a.max(b));
            if a == b || b as usize >= h.degree() {
                return Err(Error::invalid(format!("bad pair {{{},{}}}", a + 1, b + 1)));
            }
            let set = GSet::new(GSetKind::UnorderedPairs, h.degree());
            let x = set.index_of(&[a, b])?;
            if let Some(g) = h.generators().iter().find(|g| set.act(g, x) != x) {
                return Err(Error::invalid(format!("{g} does not preserve {{{},{}}}; no sign map", a + 1, b + 1)));
            }
            format!("sign({{{},{}}})", a + 1, b + 1)
        }
    };
    let kind = match kind {
        SignKind::PairSwap(a, b) => SignKind::PairSwap(a.min(b), a.max(b)),
        k => k,
    };
    let m = GModule::build(h, 1, label, Expr::Sign(kind));
    m.verify()?;
    Ok(m)
}

/// `Z[X]` for a derived set `X` of the group's points.
pub fn permutation_module(g: &PermGroup, kind: GSetKind) -> GModule {
    let set = GSet::new(kind, g.degree());
    let label = if kind == GSetKind::Points { "M".to_string() } else { format!("perm({})", kind.name()) };
    GModule::build(g, set.len(), label, Expr::Perm(set))
}

/// `M = Z^n` with the permutation action.
pub fn natural_module(g: &PermGroup) -> GModule {
    permutation_module(g, GSetKind::Points)
}

/// `N = M / Z·(e_1 + … + e_n)` on the basis `f_i = [e_i]`, `i < n`; the last
/// basis vector maps to `-(f_1 + … + f_{n-1})`.
pub fn module_n(g: &PermGroup) -> Result<GModule> {
    if g.degree() < 2 {
        return Err(Error::invalid("N needs at least two points"));
    }
    Ok(GModule::build(g, g.degree() - 1, "N".into(), Expr::N))
}

pub fn dsum(parts: &[GModule]) -> Result<GModule> {
    let label = format!("dsum({})", parts.iter().map(GModule::label).collect::<Vec<_>>().join(","));
    dsum_labeled(parts, label)
}

pub fn dsum_labeled(parts: &[GModule], label: impl Into<String>) -> Result<GModule> {
    if parts.is_empty() {
        return Err(Error::invalid("empty direct sum"));
    }
    same_group(&parts.iter().collect::<Vec<_>>())?;
    let rank = parts.iter().map(GModule::rank).sum();
    Ok(GModule::build(parts[0].group(), rank, label.into(), Expr::Dsum(parts.to_vec())))
}

pub fn tensor(a: &GModule, b: &GModule) -> Result<GModule> {
    same_group(&[a, b])?;
    let label = format!("tensor({},{})", a.label(), b.label());
    Ok(GModule::build(a.group(), a.rank() * b.rank(), label, Expr::Tensor(a.clone(), b.clone())))
}

pub fn wedge2(a: &GModule) -> GModule {
    let r = a.rank();
    GModule::build(a.group(), r * r.saturating_sub(1) / 2, format!("wedge2({})", a.label()), Expr::Wedge2(a.clone()))
}

pub fn restrict(m: &GModule, h: &PermGroup) -> Result<GModule> {
    if !h.is_subgroup_of(m.group()) {
        return Err(Error::invalid(format!("{} is not a subgroup of {}", h.name(), m.group().name())));
    }
    let label = format!("res({},{})", h.name(), m.label());
    Ok(GModule::build(h, m.rank(), label, Expr::Restrict(m.clone())))
}

/// The derived set and base point when `h` is recognizably a point
/// stabilizer in `g`.
fn as_stabilizer(g: &PermGroup, h: &PermGroup) -> Option<(GSet, usize)> {
    match h.kind() {
        GroupKind::Stabilizer { parent, set, point } if parent == g => {
            let s = GSet::new(*set, g.degree());
            let x = s.index_of(point).ok()?;
            Some((s, x))
        }
        GroupKind::Alternating { support } if g.is_full_alternating() && support.len() + 1 == g.degree() => {
            let missing = (0..g.degree() as u8).find(|p| !support.contains(p))?;
            Some((GSet::new(GSetKind::Points, g.degree()), missing as usize))
        }
        GroupKind::Symmetric { support } if g.is_full_symmetric() && support.len() + 1 == g.degree() => {
            let missing = (0..g.degree() as u8).find(|p| !support.contains(p))?;
            Some((GSet::new(GSetKind::Points, g.degree()), missing as usize))
        }
        _ => None,
    }
}

fn cosets(g: &PermGroup, h: &PermGroup) -> Result<Cosets> {
    if let Some((set, base)) = as_stabilizer(g, h) {
        let tr = g.transversal(&set, base)?;
        let pos = tr.iter().enumerate().map(|(k, (y, _))| (*y, k)).collect();
        let reps = tr.into_iter().map(|(_, r)| r).collect();
        return Ok(Cosets { reps, locate: Locator::Orbit { set, base, pos } });
    }
    let ge = g.enumerate()?;
    let he = h.enumerate()?;
    let mut owner: HashMap<Permutation, usize> = HashMap::with_capacity(ge.len());
    let mut raw: Vec<Vec<Permutation>> = Vec::new();
    for x in &ge.elements {
        if owner.contains_key(x) {
            continue;
        }
        let coset: Vec<Permutation> = he.elements.iter().map(|k| x.mul(k)).collect();
        for y in &coset {
            owner.insert(y.clone(), raw.len());
        }
        raw.push(coset);
    }
    let mut order: Vec<(Permutation, usize)> =
        raw.iter().enumerate().map(|(i, c)| (c.iter().min().expect("nonempty").clone(), i)).collect();
    order.sort();
    let mut renumber = vec![0; raw.len()];
    for (new, (_, old)) in order.iter().enumerate() {
        renumber[*old] = new;
    }
    let table = owner.into_iter().map(|(k, v)| (k, renumber[v])).collect();
    Ok(Cosets { reps: order.into_iter().map(|(r, _)| r).collect(), locate: Locator::Table(table) })
}

/// `Ind_H^G W = ⊕_y g_y ⊗ W` with `g·(g_y ⊗ w) = g_{gy} ⊗ (g_{gy}^{-1} g g_y)·w`,
/// representatives chosen lexicographically smallest.
pub fn induce(g: &PermGroup, w: &GModule) -> Result<GModule> {
    let h = w.group();
    if !h.is_subgroup_of(g) {
        return Err(Error::invalid(format!("{} is not a subgroup of {}", h.name(), g.name())));
    }
    let c = cosets(g, h)?;
    if c.len() as u64 * h.order() != g.order() {
        return Err(Error::Verification(format!("found {} cosets of {} in {}", c.len(), h.name(), g.name())));
    }
    let label = format!("ind({},{})", h.name(), w.label());
    let rank = c.len() * w.rank();
    Ok(GModule::build(g, rank, label, Expr::Induce { sub: h.clone(), w: w.clone(), cosets: Arc::new(c) }))
}

/// The sublattice of `ambient` spanned by the columns of `basis`, which must be
/// saturated and invariant.
pub fn submodule(ambient: &GModule, basis: Mat, label: impl Into<String>) -> Result<GModule> {
    if basis.rows() != ambient.rank() {
        return Err(Error::invalid("submodule basis has wrong length"));
    }
    let left = left_inverse(&basis.to_sparse())?
        .ok_or_else(|| Error::invalid("submodule basis is not a saturated independent set"))?;
    let left_inv = sparse_to_mat(&left)?;
    for a in ambient.generator_matrices() {
        let image = a.mul(&basis);
        if basis.mul(&left_inv.mul(&image)) != image {
            return Err(Error::invalid("span of the basis is not invariant"));
        }
    }
    let rank = basis.cols();
    Ok(GModule::build(ambient.group(), rank, label.into(), Expr::Sub { ambient: ambient.clone(), basis, left_inv }))
}

pub(crate) fn sparse_to_mat(a: &SparseIntMatrix) -> Result<Mat> {
    let mut m = Mat::zeros(a.rows(), a.cols());
    for (i, j, v) in a.entries() {
        m.set(i, j, v.to_i64().ok_or_else(|| Error::ResourceLimit("entry exceeds i64".into()))?);
    }
    Ok(m)
}

/// One orbit of a derived set with its base point, stabilizer and
/// deterministic transversal.
#[derive(Clone, Debug)]
pub struct OrbitPiece {
    pub base: usize,
    /// Orbit elements as set indices, ascending.
    pub orbit: Vec<usize>,
    pub stabilizer: PermGroup,
    /// `(y, g_y)` with `g_y · base = y`, in orbit order.
    pub transversal: Vec<(usize, Permutation)>,
}

/// Splits a derived set into orbits, each based at its smallest index.
pub fn orbit_decompose(g: &PermGroup, kind: GSetKind) -> Result<Vec<OrbitPiece>> {
    let set = GSet::new(kind, g.degree());
    let mut seen = vec![false; set.len()];
    let mut out = Vec::new();
    for x in 0..set.len() {
        if seen[x] {
            continue;
        }
        let mut orbit = g.orbit(&set, x);
        orbit.sort_unstable();
        for &y in &orbit {
            seen[y] = true;
        }
        let stabilizer = g.stabilizer(&set, x)?;
        let transversal = g.transversal(&set, x)?;
        out.push(OrbitPiece { base: x, orbit, stabilizer, transversal });
    }
    Ok(out)
}

/// `H^q(K_{n-1}(A), Z)` as an `A_n`-module: `triv`, `N^4`, or
/// `(∧²N)^4 ⊕ (N⊗N)^6`.
pub fn kummer_module(n: usize, q: usize) -> Result<GModule> {
    if n < 3 {
        return Err(Error::invalid(format!("kummer module needs n >= 3, got {n}")));
    }
    let g = alternating_group(n)?;
    kummer_module_over(&g, q)
}

pub fn kummer_module_over(g: &PermGroup, q: usize) -> Result<GModule> {
    let label = format!("kummer({},{q})", g.degree());
    match q {
        0 => Ok(trivial_module(g).relabel(label)),
        1 => {
            let n = module_n(g)?;
            dsum_labeled(&vec![n; 4], label)
        }
        2 => {
            let n = module_n(g)?;
            let w = wedge2(&n);
            let t = tensor(&n, &n)?;
            let mut parts = vec![w; 4];
            parts.extend(std::iter::repeat_n(t, 6));
            dsum_labeled(&parts, label)
        }
        _ => Err(Error::invalid(format!("kummer module degree q = {q} out of range 0..=2"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::cyclic_group;

    #[test]
    fn ranks() {
        let a4 = alternating_group(4).unwrap();
        let a5 = alternating_group(5).unwrap();
        assert_eq!(wedge2(&natural_module(&a4)).rank(), 6);
        let n5 = module_n(&a5).unwrap();
        assert_eq!(tensor(&n5, &n5).unwrap().rank(), 16);
        assert_eq!(kummer_module(5, 1).unwrap().rank(), 16);
        assert_eq!(kummer_module(4, 2).unwrap().rank(), 66);
        assert_eq!(kummer_module(4, 0).unwrap().rank(), 1);
        assert!(kummer_module(4, 3).is_err());
        assert_eq!(permutation_module(&a4, GSetKind::OrderedPairs).rank(), 12);
    }

    #[test]
    fn constructors_verify() {
        let a5 = alternating_group(5).unwrap();
        let n = module_n(&a5).unwrap();
        for m in [
            trivial_module(&a5),
            natural_module(&a5),
            n.clone(),
            wedge2(&n),
            tensor(&n, &natural_module(&a5)).unwrap(),
            kummer_module(5, 2).unwrap(),
        ] {
            m.verify().unwrap();
        }
    }

    #[test]
    fn action_is_multiplicative() {
        let a5 = alternating_group(5).unwrap();
        let m = wedge2(&module_n(&a5).unwrap());
        let e = a5.enumerate().unwrap();
        for g in e.elements.iter().step_by(7) {
            for h in e.elements.iter().step_by(11) {
                assert_eq!(m.act(&g.mul(h)), m.act(g).mul(&m.act(h)));
            }
        }
    }

    #[test]
    fn sign_modules() {
        let s2 = crate::perm::symmetric_group(2).unwrap();
        let z = sign_module(&s2, SignKind::Parity).unwrap();
        assert_eq!(z.generator_matrices()[0], Mat::scalar(1, -1));
        let a5 = alternating_group(5).unwrap();
        let pairs = GSet::new(GSetKind::UnorderedPairs, 5);
        let h = a5.stabilizer(&pairs, 0).unwrap();
        assert!(sign_module(&h, SignKind::PairSwap(0, 1)).is_ok());
        assert!(sign_module(&a5, SignKind::PairSwap(0, 1)).is_err());
    }

    #[test]
    fn induced_from_point_stabilizer_is_m() {
        for n in [4, 5, 6] {
            let g = alternating_group(n).unwrap();
            let pts = GSet::new(GSetKind::Points, n);
            let h = g.stabilizer(&pts, n - 1).unwrap();
            let ind = induce(&g, &trivial_module(&h)).unwrap();
            let m = natural_module(&g);
            // transversal order matches the points, so the matrices agree
            assert_eq!(ind.generator_matrices(), m.generator_matrices());
            ind.verify().unwrap();
        }
    }

    #[test]
    fn induced_regular_module() {
        let c2 = cyclic_group(2).unwrap();
        let one = PermGroup::trivial(2);
        let ind = induce(&c2, &trivial_module(&one)).unwrap();
        assert_eq!(ind.rank(), 2);
        assert_eq!(ind.generator_matrices()[0], Mat::from_rows(&[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn orbit_decompositions() {
        let a4 = alternating_group(4).unwrap();
        let sizes: Vec<usize> = orbit_decompose(&a4, GSetKind::AllPairs).unwrap().iter().map(|o| o.orbit.len()).collect();
        assert_eq!(sizes, vec![4, 12]);
        assert_eq!(orbit_decompose(&a4, GSetKind::Points).unwrap().len(), 1);
        let a3 = alternating_group(3).unwrap();
        let o = orbit_decompose(&a3, GSetKind::UnorderedPairs).unwrap();
        assert_eq!((o.len(), o[0].orbit.len()), (1, 3));
    }

    #[test]
    fn pair_index_is_lex() {
        let n = 5;
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(pair_index(n, i, j), k);
                k += 1;
            }
        }
    }
}
