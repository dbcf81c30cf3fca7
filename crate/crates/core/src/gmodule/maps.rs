use crate::error::{Error, Result};
use crate::gmodule::module::{module_n, natural_module, pair_index, submodule, tensor, trivial_module, wedge2};
use crate::gmodule::{dsum, GModule, Mat};
use crate::linalg::{cokernel_invariants, smith_normal_form};
use crate::perm::PermGroup;

/// Equivariant homomorphism given by a `target.rank × source.rank` matrix.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: GModule,
    pub target: GModule,
    pub matrix: Mat,
}

impl ModuleMap {
    /// Checks shape, group agreement and `ρ_T(g) A = A ρ_S(g)` on generators.
    pub fn new(source: &GModule, target: &GModule, matrix: Mat) -> Result<ModuleMap> {
        if source.group() != target.group() {
            return Err(Error::invalid("module map between different groups"));
        }
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::invalid(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        for (s, t) in source.generator_matrices().iter().zip(target.generator_matrices()) {
            if t.mul(&matrix) != matrix.mul(s) {
                return Err(Error::Verification(format!("{} -> {} is not equivariant", source.label(), target.label())));
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn compose(&self, after: &ModuleMap) -> Result<ModuleMap> {
        ModuleMap::new(&self.source, &after.target, after.matrix.mul(&self.matrix))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(smith_normal_form(&self.matrix.to_sparse(), false)?.rank)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.rank()? == self.source.rank())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(cokernel_invariants(&self.matrix.to_sparse(), self.target.rank())?.is_zero())
    }

    /// Bijective over `Z`, hence an isomorphism of modules.
    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.source.rank() == self.target.rank() && self.is_surjective()?)
    }
}

/// `0 → A → B → C → 0`, verified on construction.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    pub inj: ModuleMap,
    pub surj: ModuleMap,
}

impl ShortExactSeq {
    pub fn new(inj: ModuleMap, surj: ModuleMap) -> Result<ShortExactSeq> {
        if inj.target != surj.source || inj.target.rank() != surj.source.rank() {
            return Err(Error::invalid("maps are not composable"));
        }
        let fail = |what: &str| Err(Error::Verification(format!("{} -> {} -> {}: {what}", inj.source, inj.target, surj.target)));
        if surj.matrix.mul(&inj.matrix).nonzeros().next().is_some() {
            return fail("composite is not zero");
        }
        if !inj.is_injective()? {
            return fail("first map is not injective");
        }
        if !surj.is_surjective()? {
            return fail("second map is not surjective");
        }
        // ranks add up and the image of the first map is saturated, so it is the kernel
        if inj.source.rank() + surj.target.rank() != inj.target.rank() {
            return fail("ranks do not add up");
        }
        if !cokernel_invariants(&inj.matrix.to_sparse(), inj.target.rank())?.torsion().is_empty() {
            return fail("image of the first map is not saturated");
        }
        Ok(ShortExactSeq { inj, surj })
    }

    pub fn sub(&self) -> &GModule {
        &self.inj.source
    }

    pub fn middle(&self) -> &GModule {
        &self.inj.target
    }

    pub fn quotient(&self) -> &GModule {
        &self.surj.target
    }
}

/// Matrix of `M → N`, `e_i ↦ f_i`, `e_n ↦ -Σ f_i`.
fn projection_m_n(n: usize) -> Mat {
    let mut p = Mat::zeros(n - 1, n);
    for i in 0..n - 1 {
        p.set(i, i, 1);
        p.set(i, n - 1, -1);
    }
    p
}

/// `0 → Z → M → N → 0` with the diagonal embedding.
pub fn ses_triv_m_n(g: &PermGroup) -> Result<ShortExactSeq> {
    let n = g.degree();
    let (z, m, q) = (trivial_module(g), natural_module(g), module_n(g)?);
    let inj = ModuleMap::new(&z, &m, Mat::from_rows(&vec![vec![1]; n]))?;
    let surj = ModuleMap::new(&m, &q, projection_m_n(n))?;
    ShortExactSeq::new(inj, surj)
}

/// `0 → N → ∧²M → ∧²N → 0` with `[m] ↦ e∧m`, `e = Σ e_j`.
pub fn ses_n_wedge(g: &PermGroup) -> Result<ShortExactSeq> {
    let n = g.degree();
    let (nm, m) = (module_n(g)?, natural_module(g));
    let (wm, wn) = (wedge2(&m), wedge2(&nm));
    let mut a = Mat::zeros(wm.rank(), n - 1);
    for i in 0..n - 1 {
        for j in 0..n {
            // e_j ∧ e_i
            match j.cmp(&i) {
                std::cmp::Ordering::Less => a.set(pair_index(n, j, i), i, 1),
                std::cmp::Ordering::Greater => a.set(pair_index(n, i, j), i, -1),
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    let p = projection_m_n(n);
    let mut b = Mat::zeros(wn.rank(), wm.rank());
    for i in 0..n {
        for j in (i + 1)..n {
            let col = pair_index(n, i, j);
            // π(e_i) ∧ π(e_j) expanded in the basis f_k ∧ f_l
            for k in 0..n - 1 {
                for l in 0..n - 1 {
                    let c = p.get(k, i) * p.get(l, j);
                    if c == 0 || k == l {
                        continue;
                    }
                    let (row, s) = if k < l { (pair_index(n - 1, k, l), c) } else { (pair_index(n - 1, l, k), -c) };
                    b.set(row, col, b.get(row, col) + s);
                }
            }
        }
    }
    let inj = ModuleMap::new(&nm, &wm, a)?;
    let surj = ModuleMap::new(&wm, &wn, b)?;
    ShortExactSeq::new(inj, surj)
}

fn k_basis(n: usize) -> Mat {
    let mut basis = Mat::zeros(n * n, 2 * n - 1);
    for j in 0..n {
        for i in 0..n {
            basis.set(i * n + j, j, 1);
        }
    }
    for i in 0..n - 1 {
        for j in 0..n {
            basis.set(i * n + j, n + i, 1);
        }
    }
    basis
}

/// `K = Z⊗M + M⊗Z` inside `M⊗M`, on the basis `e⊗e_j` (all `j`) followed
/// by `e_i⊗e` (`i < n-1`).
pub fn module_k(g: &PermGroup) -> Result<GModule> {
    let n = g.degree();
    let m = natural_module(g);
    let mm = tensor(&m, &m)?;
    let basis = k_basis(n);
    submodule(&mm, basis, "K")
}

/// `0 → K → M⊗M → N⊗N → 0`.
pub fn ses_k_tensor(g: &PermGroup) -> Result<ShortExactSeq> {
    let n = g.degree();
    let k = module_k(g)?;
    let m = natural_module(g);
    let mm = tensor(&m, &m)?;
    let nm = module_n(g)?;
    let nn = tensor(&nm, &nm)?;
    let basis = k_basis(n);
    let p = projection_m_n(n);
    let inj = ModuleMap::new(&k, &mm, basis)?;
    let surj = ModuleMap::new(&mm, &nn, p.kron(&p))?;
    ShortExactSeq::new(inj, surj)
}

/// `0 → Z → K → N ⊕ N → 0` with `1 ↦ e⊗e`, `e⊗m ↦ ([m], 0)`, `m⊗e ↦ (0, [m])`.
pub fn ses_triv_k_nn(g: &PermGroup) -> Result<ShortExactSeq> {
    let n = g.degree();
    let k = module_k(g)?;
    let z = trivial_module(g);
    let nm = module_n(g)?;
    let target = dsum(&[nm.clone(), nm])?;
    let mut a = Mat::zeros(2 * n - 1, 1);
    for j in 0..n {
        a.set(j, 0, 1);
    }
    let p = projection_m_n(n);
    let mut b = Mat::zeros(2 * (n - 1), 2 * n - 1);
    for j in 0..n {
        for r in 0..n - 1 {
            b.set(r, j, p.get(r, j));
        }
    }
    for i in 0..n - 1 {
        b.set(n - 1 + i, n + i, 1);
    }
    let inj = ModuleMap::new(&z, &k, a)?;
    let surj = ModuleMap::new(&k, &target, b)?;
    ShortExactSeq::new(inj, surj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::alternating_group;

    #[test]
    fn standard_sequences_are_exact() {
        for n in [3, 4, 5, 6] {
            let g = alternating_group(n).unwrap();
            ses_triv_m_n(&g).unwrap();
            ses_n_wedge(&g).unwrap();
            let s = ses_k_tensor(&g).unwrap();
            assert_eq!(s.sub().rank(), 2 * n - 1);
            ses_triv_k_nn(&g).unwrap();
        }
    }

    #[test]
    fn non_equivariant_map_rejected() {
        let g = alternating_group(4).unwrap();
        let m = natural_module(&g);
        let z = trivial_module(&g);
        let mut e0 = Mat::zeros(4, 1);
        e0.set(0, 0, 1);
        assert!(ModuleMap::new(&z, &m, e0).is_err());
    }
}
