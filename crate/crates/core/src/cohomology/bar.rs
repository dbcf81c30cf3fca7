//! Normalized bar complex: `C^p = Map((G \ {1})^p, M)`, one `rank M` block
//! per tuple, tuples ordered lexicographically by element index.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::linalg::{Int, SparseIntMatrix};
use crate::perm::Enumeration;

/// Largest group order for which the full multiplication table is cached.
const MUL_TABLE_LIMIT: usize = 3000;

/// Group elements with their action on a module, indexed as in the
/// enumeration (index 0 is the identity).
pub struct BarContext {
    elements: Arc<Enumeration>,
    table: Option<Vec<u32>>,
    acts: Vec<Vec<(u32, u32, i64)>>,
    rank: usize,
}

impl BarContext {
    pub fn new(module: &GModule) -> Result<BarContext> {
        let elements = module.group().enumerate()?;
        let table = (elements.len() <= MUL_TABLE_LIMIT).then(|| elements.mul_table().to_vec());
        let acts = elements
            .elements
            .iter()
            .map(|g| module.act(g).nonzeros().map(|(i, j, v)| (i as u32, j as u32, v)).collect())
            .collect();
        Ok(BarContext { elements, table, acts, rank: module.rank() })
    }

    /// Number of non-identity elements.
    pub fn m(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => {
                let e = &self.elements.elements;
                self.elements.index_of(&e[a].mul(&e[b])).expect("closed")
            }
        }
    }

    /// `rank M · m^p`.
    pub fn cochain_dim(&self, p: usize) -> Option<usize> {
        (self.m() as u128).checked_pow(p as u32).map(|x| x * self.rank as u128).and_then(|x| usize::try_from(x).ok())
    }

    /// Upper bound on the nonzeros of `d_p`.
    pub fn nnz_estimate(&self, p: usize) -> Option<usize> {
        let blocks = (self.m() as u128).checked_pow(p as u32 + 1)?;
        let act_nnz = self.acts.iter().map(Vec::len).max().unwrap_or(0) as u128;
        usize::try_from(blocks * (act_nnz + (p as u128 + 1) * self.rank as u128)).ok()
    }

    /// `d_p : C^p → C^{p+1}`,
    /// `(df)(g_1..g_{p+1}) = g_1 f(g_2..) + Σ_i (-1)^i f(..g_i g_{i+1}..) + (-1)^{p+1} f(g_1..g_p)`,
    /// with terms on degenerate tuples dropped.
    pub fn coboundary(&self, p: usize) -> Result<SparseIntMatrix> {
        let (m, r) = (self.m(), self.rank);
        let rows = self.cochain_dim(p + 1).ok_or_else(|| Error::Infeasible("cochain dimension overflows".into()))?;
        let cols = self.cochain_dim(p).expect("smaller than rows");
        let blocks = rows / r.max(1);
        let mp = m.pow(p as u32);
        let mut trip: Vec<(usize, usize, Int)> = Vec::with_capacity(self.nnz_estimate(p).unwrap_or(0));
        let mut digits = vec![0usize; p + 1];
        for t in 0..blocks {
            if r == 0 {
                break;
            }
            if t > 0 {
                let mut k = p;
                loop {
                    digits[k] += 1;
                    if digits[k] < m {
                        break;
                    }
                    digits[k] = 0;
                    k -= 1;
                }
            }
            let row0 = t * r;
            // g_1 acting on f(g_2..g_{p+1})
            let s0 = (t % mp) * r;
            for &(i, j, v) in &self.acts[digits[0] + 1] {
                trip.push((row0 + i as usize, s0 + j as usize, Int::from(v)));
            }
            for i in 1..=p {
                let prod = self.mul(digits[i - 1] + 1, digits[i] + 1);
                if prod == 0 {
                    continue;
                }
                let mut s = 0;
                for (k, d) in digits.iter().enumerate() {
                    if k == i {
                        continue;
                    }
                    s = s * m + if k == i - 1 { prod - 1 } else { *d };
                }
                let sign = if i % 2 == 0 { 1 } else { -1 };
                for k in 0..r {
                    trip.push((row0 + k, s * r + k, Int::from(sign)));
                }
            }
            let s_last = (t / m) * r;
            let sign = if (p + 1).is_multiple_of(2) { 1 } else { -1 };
            for k in 0..r {
                trip.push((row0 + k, s_last + k, Int::from(sign)));
            }
        }
        SparseIntMatrix::from_triplets(rows, cols, trip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::{module_n, trivial_module};
    use crate::perm::{alternating_group, cyclic_group};

    #[test]
    fn d_squared_vanishes() {
        let g = alternating_group(4).unwrap();
        for m in [trivial_module(&g), module_n(&g).unwrap()] {
            let ctx = BarContext::new(&m).unwrap();
            for p in 0..2 {
                let a = ctx.coboundary(p).unwrap();
                let b = ctx.coboundary(p + 1).unwrap();
                assert!(b.matmul(&a).unwrap().is_zero(), "p={p} {}", m.label());
            }
        }
    }

    #[test]
    fn dimensions() {
        let c3 = cyclic_group(3).unwrap();
        let ctx = BarContext::new(&trivial_module(&c3)).unwrap();
        let d1 = ctx.coboundary(1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (4, 2));
    }
}
