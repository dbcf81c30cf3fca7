//! Exact integer linear algebra: sparse matrices, Smith normal form, ranks,
//! and abelian-group invariants of cokernels and subquotients.

pub mod abgroup;
pub mod int;
pub mod minors;
pub mod modrank;
pub mod snf;
pub mod sparse;

pub use abgroup::AbGroup;
pub use int::Int;
pub use minors::invariant_factors_by_minors;
pub use snf::{smith_normal_form, smith_normal_form_with, SnfConfig, SnfResult};
pub use sparse::SparseIntMatrix;

use crate::error::{Error, Result};
use snf::DenseSnf;

/// How a rank was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    /// Modular rank reached a known rational upper bound.
    ModularCertified,
    /// Exact integer elimination.
    Exact,
}

fn factors_to_u64(res: &SnfResult) -> Result<Vec<u64>> {
    res.nontrivial_factors()
        .map(|d| {
            d.to_u64()
                .ok_or_else(|| Error::ResourceLimit(format!("invariant factor {d} exceeds u64")))
        })
        .collect()
}

/// `Z^ambient_rank / column-span(A)`.
pub fn cokernel_invariants(a: &SparseIntMatrix, ambient_rank: usize) -> Result<AbGroup> {
    cokernel_invariants_with(a, ambient_rank, &SnfConfig::default())
}

pub fn cokernel_invariants_with(a: &SparseIntMatrix, ambient_rank: usize, cfg: &SnfConfig) -> Result<AbGroup> {
    if a.rows() != ambient_rank {
        return Err(Error::invalid(format!(
            "matrix has {} rows but ambient rank is {ambient_rank}",
            a.rows()
        )));
    }
    let res = smith_normal_form_with(a, false, cfg)?;
    AbGroup::new(ambient_rank - res.rank, factors_to_u64(&res)?)
}

/// Exact rank, certified by modular elimination when `upper_bound` is met,
/// otherwise by integer elimination.
pub fn certified_rank(a: &SparseIntMatrix, upper_bound: usize, cfg: &SnfConfig) -> Result<(usize, RankMethod)> {
    let bound = upper_bound.min(a.rows()).min(a.cols());
    if a.is_zero() {
        return Ok((0, RankMethod::Exact));
    }
    for p in modrank::PRIMES {
        match modrank::rank_mod_p(a, p, cfg.max_fill) {
            Ok(r) if r >= bound => return Ok((r, RankMethod::ModularCertified)),
            Ok(_) => continue,
            Err(e) if e.is_budget() => break,
            Err(e) => return Err(e),
        }
    }
    let res = smith_normal_form_with(a, false, cfg)?;
    Ok((res.rank, RankMethod::Exact))
}

/// Result of [`subquotient_invariants`] with the bookkeeping that produced it.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: AbGroup,
    pub rank_image: usize,
    pub rank_outgoing: usize,
    pub rank_method: RankMethod,
}

/// `ker(Z) / im(B)` for composable `Z: F -> G`, `B: E -> F` with `Z B = 0`.
///
/// Because `F / ker(Z)` embeds in a free module, it is free, so the torsion of
/// the subquotient equals the torsion of `F / im(B)`; the free rank is
/// `rank F - rank Z - rank B`.
pub fn subquotient_invariants(z: &SparseIntMatrix, b: &SparseIntMatrix) -> Result<AbGroup> {
    Ok(subquotient_detailed(z, b, &SnfConfig::default())?.group)
}

pub fn subquotient_detailed(z: &SparseIntMatrix, b: &SparseIntMatrix, cfg: &SnfConfig) -> Result<Subquotient> {
    if z.cols() != b.rows() {
        return Err(Error::invalid(format!(
            "Z is {}x{} but B is {}x{}",
            z.rows(),
            z.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let zb = z.matmul(b)?;
    if !zb.is_zero() {
        return Err(Error::BrokenDifferential(format!(
            "B not contained in ker(Z): product has {} nonzeros",
            zb.nnz()
        )));
    }
    let n = z.cols();
    let snf_b = smith_normal_form_with(b, false, cfg)?;
    let torsion = factors_to_u64(&snf_b)?;
    let (rank_z, method) = certified_rank(z, n - snf_b.rank, cfg)?;
    Ok(Subquotient {
        group: AbGroup::new(n - rank_z - snf_b.rank, torsion)?,
        rank_image: snf_b.rank,
        rank_outgoing: rank_z,
        rank_method: method,
    })
}

/// Saturated integral basis of `ker(A)`, one basis vector per column.
pub fn kernel_basis(a: &SparseIntMatrix) -> Result<SparseIntMatrix> {
    let mut snf = DenseSnf::new(a.to_dense(), true);
    snf.run(&SnfConfig::default())?;
    let rank = snf.diagonal().len();
    let v = snf.right().expect("tracking enabled");
    let n = a.cols();
    let trip = (0..n).flat_map(|i| ((rank..n).map(move |j| (i, j))).map(|(i, j)| (i, j - rank, v[i][j].clone())));
    SparseIntMatrix::from_triplets(n, n - rank, trip)
}

/// Solves `A X = B` over the integers for `A` of full column rank; `None`
/// when no integral solution exists.
pub fn solve_integral(a: &SparseIntMatrix, b: &SparseIntMatrix) -> Result<Option<SparseIntMatrix>> {
    if a.rows() != b.rows() {
        return Err(Error::invalid("solve_integral: row mismatch"));
    }
    let mut snf = DenseSnf::new(a.to_dense(), true);
    snf.run(&SnfConfig::default())?;
    let d = snf.diagonal();
    if d.len() != a.cols() {
        return Err(Error::invalid("solve_integral: A lacks full column rank"));
    }
    let u = snf.left().expect("tracking");
    let v = snf.right().expect("tracking");
    let bd = b.to_dense();
    let (m, n, k) = (a.rows(), a.cols(), b.cols());
    // y = U B
    let mut y = vec![vec![Int::ZERO; k]; m];
    for i in 0..m {
        for (l, ul) in u[i].iter().enumerate() {
            if ul.is_zero() {
                continue;
            }
            for j in 0..k {
                if !bd[l][j].is_zero() {
                    y[i][j] = &y[i][j] + &(ul * &bd[l][j]);
                }
            }
        }
    }
    if y[n..].iter().any(|row| row.iter().any(|x| !x.is_zero())) {
        return Ok(None);
    }
    for i in 0..n {
        for j in 0..k {
            let (q, r) = y[i][j].div_rem(&d[i]);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i][j] = q;
        }
    }
    let mut trip = Vec::new();
    for i in 0..n {
        for j in 0..k {
            let mut s = Int::ZERO;
            for (l, row) in y.iter().enumerate().take(n) {
                if !v[i][l].is_zero() && !row[j].is_zero() {
                    s = &s + &(&v[i][l] * &row[j]);
                }
            }
            trip.push((i, j, s));
        }
    }
    Ok(Some(SparseIntMatrix::from_triplets(n, k, trip)?))
}

/// Integral left inverse `L` with `L A = I`, or `None` when `A` lacks full
/// column rank or its column span is not saturated.
pub fn left_inverse(a: &SparseIntMatrix) -> Result<Option<SparseIntMatrix>> {
    let mut snf = DenseSnf::new(a.to_dense(), true);
    snf.run(&SnfConfig::default())?;
    let d = snf.diagonal();
    let k = a.cols();
    if d.len() != k || d.iter().any(|x| !x.is_unit()) {
        return Ok(None);
    }
    let u = snf.left().expect("tracking");
    let v = snf.right().expect("tracking");
    let m = a.rows();
    let mut trip = Vec::new();
    for i in 0..k {
        for j in 0..m {
            let mut s = Int::ZERO;
            for l in 0..k {
                if !v[i][l].is_zero() && !u[l][j].is_zero() {
                    // d_l is a unit, so it is its own inverse
                    s = &s + &(&(&v[i][l] * &d[l]) * &u[l][j]);
                }
            }
            trip.push((i, j, s));
        }
    }
    Ok(Some(SparseIntMatrix::from_triplets(k, m, trip)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_examples() {
        let a = SparseIntMatrix::from_dense(&[vec![1, 0], vec![0, 2], vec![0, 0]]);
        assert_eq!(cokernel_invariants(&a, 3).unwrap(), AbGroup::new(1, vec![2]).unwrap());
        assert_eq!(cokernel_invariants(&SparseIntMatrix::zeros(2, 3), 2).unwrap(), AbGroup::free(2));
        let a = SparseIntMatrix::from_dense(&[vec![3]]);
        assert_eq!(cokernel_invariants(&a, 1).unwrap(), AbGroup::cyclic(3));
        assert!(cokernel_invariants(&a, 2).is_err());
    }

    #[test]
    fn subquotient_degenerate_cases() {
        let n = 4;
        let z = SparseIntMatrix::zeros(1, n);
        let b = SparseIntMatrix::zeros(n, 2);
        assert_eq!(subquotient_invariants(&z, &b).unwrap(), AbGroup::free(n));
        let z = SparseIntMatrix::identity(n);
        assert_eq!(subquotient_invariants(&z, &b).unwrap(), AbGroup::zero());
    }

    #[test]
    fn subquotient_rejects_non_complex() {
        let z = SparseIntMatrix::from_dense(&[vec![1, 1]]);
        let b = SparseIntMatrix::from_dense(&[vec![1], vec![0]]);
        assert!(matches!(subquotient_invariants(&z, &b), Err(Error::BrokenDifferential(_))));
    }

    #[test]
    fn kernel_basis_is_saturated() {
        let a = SparseIntMatrix::from_dense(&[vec![2, 4, 6]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.cols(), 2);
        assert!(a.matmul(&k).unwrap().is_zero());
        // saturated: the cokernel of the basis is free
        assert_eq!(cokernel_invariants(&k, 3).unwrap(), AbGroup::free(1));
    }

    #[test]
    fn left_inverse_cases() {
        let a = SparseIntMatrix::from_dense(&[vec![1, 1], vec![1, 2], vec![1, 3]]);
        let l = left_inverse(&a).unwrap().unwrap();
        assert_eq!(l.matmul(&a).unwrap(), SparseIntMatrix::identity(2));
        let b = SparseIntMatrix::from_dense(&[vec![2], vec![0]]);
        assert!(left_inverse(&b).unwrap().is_none());
    }

    #[test]
    fn solve_integral_cases() {
        let a = SparseIntMatrix::from_dense(&[vec![1, 0], vec![1, 1], vec![0, 2]]);
        let x = SparseIntMatrix::from_dense(&[vec![3], vec![-1]]);
        let b = a.matmul(&x).unwrap();
        assert_eq!(solve_integral(&a, &b).unwrap().unwrap(), x);
        let bad = SparseIntMatrix::from_dense(&[vec![0], vec![0], vec![1]]);
        assert!(solve_integral(&a, &bad).unwrap().is_none());
    }
}
