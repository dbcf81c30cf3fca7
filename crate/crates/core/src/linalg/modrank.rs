//! Rank over a prime field by sparse elimination.
//!
//! The rank mod a prime never exceeds the rational rank, so a modular rank
//! that already meets an upper bound certifies the exact rank.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::linalg::int::Int;
use crate::linalg::sparse::SparseIntMatrix;

pub const PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

fn reduce(v: &Int, p: u64) -> u64 {
    match v {
        Int::Small(x) => x.rem_euclid(p as i64) as u64,
        Int::Big(b) => {
            use num_bigint::BigInt;
            use num_integer::Integer;
            use num_traits::ToPrimitive;
            b.mod_floor(&BigInt::from(p)).to_u64().expect("reduced below p")
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Rank of `a` modulo the prime `p` (< 2^32). Fails only when fill-in
/// exceeds `max_fill`.
pub fn rank_mod_p(a: &SparseIntMatrix, p: u64, max_fill: usize) -> Result<usize> {
    assert!(p < (1 << 32));
    let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); a.rows()];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); a.cols()];
    let mut col_count = vec![0u32; a.cols()];
    let mut nnz = 0usize;
    for (r, c, v) in a.entries() {
        let x = reduce(v, p);
        if x != 0 {
            rows[r].push((c as u32, x));
            col_rows[c].push(r as u32);
            col_count[c] += 1;
            nnz += 1;
        }
    }
    let mut row_alive = vec![true; a.rows()];
    let mut col_done = vec![false; a.cols()];
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..a.cols() as u32)
        .filter(|&c| col_count[c as usize] > 0)
        .map(|c| Reverse((col_count[c as usize], c)))
        .collect();
    let find = |row: &Vec<(u32, u64)>, c: u32| row.binary_search_by_key(&c, |e| e.0).ok();
    let mut rank = 0;
    let mut touched: Vec<u32> = Vec::new();
    while let Some(Reverse((cnt, c))) = heap.pop() {
        if col_done[c as usize] || col_count[c as usize] != cnt || cnt == 0 {
            continue;
        }
        let mut list = std::mem::take(&mut col_rows[c as usize]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| row_alive[r as usize] && find(&rows[r as usize], c).is_some());
        let Some(&pr) = list.iter().min_by_key(|&&r| (rows[r as usize].len(), r)) else {
            continue;
        };
        let pivot_row = std::mem::take(&mut rows[pr as usize]);
        let pv = pivot_row[find(&pivot_row, c).expect("pivot")].1;
        let pinv = inv_mod(pv, p);
        touched.clear();
        for &r in &list {
            if r == pr {
                continue;
            }
            let dst = std::mem::take(&mut rows[r as usize]);
            let a_rc = dst[find(&dst, c).expect("in column")].1;
            let f = a_rc * pinv % p;
            let mut out = Vec::with_capacity(dst.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < dst.len() || j < pivot_row.len() {
                if j >= pivot_row.len() || (i < dst.len() && dst[i].0 < pivot_row[j].0) {
                    out.push(dst[i]);
                    i += 1;
                } else if i >= dst.len() || pivot_row[j].0 < dst[i].0 {
                    let (cc, v) = pivot_row[j];
                    out.push((cc, (p - f * v % p) % p));
                    col_count[cc as usize] += 1;
                    col_rows[cc as usize].push(r);
                    nnz += 1;
                    touched.push(cc);
                    j += 1;
                } else {
                    let cc = dst[i].0;
                    let nv = (dst[i].1 + p - f * pivot_row[j].1 % p) % p;
                    if nv == 0 {
                        col_count[cc as usize] -= 1;
                        nnz -= 1;
                        touched.push(cc);
                    } else {
                        out.push((cc, nv));
                    }
                    i += 1;
                    j += 1;
                }
            }
            rows[r as usize] = out;
        }
        for (cc, _) in &pivot_row {
            col_count[*cc as usize] -= 1;
            touched.push(*cc);
        }
        nnz -= pivot_row.len();
        row_alive[pr as usize] = false;
        col_done[c as usize] = true;
        rank += 1;
        if nnz > max_fill {
            return Err(Error::ResourceLimit(format!("modular elimination fill exceeded {max_fill}")));
        }
        touched.sort_unstable();
        touched.dedup();
        for &tc in &touched {
            let k = col_count[tc as usize];
            if !col_done[tc as usize] && k > 0 {
                heap.push(Reverse((k, tc)));
            }
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_drops_only_at_dividing_prime() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 2], vec![3, 6 + 7]]);
        assert_eq!(rank_mod_p(&m, 7, usize::MAX).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, PRIMES[0], usize::MAX).unwrap(), 2);
    }

    #[test]
    fn dependent_rows() {
        let m = SparseIntMatrix::from_dense(&[
            vec![1, 0, 2, 0],
            vec![0, 1, 1, 0],
            vec![1, 1, 3, 0],
            vec![0, 0, 0, 5],
        ]);
        assert_eq!(rank_mod_p(&m, PRIMES[1], usize::MAX).unwrap(), 3);
    }
}
