//! Smith normal form over the integers.
//!
//! Two engines share one contract:
//!
//! * a sparse eliminator for invariant factors only. Unit pivots are taken
//!   first, chosen Markowitz-style (shortest column, then shortest row), which
//!   peels off almost all of a bar differential with no coefficient growth.
//!   What remains is reduced with Euclidean pivoting, or handed to the dense
//!   engine once it is small enough.
//! * a dense engine that can also track the unimodular transforms.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::int::Int;
use crate::linalg::sparse::SparseIntMatrix;

/// Limits for exact elimination. Exceeding any of them is a structured
/// failure, never a truncated answer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnfConfig {
    /// Active submatrices with at most this many cells go to the dense engine.
    pub dense_threshold: usize,
    /// Largest allowed entry, in bits, during elimination.
    pub max_entry_bits: u64,
    /// Cap on stored nonzeros during elimination (fill-in included).
    pub max_fill: usize,
    /// Cap on `rows * cols` when transforms are requested.
    pub max_transform_cells: usize,
}

impl Default for SnfConfig {
    fn default() -> Self {
        SnfConfig {
            dense_threshold: 40_000,
            max_entry_bits: 4096,
            max_fill: 60_000_000,
            max_transform_cells: 4_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Positive, `d1 | d2 | ...`; length equals `rank`.
    pub invariant_factors: Vec<Int>,
    pub rank: usize,
    /// `U` with `U * A * V = D`.
    pub left_transform: Option<SparseIntMatrix>,
    pub right_transform: Option<SparseIntMatrix>,
}

impl SnfResult {
    /// Factors greater than one.
    pub fn nontrivial_factors(&self) -> impl Iterator<Item = &Int> {
        self.invariant_factors.iter().filter(|d| !d.is_unit())
    }
}

pub fn smith_normal_form(a: &SparseIntMatrix, want_transforms: bool) -> Result<SnfResult> {
    smith_normal_form_with(a, want_transforms, &SnfConfig::default())
}

pub fn smith_normal_form_with(
    a: &SparseIntMatrix,
    want_transforms: bool,
    cfg: &SnfConfig,
) -> Result<SnfResult> {
    if want_transforms {
        let cells = a.rows().saturating_mul(a.cols());
        if cells > cfg.max_transform_cells {
            return Err(Error::ResourceLimit(format!(
                "transforms requested for {}x{} matrix (cap {} cells)",
                a.rows(),
                a.cols(),
                cfg.max_transform_cells
            )));
        }
        let mut dense = DenseSnf::new(a.to_dense(), true);
        dense.run(cfg)?;
        return Ok(dense.into_result());
    }
    let diag = SparseEliminator::new(a, cfg)?.run()?;
    Ok(diagonal_to_result(diag))
}

/// Turns an arbitrary list of nonzero diagonal entries into the invariant
/// factor chain of the same diagonal matrix.
pub fn diagonal_to_chain(diag: Vec<Int>) -> Vec<Int> {
    let mut ones = 0usize;
    let mut rest: Vec<Int> = Vec::new();
    for d in diag {
        debug_assert!(!d.is_zero());
        let d = d.abs();
        if d.is_unit() {
            ones += 1;
        } else {
            rest.push(d);
        }
    }
    rest.sort();
    let k = rest.len();
    for i in 0..k {
        for j in (i + 1)..k {
            if rest[j].div_rem(&rest[i]).1.is_zero() {
                continue;
            }
            let g = rest[i].gcd(&rest[j]);
            let l = (&rest[i] * &rest[j]).div_exact(&g);
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = vec![Int::ONE; ones];
    for d in rest {
        if d.is_unit() {
            out.insert(0, d);
        } else {
            out.push(d);
        }
    }
    out
}

fn diagonal_to_result(diag: Vec<Int>) -> SnfResult {
    let factors = diagonal_to_chain(diag);
    SnfResult {
        rank: factors.len(),
        invariant_factors: factors,
        left_transform: None,
        right_transform: None,
    }
}

type Row = Vec<(u32, Int)>;

/// Sparse invariant-factor eliminator.
struct SparseEliminator<'a> {
    cfg: &'a SnfConfig,
    rows: Vec<Row>,
    row_alive: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    col_alive: Vec<bool>,
    nnz: usize,
    diag: Vec<Int>,
}

impl<'a> SparseEliminator<'a> {
    fn new(a: &SparseIntMatrix, cfg: &'a SnfConfig) -> Result<Self> {
        let rows = a.row_lists();
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); a.cols()];
        let mut col_count = vec![0u32; a.cols()];
        for (r, c, _) in a.entries() {
            col_rows[c].push(r as u32);
            col_count[c] += 1;
        }
        let row_alive = rows.iter().map(|r| !r.is_empty()).collect();
        Ok(SparseEliminator {
            cfg,
            row_alive,
            col_alive: vec![true; a.cols()],
            col_rows,
            col_count,
            nnz: a.nnz(),
            rows,
            diag: Vec::new(),
        })
    }

    fn run(mut self) -> Result<Vec<Int>> {
        self.unit_phase()?;
        self.general_phase()?;
        Ok(self.diag)
    }

    fn entry(&self, r: u32, c: u32) -> Option<&Int> {
        let row = &self.rows[r as usize];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
    }

    /// Live rows with a nonzero in column `c`; also compacts the index.
    fn rows_in_col(&mut self, c: u32) -> Vec<u32> {
        let mut list = std::mem::take(&mut self.col_rows[c as usize]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.row_alive[r as usize] && self.entry(r, c).is_some());
        self.col_rows[c as usize] = list.clone();
        list
    }

    /// `rows[target] -= q * rows[pivot]`, maintaining column bookkeeping.
    fn row_axpy(&mut self, target: u32, q: &Int, pivot: u32, touched: &mut Vec<u32>) -> Result<()> {
        let src = std::mem::take(&mut self.rows[pivot as usize]);
        let dst = std::mem::take(&mut self.rows[target as usize]);
        let mut out: Row = Vec::with_capacity(dst.len() + src.len());
        let (mut i, mut j) = (0, 0);
        while i < dst.len() || j < src.len() {
            let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
            let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
            if take_dst {
                out.push(dst[i].clone());
                i += 1;
            } else if take_src {
                let (c, v) = &src[j];
                let nv = &Int::ZERO - &(q * v);
                self.check_bits(&nv)?;
                self.col_count[*c as usize] += 1;
                self.col_rows[*c as usize].push(target);
                self.nnz += 1;
                touched.push(*c);
                out.push((*c, nv));
                j += 1;
            } else {
                let c = dst[i].0;
                let nv = dst[i].1.sub_mul(q, &src[j].1);
                if nv.is_zero() {
                    self.col_count[c as usize] -= 1;
                    self.nnz -= 1;
                    touched.push(c);
                } else {
                    self.check_bits(&nv)?;
                    out.push((c, nv));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[pivot as usize] = src;
        self.rows[target as usize] = out;
        if self.nnz > self.cfg.max_fill {
            return Err(Error::ResourceLimit(format!(
                "elimination fill exceeded {} nonzeros",
                self.cfg.max_fill
            )));
        }
        Ok(())
    }

    fn check_bits(&self, v: &Int) -> Result<()> {
        if v.bits() > self.cfg.max_entry_bits {
            return Err(Error::ResourceLimit(format!(
                "entry size exceeded {} bits",
                self.cfg.max_entry_bits
            )));
        }
        Ok(())
    }

    fn remove_row(&mut self, r: u32) {
        let row = std::mem::take(&mut self.rows[r as usize]);
        for (c, _) in &row {
            self.col_count[*c as usize] -= 1;
        }
        self.nnz -= row.len();
        self.row_alive[r as usize] = false;
    }

    /// Eliminates with ±1 pivots only; no coefficient growth beyond sums.
    fn unit_phase(&mut self) -> Result<()> {
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..self.col_count.len() as u32)
            .filter(|&c| self.col_count[c as usize] > 0)
            .map(|c| Reverse((self.col_count[c as usize], c)))
            .collect();
        let mut touched: Vec<u32> = Vec::new();
        while let Some(Reverse((cnt, c))) = heap.pop() {
            if !self.col_alive[c as usize] || self.col_count[c as usize] != cnt || cnt == 0 {
                continue;
            }
            let candidates = self.rows_in_col(c);
            let pivot = candidates
                .iter()
                .copied()
                .filter(|&r| self.entry(r, c).is_some_and(Int::is_unit))
                .min_by_key(|&r| (self.rows[r as usize].len(), r));
            let Some(pr) = pivot else { continue };
            let pv = self.entry(pr, c).cloned().expect("pivot present");
            touched.clear();
            for &r in &candidates {
                if r == pr {
                    continue;
                }
                let a = self.entry(r, c).cloned().expect("row in column");
                // pivot is ±1, so a / pv == a * pv
                let q = &a * &pv;
                self.row_axpy(r, &q, pr, &mut touched)?;
            }
            for (cc, _) in self.rows[pr as usize].iter() {
                touched.push(*cc);
            }
            self.remove_row(pr);
            self.col_alive[c as usize] = false;
            self.diag.push(Int::ONE);
            touched.sort_unstable();
            touched.dedup();
            for &tc in &touched {
                let k = self.col_count[tc as usize];
                if self.col_alive[tc as usize] && k > 0 {
                    heap.push(Reverse((k, tc)));
                }
            }
        }
        Ok(())
    }

    fn active_shape(&self) -> (Vec<u32>, Vec<u32>) {
        let rows: Vec<u32> = (0..self.rows.len() as u32)
            .filter(|&r| self.row_alive[r as usize] && !self.rows[r as usize].is_empty())
            .collect();
        let cols: Vec<u32> = (0..self.col_count.len() as u32)
            .filter(|&c| self.col_alive[c as usize] && self.col_count[c as usize] > 0)
            .collect();
        (rows, cols)
    }

    /// Euclidean pivoting on whatever the unit phase left behind.
    fn general_phase(&mut self) -> Result<()> {
        loop {
            let (rows, cols) = self.active_shape();
            if rows.is_empty() {
                return Ok(());
            }
            if rows.len().saturating_mul(cols.len()) <= self.cfg.dense_threshold {
                return self.finish_dense(&rows, &cols);
            }
            // smallest magnitude, ties broken by Markowitz cost
            let mut best: Option<(Int, usize, u32, u32)> = None;
            for &r in &rows {
                let len = self.rows[r as usize].len();
                for (c, v) in &self.rows[r as usize] {
                    let key = (v.abs(), (len - 1) * (self.col_count[*c as usize] as usize - 1));
                    let better = match &best {
                        None => true,
                        Some((bv, bm, _, _)) => (key.0.clone(), key.1) < (bv.clone(), *bm),
                    };
                    if better {
                        best = Some((key.0, key.1, r, *c));
                    }
                }
            }
            let (_, _, r, c) = best.expect("active matrix is nonempty");
            self.euclid_pivot(r, c)?;
        }
    }

    fn euclid_pivot(&mut self, mut r: u32, mut c: u32) -> Result<()> {
        let mut touched = Vec::new();
        loop {
            let p = self.entry(r, c).cloned().expect("pivot present");
            let mut leftover = false;
            for r2 in self.rows_in_col(c) {
                if r2 == r {
                    continue;
                }
                let a = self.entry(r2, c).cloned().expect("row in column");
                let (q, rem) = a.div_rem(&p);
                if !q.is_zero() {
                    self.row_axpy(r2, &q, r, &mut touched)?;
                }
                if !rem.is_zero() {
                    leftover = true;
                }
            }
            if leftover {
                let col = self.rows_in_col(c);
                r = col
                    .into_iter()
                    .min_by_key(|&x| (self.entry(x, c).expect("present").abs(), x))
                    .expect("column nonempty");
                continue;
            }
            // Column c now meets only row r, so column operations touch row r alone.
            let mut row = std::mem::take(&mut self.rows[r as usize]);
            let mut next: Option<(Int, u32)> = None;
            row.retain_mut(|(j, v)| {
                if *j == c {
                    return true;
                }
                let rem = v.div_rem(&p).1;
                if rem.is_zero() {
                    self.col_count[*j as usize] -= 1;
                    self.nnz -= 1;
                    false
                } else {
                    let better = next.as_ref().is_none_or(|(b, _)| rem.abs() < *b);
                    if better {
                        next = Some((rem.abs(), *j));
                    }
                    *v = rem;
                    true
                }
            });
            self.rows[r as usize] = row;
            match next {
                None => {
                    self.remove_row(r);
                    self.col_alive[c as usize] = false;
                    self.diag.push(p.abs());
                    return Ok(());
                }
                Some((_, j)) => c = j,
            }
        }
    }

    fn finish_dense(&mut self, rows: &[u32], cols: &[u32]) -> Result<()> {
        let mut col_pos = vec![u32::MAX; self.col_count.len()];
        for (i, &c) in cols.iter().enumerate() {
            col_pos[c as usize] = i as u32;
        }
        let mut dense = vec![vec![Int::ZERO; cols.len()]; rows.len()];
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in &self.rows[r as usize] {
                dense[i][col_pos[*c as usize] as usize] = v.clone();
            }
        }
        let mut snf = DenseSnf::new(dense, false);
        snf.run(self.cfg)?;
        self.diag.extend(snf.diagonal());
        for &r in rows {
            self.remove_row(r);
        }
        Ok(())
    }
}

/// Classical dense Smith form; optionally tracks `U`, `V` with `U A V = D`.
pub(crate) struct DenseSnf {
    a: Vec<Vec<Int>>,
    u: Option<Vec<Vec<Int>>>,
    v: Option<Vec<Vec<Int>>>,
    rank: usize,
}

fn identity_dense(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::ONE } else { Int::ZERO }).collect())
        .collect()
}

impl DenseSnf {
    pub(crate) fn new(a: Vec<Vec<Int>>, track: bool) -> Self {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        DenseSnf {
            a,
            u: track.then(|| identity_dense(m)),
            v: track.then(|| identity_dense(n)),
            rank: 0,
        }
    }

    fn m(&self) -> usize {
        self.a.len()
    }

    fn n(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, q: &Int, j: usize, from: usize) {
        let (src, dst) = two_mut(&mut self.a, j, i);
        for k in from..dst.len() {
            if !src[k].is_zero() {
                dst[k] = dst[k].sub_mul(q, &src[k]);
            }
        }
        if let Some(u) = &mut self.u {
            let (src, dst) = two_mut(u, j, i);
            for k in 0..dst.len() {
                if !src[k].is_zero() {
                    dst[k] = dst[k].sub_mul(q, &src[k]);
                }
            }
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, q: &Int, j: usize, from: usize) {
        for row in self.a.iter_mut().skip(from) {
            if !row[j].is_zero() {
                row[i] = row[i].sub_mul(q, &row[j]);
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[j].is_zero() {
                    row[i] = row[i].sub_mul(q, &row[j]);
                }
            }
        }
    }

    fn check(&self, cfg: &SnfConfig, t: usize) -> Result<()> {
        for row in self.a.iter().skip(t) {
            for v in row.iter().skip(t) {
                if v.bits() > cfg.max_entry_bits {
                    return Err(Error::ResourceLimit(format!(
                        "entry size exceeded {} bits",
                        cfg.max_entry_bits
                    )));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn run(&mut self, cfg: &SnfConfig) -> Result<()> {
        let (m, n) = (self.m(), self.n());
        let mut t = 0;
        while t < m.min(n) {
            // pivot: smallest nonzero magnitude in the trailing block
            let mut best: Option<(Int, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let v = &self.a[i][j];
                    if !v.is_zero() && best.as_ref().is_none_or(|(b, _, _)| v.abs() < *b) {
                        best = Some((v.abs(), i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in (t + 1)..m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let (q, rem) = self.a[i][t].div_rem(&self.a[t][t]);
                    self.row_sub(i, &q, t, t);
                    if !rem.is_zero() {
                        dirty = true;
                    }
                }
                for j in (t + 1)..n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let (q, rem) = self.a[t][j].div_rem(&self.a[t][t]);
                    self.col_sub(j, &q, t, t);
                    if !rem.is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // move the smallest remaining entry of row/column t into the pivot
                    let mut best = (self.a[t][t].abs(), t, t);
                    for i in (t + 1)..m {
                        let v = &self.a[i][t];
                        if !v.is_zero() && v.abs() < best.0 {
                            best = (v.abs(), i, t);
                        }
                    }
                    for j in (t + 1)..n {
                        let v = &self.a[t][j];
                        if !v.is_zero() && v.abs() < best.0 {
                            best = (v.abs(), t, j);
                        }
                    }
                    self.swap_rows(t, best.1);
                    self.swap_cols(t, best.2);
                    self.check(cfg, t)?;
                    continue;
                }
                // divisibility of the trailing block
                let p = self.a[t][t].clone();
                let offender = ((t + 1)..m).find(|&i| {
                    ((t + 1)..n).any(|j| !self.a[i][j].div_rem(&p).1.is_zero())
                });
                match offender {
                    Some(i) => {
                        // row_t += row_i brings a non-multiple into the pivot row
                        self.row_sub(t, &Int::from(-1), i, t);
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                let neg = Int::from(-1);
                for row in self.a.iter_mut().skip(t).take(1) {
                    for v in row.iter_mut() {
                        *v = &*v * &neg;
                    }
                }
                if let Some(u) = &mut self.u {
                    for v in u[t].iter_mut() {
                        *v = &*v * &neg;
                    }
                }
            }
            t += 1;
        }
        self.rank = t;
        Ok(())
    }

    pub(crate) fn diagonal(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.a[i][i].clone()).collect()
    }

    pub(crate) fn left(&self) -> Option<&Vec<Vec<Int>>> {
        self.u.as_ref()
    }

    pub(crate) fn right(&self) -> Option<&Vec<Vec<Int>>> {
        self.v.as_ref()
    }

    fn into_result(self) -> SnfResult {
        let to_sparse = |d: Vec<Vec<Int>>| {
            let r = d.len();
            let c = d.first().map_or(r, Vec::len);
            let trip = d
                .into_iter()
                .enumerate()
                .flat_map(|(i, row)| row.into_iter().enumerate().map(move |(j, v)| (i, j, v)));
            SparseIntMatrix::from_triplets(r, c, trip).expect("transform is well-formed")
        };
        let factors = self.diagonal();
        SnfResult {
            rank: self.rank,
            invariant_factors: factors,
            left_transform: self.u.map(to_sparse),
            right_transform: self.v.map(to_sparse),
        }
    }
}

fn two_mut<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}
