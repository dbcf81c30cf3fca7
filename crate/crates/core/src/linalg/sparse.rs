use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg::int::Int;

/// Exact integer matrix in coordinate form.
///
/// Entries are strictly ordered by `(row, col)`, never zero, and in bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, Int)>,
}

impl SparseIntMatrix {
    /// Validating constructor; rejects unsorted, duplicate, zero or
    /// out-of-range entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<(usize, usize, Int)>) -> Result<Self> {
        check_dims(rows, cols)?;
        let mut prev: Option<(usize, usize)> = None;
        for (r, c, v) in &entries {
            if *r >= rows || *c >= cols {
                return Err(Error::invalid(format!("entry ({r},{c}) out of bounds {rows}x{cols}")));
            }
            if v.is_zero() {
                return Err(Error::invalid(format!("explicit zero at ({r},{c})")));
            }
            if let Some(p) = prev {
                if p >= (*r, *c) {
                    return Err(Error::invalid(format!("entries not strictly ordered at ({r},{c})")));
                }
            }
            prev = Some((*r, *c));
        }
        Ok(SparseIntMatrix {
            rows,
            cols,
            entries: entries.into_iter().map(|(r, c, v)| (r as u32, c as u32, v)).collect(),
        })
    }

    /// Builds from unordered triplets, summing duplicates and dropping zeros.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Int)>,
    {
        check_dims(rows, cols)?;
        let mut raw: Vec<(u32, u32, Int)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::invalid(format!("entry ({r},{c}) out of bounds {rows}x{cols}")));
            }
            if !v.is_zero() {
                raw.push((r as u32, c as u32, v));
            }
        }
        raw.sort_unstable_by_key(|e| (e.0, e.1));
        let mut entries: Vec<(u32, u32, Int)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = &last.2 + &v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        Ok(SparseIntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseIntMatrix {
            rows: n,
            cols: n,
            entries: (0..n as u32).map(|i| (i, i, Int::ONE)).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let trip = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), c, "ragged dense matrix");
            row.iter().enumerate().map(move |(j, v)| (i, j, Int::from(*v)))
        });
        Self::from_triplets(r, c, trip).expect("dense input is well-formed")
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::ZERO; self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r as usize][*c as usize] = v.clone();
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        self.entries.iter().map(|(r, c, v)| (*r as usize, *c as usize, v))
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        match self
            .entries
            .binary_search_by_key(&(r as u32, c as u32), |e| (e.0, e.1))
        {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn max_abs_entry(&self) -> Int {
        self.entries.iter().map(|e| e.2.abs()).max().unwrap_or(Int::ZERO)
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<(u32, u32, Int)> =
            self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        SparseIntMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Row-major adjacency: for each row, `(col, value)` sorted by column.
    pub fn row_lists(&self) -> Vec<Vec<(u32, Int)>> {
        let mut out: Vec<Vec<(u32, Int)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r as usize].push((*c, v.clone()));
        }
        out
    }

    /// Sparse product `self * rhs`.
    pub fn matmul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rhs_rows = rhs.row_lists();
        let mut entries: Vec<(u32, u32, Int)> = Vec::new();
        let mut acc: HashMap<u32, Int> = HashMap::new();
        let mut i = 0;
        while i < self.entries.len() {
            let r = self.entries[i].0;
            acc.clear();
            while i < self.entries.len() && self.entries[i].0 == r {
                let (_, k, a) = &self.entries[i];
                for (c, b) in &rhs_rows[*k as usize] {
                    let slot = acc.entry(*c).or_insert(Int::ZERO);
                    *slot = &*slot + &(a * b);
                }
                i += 1;
            }
            let mut row: Vec<(u32, Int)> = acc.drain().filter(|(_, v)| !v.is_zero()).collect();
            row.sort_unstable_by_key(|e| e.0);
            entries.extend(row.into_iter().map(|(c, v)| (r, c, v)));
        }
        Ok(SparseIntMatrix { rows: self.rows, cols: rhs.cols, entries })
    }

    /// Matrix-vector product over the integers.
    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Int::ZERO; self.rows];
        for (r, c, a) in &self.entries {
            let x = &v[*c as usize];
            if !x.is_zero() {
                out[*r as usize] = &out[*r as usize] + &(a * x);
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::invalid("hstack: row counts differ"));
        }
        let shift = self.cols;
        let trip = self
            .entries()
            .map(|(r, c, v)| (r, c, v.clone()))
            .chain(rhs.entries().map(|(r, c, v)| (r, c + shift, v.clone())));
        SparseIntMatrix::from_triplets(self.rows, self.cols + rhs.cols, trip)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.cols {
            return Err(Error::invalid("vstack: column counts differ"));
        }
        let shift = self.rows;
        let mut entries = self.entries.clone();
        entries.extend(rhs.entries.iter().map(|(r, c, v)| (r + shift as u32, *c, v.clone())));
        Ok(SparseIntMatrix { rows: self.rows + rhs.rows, cols: self.cols, entries })
    }

    /// Writes the exchange format: header `rows cols nnz`, then one
    /// `row col value` triple per line in coordinate order.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.rows, self.cols, self.nnz())?;
        let mut line = String::new();
        for (r, c, v) in self.entries() {
            line.clear();
            let _ = writeln!(line, "{r} {c} {v}");
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Parses the exchange format written by [`write_text`](Self::write_text).
    /// Blank lines and `#` comments are ignored.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.trim_start().starts_with('#')));
        let (_, header) = lines.next().ok_or_else(|| Error::invalid("empty matrix file"))?;
        let header = header?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::invalid(format!("bad header '{header}': {e}")))?;
        if h.len() != 3 {
            return Err(Error::invalid(format!("header must be 'rows cols nnz', got '{header}'")));
        }
        let (rows, cols, nnz) = (h[0], h[1], h[2]);
        let mut entries = Vec::with_capacity(nnz);
        for (lineno, line) in lines {
            let line = line?;
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(Error::invalid(format!("line {}: expected 'row col value'", lineno + 1)));
            }
            let bad = |e: String| Error::invalid(format!("line {}: {e}", lineno + 1));
            let r = t[0].parse::<usize>().map_err(|e| bad(e.to_string()))?;
            let c = t[1].parse::<usize>().map_err(|e| bad(e.to_string()))?;
            let v = t[2].parse::<Int>().map_err(|e| bad(e.to_string()))?;
            entries.push((r, c, v));
        }
        if entries.len() != nnz {
            return Err(Error::invalid(format!("header says {nnz} entries, found {}", entries.len())));
        }
        SparseIntMatrix::new(rows, cols, entries)
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows > u32::MAX as usize || cols > u32::MAX as usize {
        return Err(Error::ResourceLimit(format!("matrix dimensions {rows}x{cols} exceed u32 indexing")));
    }
    Ok(())
}
