//! Dense matrices and linear codes over GF(q).
//!
//! Elimination always pivots on the first nonzero entry in column order, so
//! every derived object (null-space bases, witnesses) is deterministic.

use std::fmt;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};

/// Default cap on the number of codewords [`LinearCode::codewords`] will enumerate.
pub const DEFAULT_CODEWORD_CAP: u128 = 1 << 22;

/// A row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl fmt::Debug for CodeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CodeMatrix over GF({}) {}x{}", self.field.q(), self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.0.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl CodeMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<FieldElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::OutOfRange(format!(
                "entry {} is not an element of GF({})",
                bad.0,
                field.q()
            )));
        }
        Ok(CodeMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows of element codes.
    pub fn from_codes<R: AsRef<[u32]>>(field: &FieldSpec, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&c| FieldElem(c)))
            .collect();
        Self::new(field.clone(), rows.len(), cols, entries)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: &FieldSpec, rows: usize, columns: &[Vec<FieldElem>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch(format!("columns must have length {rows}")));
        }
        let cols = columns.len();
        let mut entries = vec![FieldElem::ZERO; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                entries[i * cols + j] = x;
            }
        }
        Self::new(field.clone(), rows, cols, entries)
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        CodeMatrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = FieldElem::ONE;
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FieldElem) -> Result<()> {
        if !self.field.contains(x) {
            return Err(Error::OutOfRange(format!("entry {} not in field", x.0)));
        }
        self.entries[r * self.cols + c] = x;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    /// Rows as vectors of element codes.
    pub fn to_codes(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.0).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c));
            }
        }
        CodeMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// The submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Self> {
        check_indices(idx, self.cols)?;
        let cols: Vec<Vec<FieldElem>> = idx.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(&self.field, self.rows, &cols)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (CodeMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = eliminate(&self.field, &mut m.entries, m.rows, m.cols, true);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.entries.clone();
        eliminate(&self.field, &mut buf, self.rows, self.cols, false).len()
    }

    /// Rank of the submatrix formed by the listed columns. Indices are not
    /// validated; see [`CodeMatrix::columns_independent`] for the checked form.
    pub fn column_rank(&self, idx: &[usize]) -> usize {
        let m = idx.len();
        let mut buf = Vec::with_capacity(self.rows * m);
        for r in 0..self.rows {
            let row = self.row(r);
            buf.extend(idx.iter().map(|&c| row[c]));
        }
        eliminate(&self.field, &mut buf, self.rows, m, false).len()
    }

    /// True iff the selected columns are linearly independent.
    pub fn columns_independent(&self, idx: &[usize]) -> Result<bool> {
        check_indices(idx, self.cols)?;
        Ok(self.column_rank(idx) == idx.len())
    }

    /// A basis of `{v : self * v^T = 0}`, one basis vector per row.
    pub fn null_space(&self) -> CodeMatrix {
        let (r, pivots) = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = CodeMatrix::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            out.entries[b * self.cols + fc] = FieldElem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                out.entries[b * self.cols + pc] = f.neg(r.get(i, fc));
            }
        }
        out
    }

    /// `self * other^T`.
    pub fn mul_transpose(&self, other: &CodeMatrix) -> Result<CodeMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} columns against {}",
                self.cols, other.cols
            )));
        }
        let f = &self.field;
        let mut out = CodeMatrix::zeros(f, self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                out.entries[i * other.rows + j] = dot(f, self.row(i), other.row(j));
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }
}

pub(crate) fn dot(f: &FieldSpec, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
    u.iter()
        .zip(v)
        .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

fn check_indices(idx: &[usize], cols: usize) -> Result<()> {
    for (i, &c) in idx.iter().enumerate() {
        if c >= cols {
            return Err(Error::InvalidIndex(format!("column {c} out of range 0..{cols}")));
        }
        if idx[..i].contains(&c) {
            return Err(Error::InvalidIndex(format!("column {c} repeated")));
        }
    }
    Ok(())
}

/// Gauss-Jordan elimination in place on a row-major buffer. Returns the pivot
/// columns. When `reduce` is false only the forward pass is done.
fn eliminate(f: &FieldSpec, m: &mut [FieldElem], rows: usize, cols: usize, reduce: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(sel) = (pr..rows).find(|&r| !m[r * cols + c].is_zero()) else {
            continue;
        };
        if sel != pr {
            for k in 0..cols {
                m.swap(sel * cols + k, pr * cols + k);
            }
        }
        let inv = f.inv(m[pr * cols + c]).expect("pivot is nonzero");
        for k in c..cols {
            m[pr * cols + k] = f.mul(m[pr * cols + k], inv);
        }
        let start = if reduce { 0 } else { pr + 1 };
        for r in start..rows {
            if r == pr {
                continue;
            }
            let factor = m[r * cols + c];
            if factor.is_zero() {
                continue;
            }
            for k in c..cols {
                let t = f.mul(factor, m[pr * cols + k]);
                m[r * cols + k] = f.sub(m[r * cols + k], t);
            }
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

/// Visits every `k`-subset of `0..n` in lexicographic order until `visit`
/// breaks.
pub fn for_each_subset<B>(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> ControlFlow<B>) -> Option<B> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let ControlFlow::Break(b) = visit(&idx) {
            return Some(b);
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// A linear code given by a full-row-rank parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    parity_check: CodeMatrix,
}

impl LinearCode {
    pub fn new(parity_check: CodeMatrix) -> Result<Self> {
        let r = parity_check.rows();
        let rank = parity_check.rank();
        if rank != r {
            return Err(Error::OutOfRange(format!("parity check has rank {rank} but {r} rows")));
        }
        if parity_check.cols() <= r {
            return Err(Error::OutOfRange("code dimension must be at least 1".into()));
        }
        Ok(LinearCode { parity_check })
    }

    /// The code spanned by the rows of a full-rank generator matrix.
    pub fn from_generator(generator: &CodeMatrix) -> Result<Self> {
        if generator.rank() != generator.rows() {
            return Err(Error::OutOfRange("generator matrix is rank deficient".into()));
        }
        let h = generator.null_space();
        if h.rows() == 0 {
            return Err(Error::OutOfRange("generator spans the whole space".into()));
        }
        Self::new(h)
    }

    pub fn parity_check(&self) -> &CodeMatrix {
        &self.parity_check
    }

    pub fn field(&self) -> &FieldSpec {
        self.parity_check.field()
    }

    pub fn length(&self) -> usize {
        self.parity_check.cols()
    }

    pub fn redundancy(&self) -> usize {
        self.parity_check.rows()
    }

    pub fn dimension(&self) -> usize {
        self.length() - self.redundancy()
    }

    /// A generator matrix: the null space of the parity check.
    pub fn generator(&self) -> CodeMatrix {
        self.parity_check.null_space()
    }

    /// Number of codewords, saturating.
    pub fn size(&self) -> u128 {
        (self.field().q() as u128)
            .checked_pow(self.dimension() as u32)
            .unwrap_or(u128::MAX)
    }

    /// Streams all `q^k` codewords, refusing when that exceeds `cap`.
    pub fn codewords(&self, cap: u128) -> Result<Codewords> {
        let needed = self.size();
        if needed > cap {
            return Err(Error::EnumerationCap { needed, cap });
        }
        Ok(Codewords::new(self.generator()))
    }
}

/// Enumeration of all field combinations of the rows of a basis.
///
/// Successive words differ by one scaled basis row on average, so
/// [`Codewords::advance`] is O(n) amortised.
pub struct Codewords {
    basis: CodeMatrix,
    digits: Vec<u32>,
    word: Vec<FieldElem>,
    started: bool,
    done: bool,
}

impl Codewords {
    fn new(basis: CodeMatrix) -> Self {
        let k = basis.rows();
        let n = basis.cols();
        Codewords {
            basis,
            digits: vec![0; k],
            word: vec![FieldElem::ZERO; n],
            started: false,
            done: false,
        }
    }

    /// Moves to the next codeword and returns it, or `None` at the end.
    pub fn advance(&mut self) -> Option<&[FieldElem]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.word);
        }
        let f = self.basis.field().clone();
        let q = f.q();
        for i in 0..self.digits.len() {
            let old = FieldElem(self.digits[i]);
            let carry = self.digits[i] + 1 == q;
            let new = if carry {
                FieldElem::ZERO
            } else {
                FieldElem(self.digits[i] + 1)
            };
            self.digits[i] = new.0;
            let delta = f.sub(new, old);
            for (w, &b) in self.word.iter_mut().zip(self.basis.row(i)) {
                *w = f.add(*w, f.mul(delta, b));
            }
            if !carry {
                return Some(&self.word);
            }
        }
        self.done = true;
        None
    }
}

impl Iterator for Codewords {
    type Item = Vec<FieldElem>;

    fn next(&mut self) -> Option<Self::Item> {
        self.advance().map(<[FieldElem]>::to_vec)
    }
}

/// The `r x n` Vandermonde parity check on the first `n` field elements
/// (in code order), with the point at infinity `(0, ..., 0, 1)` appended when
/// `n = q + 1`. Every `r` columns are independent, so the code is MDS.
pub fn rs_parity_check(f: &FieldSpec, n: usize, r: usize) -> Result<CodeMatrix> {
    let q = f.q() as usize;
    if n > q + 1 {
        return Err(Error::OutOfRange(format!("n = {n} exceeds q + 1 = {}", q + 1)));
    }
    if r == 0 || r >= n {
        return Err(Error::OutOfRange(format!(
            "redundancy must satisfy 1 <= r < n, got r = {r}"
        )));
    }
    let mut cols = Vec::with_capacity(n);
    for j in 0..n.min(q) {
        let a = FieldElem(j as u32);
        let col = (0..r).map(|e| f.pow(a, e as u64)).collect();
        cols.push(col);
    }
    if n == q + 1 {
        let mut inf = vec![FieldElem::ZERO; r];
        inf[r - 1] = FieldElem::ONE;
        cols.push(inf);
    }
    CodeMatrix::from_columns(f, r, &cols)
}
