//! Three-row parity checks for MDS symbol-pair codes with pair distance 5.
//!
//! The columns of the full matrix `H(q)` are one representative of every point
//! of PG(2, q), ordered so that every three cyclically consecutive columns are
//! independent. Shorter lengths are cut out of `H(q)`.

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::linalg::{CodeMatrix, LinearCode};
use crate::matching::max_matching;
use crate::pairmetric::{check_theorem_conditions, Condition, PairCertificate};

/// An ordering `x_0, ..., x_{q-1}` of the field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XOrder {
    field: FieldSpec,
    order: Vec<FieldElem>,
}

impl XOrder {
    /// Validates `order` as a permutation of the field; for even `q >= 8` the
    /// first six entries must be `0, 1, w, w^2, w+1, w^2+w`.
    pub fn new(field: &FieldSpec, order: Vec<FieldElem>) -> Result<Self> {
        let q = field.q() as usize;
        let mut seen = vec![false; q];
        if order.len() != q {
            return Err(Error::OutOfRange(format!(
                "order has {} entries, field has {q}",
                order.len()
            )));
        }
        for x in &order {
            if !field.contains(*x) || std::mem::replace(&mut seen[x.0 as usize], true) {
                return Err(Error::OutOfRange(format!("order is not a permutation of GF({q})")));
            }
        }
        if field.p() == 2 && q >= 8 && order[..6] != even_prefix(field)[..] {
            return Err(Error::OutOfRange("order does not start with the preset prefix".into()));
        }
        Ok(XOrder {
            field: field.clone(),
            order,
        })
    }

    /// Ascending code order for odd `q`, the preset prefix followed by the
    /// remaining elements ascending for even `q >= 8`.
    pub fn standard(field: &FieldSpec) -> Self {
        let mut order = Vec::with_capacity(field.q() as usize);
        if field.p() == 2 && field.q() >= 8 {
            order.extend(even_prefix(field));
        }
        let rest: Vec<FieldElem> = field.elements().into_iter().filter(|x| !order.contains(x)).collect();
        order.extend(rest);
        XOrder {
            field: field.clone(),
            order,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn as_slice(&self) -> &[FieldElem] {
        &self.order
    }

    /// `x_i` with the subscript reduced mod `q`.
    pub fn x(&self, i: isize) -> FieldElem {
        let q = self.order.len() as isize;
        self.order[i.rem_euclid(q) as usize]
    }
}

fn even_prefix(f: &FieldSpec) -> [FieldElem; 6] {
    let w = f.primitive_element();
    let w2 = f.mul(w, w);
    [
        FieldElem::ZERO,
        FieldElem::ONE,
        w,
        w2,
        f.add(w, FieldElem::ONE),
        f.add(w2, w),
    ]
}

/// The `y` inserted as column `(0, 1, y)` at each location `L_j`, the gap
/// between blocks `B_{j+1}` and `B_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionScheme {
    pub assignment: Vec<FieldElem>,
}

/// The block `B_i`: column `j` is `(1, x_{i+j}, x_{i+j}^2 + x_i)`.
pub fn block_matrix(x: &XOrder, i: usize) -> Result<CodeMatrix> {
    let f = &x.field;
    let q = f.q() as usize;
    if i >= q {
        return Err(Error::OutOfRange(format!("block index {i} >= q = {q}")));
    }
    Ok(CodeMatrix::from_columns(f, 3, &block_columns(x, i)).expect("three-entry columns"))
}

fn block_columns(x: &XOrder, i: usize) -> Vec<Vec<FieldElem>> {
    let f = &x.field;
    let xi = x.x(i as isize);
    (0..f.q() as isize)
        .map(|j| {
            let a = x.x(i as isize + j);
            vec![FieldElem::ONE, a, f.add(f.mul(a, a), xi)]
        })
        .collect()
}

/// The two values `x_j + x_{j-1}` and `x_j + x_{j+1}` forbidden at `L_j`.
pub fn forbidden_at(x: &XOrder, j: usize) -> [FieldElem; 2] {
    let f = &x.field;
    let j = j as isize;
    [f.add(x.x(j), x.x(j - 1)), f.add(x.x(j), x.x(j + 1))]
}

/// Matches locations to insertion values so each forbidden pair is avoided.
pub fn insertion_scheme_even(x: &XOrder) -> Result<InsertionScheme> {
    let f = &x.field;
    if f.p() != 2 || f.q() < 8 {
        return Err(Error::OutOfRange(format!(
            "insertion matching needs even q >= 8, got {}",
            f.q()
        )));
    }
    let q = f.q() as usize;
    let adj: Vec<Vec<usize>> = (0..q)
        .map(|j| {
            let bad = forbidden_at(x, j);
            (0..q).filter(|&y| !bad.contains(&FieldElem(y as u32))).collect()
        })
        .collect();
    let m = max_matching(q, &adj);
    let assignment = m
        .into_iter()
        .map(|y| y.map(|y| FieldElem(y as u32)))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::NoPerfectMatching)?;
    Ok(InsertionScheme { assignment })
}

const H2: [[u32; 7]; 3] = [[1, 0, 0, 1, 0, 1, 1], [0, 1, 0, 1, 1, 1, 0], [0, 0, 1, 0, 1, 1, 1]];
const H2_5: [[u32; 5]; 3] = [[1, 0, 0, 1, 1], [0, 1, 0, 1, 0], [0, 0, 1, 1, 1]];
const H2_6: [[u32; 6]; 3] = [[1, 0, 0, 1, 0, 1], [0, 1, 0, 1, 1, 0], [0, 0, 1, 1, 1, 1]];
// w and w+1 are codes 2 and 3
const H4: [[u32; 21]; 3] = [
    [0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0],
    [1, 0, 1, 2, 3, 1, 3, 2, 1, 0, 1, 0, 3, 2, 1, 1, 1, 2, 3, 0, 0],
    [0, 0, 1, 3, 2, 3, 3, 2, 0, 1, 2, 2, 0, 1, 3, 1, 2, 0, 1, 3, 1],
];

/// The full `3 x (q^2+q+1)` matrix `H(q)` under [`XOrder::standard`].
pub fn build_h_full(f: &FieldSpec) -> Result<CodeMatrix> {
    match f.q() {
        2 => CodeMatrix::from_codes(f, &H2),
        4 => CodeMatrix::from_codes(f, &H4),
        _ => build_h_full_with(&XOrder::standard(f)),
    }
}

/// `H(q)` for a given order; `q` must be odd or at least 8.
pub fn build_h_full_with(x: &XOrder) -> Result<CodeMatrix> {
    let f = &x.field;
    let q = f.q() as usize;
    let ys: Vec<FieldElem> = if f.p() == 2 {
        insertion_scheme_even(x)?.assignment
    } else {
        (0..q).map(|j| f.add(x.x(j as isize), x.x(j as isize))).collect()
    };
    let mut cols = Vec::with_capacity(q * q + q + 1);
    for i in (0..q).rev() {
        cols.push(vec![FieldElem::ZERO, FieldElem::ONE, ys[i]]);
        cols.extend(block_columns(x, i));
    }
    cols.push(vec![FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE]);
    CodeMatrix::from_columns(f, 3, &cols)
}

/// Largest length with pair distance 5 over GF(q).
pub fn max_length(q: u32) -> usize {
    let q = q as usize;
    q * q + q + 1
}

fn check_length(f: &FieldSpec, n: usize) -> Result<()> {
    let max = max_length(f.q());
    if n < 5 {
        return Err(Error::OutOfRange(format!("n = {n} is below the minimum length 5")));
    }
    if n > max {
        return Err(Error::OutOfRange(format!("n = {n} exceeds q^2+q+1 = {max}")));
    }
    Ok(())
}

/// The `3 x n` matrix `H(q; n)` cut from `H(q)`. Raises
/// [`Error::Internal`] if the result fails the pair-distance-5 check.
pub fn build_h(f: &FieldSpec, n: usize) -> Result<CodeMatrix> {
    certified_h(f, n).map(|(h, _)| h)
}

/// Builds and certifies the `[n, n-3]` code with pair distance 5.
pub fn construct_d5(f: &FieldSpec, n: usize) -> Result<(LinearCode, PairCertificate)> {
    let (h, cert) = certified_h(f, n)?;
    Ok((LinearCode::new(h)?, cert))
}

fn certified_h(f: &FieldSpec, n: usize) -> Result<(CodeMatrix, PairCertificate)> {
    check_length(f, n)?;
    let mut h = cut_h(f, n)?;
    let mut cert = check_theorem_conditions(&h, 3)?;
    if matches!(&cert.failure, Some(v) if v.condition == Condition::DependentSet) {
        if let Some((h2, c2)) = add_dependent_triple(&h)? {
            h = h2;
            cert = c2;
        }
    }
    match &cert.failure {
        None => Ok((h, cert)),
        Some(v) => Err(Error::Internal(format!("H({}; {n}) fails: {v}", f.q()))),
    }
}

fn cut_h(f: &FieldSpec, n: usize) -> Result<CodeMatrix> {
    let q = f.q() as usize;
    match (q, n) {
        (2, 5) => return CodeMatrix::from_codes(f, &H2_5),
        (2, 6) => return CodeMatrix::from_codes(f, &H2_6),
        _ => {}
    }
    let full = build_h_full(f)?;
    if n == full.cols() {
        return Ok(full);
    }
    let mut cols: Vec<Vec<FieldElem>> = full.columns().into_iter().take(n - 1).collect();
    let e3 = vec![FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE];
    if n % (q + 1) == 2 {
        cols.insert(2, e3);
    } else {
        cols.push(e3);
    }
    CodeMatrix::from_columns(f, 3, &cols)
}

/// Short cuts of `H(q)` can be arcs, with every triple independent. Such a
/// code still has pair distance 5, but to exhibit a dependent triple we
/// replace one column (last first) by the first unused projective point that
/// keeps the other two conditions.
fn add_dependent_triple(h: &CodeMatrix) -> Result<Option<(CodeMatrix, PairCertificate)>> {
    let f = h.field();
    let points = pg2_points(f);
    let mut cols = h.columns();
    for j in (0..cols.len()).rev() {
        let old = cols[j].clone();
        for v in &points {
            if cols.contains(v) {
                continue;
            }
            cols[j] = v.clone();
            let cand = CodeMatrix::from_columns(f, 3, &cols)?;
            let cert = check_theorem_conditions(&cand, 3)?;
            if cert.verified() {
                return Ok(Some((cand, cert)));
            }
        }
        cols[j] = old;
    }
    Ok(None)
}

fn pg2_points(f: &FieldSpec) -> Vec<Vec<FieldElem>> {
    let els = f.elements();
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let mut pts = vec![vec![z, z, o]];
    pts.extend(els.iter().map(|&c| vec![z, o, c]));
    for &a in &els {
        pts.extend(els.iter().map(|&b| vec![o, a, b]));
    }
    pts
}
