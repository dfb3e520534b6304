//! Four-row parity checks for MDS symbol-pair codes with pair distance 6.
//!
//! The columns are points of an elliptic quadric in PG(3, q), ordered so that
//! no four cyclically consecutive points are coplanar.

mod order;

pub use order::{order_points, OrderSource, OrderedPoints};

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::linalg::{CodeMatrix, LinearCode};
use crate::pairmetric::{check_theorem_conditions, PairCertificate};
use crate::Limits;

/// A point of PG(r, q), scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElem>,
}

impl ProjPoint {
    pub fn new(f: &FieldSpec, coords: &[FieldElem]) -> Result<Self> {
        let lead = coords
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::OutOfRange("the zero vector is not a projective point".into()))?;
        let s = f.inv(lead)?;
        Ok(ProjPoint {
            coords: coords.iter().map(|&c| f.mul(c, s)).collect(),
        })
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }
}

/// True iff the four points lie on a common plane of PG(3, q).
pub fn coplanar(f: &FieldSpec, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint, p4: &ProjPoint) -> bool {
    let m = [p1, p2, p3, p4].map(|p| {
        let c = p.coords();
        [c[0], c[1], c[2], c[3]]
    });
    singular4(f, m)
}

fn singular4(f: &FieldSpec, mut m: [[FieldElem; 4]; 4]) -> bool {
    for col in 0..4 {
        let Some(piv) = (col..4).find(|&r| !m[r][col].is_zero()) else {
            return true;
        };
        m.swap(col, piv);
        let inv = f.inv(m[col][col]).expect("nonzero pivot");
        for r in col + 1..4 {
            if m[r][col].is_zero() {
                continue;
            }
            let t = f.mul(m[r][col], inv);
            let pivot_row = m[col];
            for (x, &y) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *x = f.sub(*x, f.mul(t, y));
            }
        }
    }
    false
}

/// The binary form `g(y, z)` defining the quadric `x0 x1 + g(x2, x3) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadricForm {
    /// `y^2 - c z^2` with `c` the least non-square (odd `q`).
    Odd { c: FieldElem },
    /// `y^2 + y z + c z^2` with `c` the least element of trace 1 (even `q`).
    Even { c: FieldElem },
}

impl QuadricForm {
    pub fn for_field(f: &FieldSpec) -> Self {
        let els = f.elements();
        if f.p() == 2 {
            let c = *els
                .iter()
                .find(|&&c| f.trace(c) == FieldElem::ONE)
                .expect("trace is onto");
            QuadricForm::Even { c }
        } else {
            let c = *els
                .iter()
                .find(|&&c| !f.is_square(c))
                .expect("odd fields have non-squares");
            QuadricForm::Odd { c }
        }
    }

    pub fn eval(&self, f: &FieldSpec, y: FieldElem, z: FieldElem) -> FieldElem {
        match *self {
            QuadricForm::Odd { c } => f.sub(f.mul(y, y), f.mul(c, f.mul(z, z))),
            QuadricForm::Even { c } => f.add(f.add(f.mul(y, y), f.mul(y, z)), f.mul(c, f.mul(z, z))),
        }
    }

    pub fn c(&self) -> FieldElem {
        match *self {
            QuadricForm::Odd { c } | QuadricForm::Even { c } => c,
        }
    }
}

/// `q^2 + 1` points of PG(3, q), no three collinear, with two distinguished
/// points `A`, `B` and the pencil of planes through the line `AB`.
#[derive(Clone, Debug)]
pub struct Ovoid {
    field: FieldSpec,
    form: QuadricForm,
    points: Vec<ProjPoint>,
    a: usize,
    b: usize,
    planes: Vec<Vec<usize>>,
}

impl Ovoid {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn form(&self) -> QuadricForm {
        self.form
    }

    /// Points in ascending coordinate order.
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// The secant planes through `AB`, each as ascending point indices
    /// including `A` and `B`.
    pub fn planes(&self) -> &[Vec<usize>] {
        &self.planes
    }

    /// Index of the secant plane through `AB` containing point `i`.
    pub fn plane_of(&self, i: usize) -> Option<usize> {
        if i == self.a || i == self.b {
            return None;
        }
        self.planes.iter().position(|p| p.binary_search(&i).is_ok())
    }

    pub(crate) fn coplanar_idx(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        let p = &self.points;
        coplanar(&self.field, &p[i], &p[j], &p[k], &p[l])
    }
}

/// The elliptic quadric `{(0,1,0,0)} ∪ {(1, -g(y,z), y, z)}`, with
/// `A = (0,1,0,0)` and `B = (1,0,0,0)`. Invariants are checked on the way out.
pub fn elliptic_quadric(f: &FieldSpec) -> Result<Ovoid> {
    if f.q() < 3 {
        return Err(Error::OutOfRange(format!("ovoid ordering needs q >= 3, got {}", f.q())));
    }
    let form = QuadricForm::for_field(f);
    let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
    let mut points = vec![ProjPoint::new(f, &[z, o, z, z])?];
    for y in f.elements() {
        for w in f.elements() {
            points.push(ProjPoint::new(f, &[o, f.neg(form.eval(f, y, w)), y, w])?);
        }
    }
    points.sort();
    let a = points
        .iter()
        .position(|p| p.coords() == [z, o, z, z])
        .expect("A present");
    let b = points
        .iter()
        .position(|p| p.coords() == [o, z, z, z])
        .expect("B present");
    let mut ov = Ovoid {
        field: f.clone(),
        form,
        points,
        a,
        b,
        planes: vec![],
    };
    ov.planes = secant_planes(&ov, a, b)?;
    verify_ovoid(&ov)?;
    Ok(ov)
}

/// The planes of the pencil through the line `AB`, ordered by their
/// normalized normal vectors, each with its ovoid points in ascending order.
pub fn secant_planes(o: &Ovoid, a: usize, b: usize) -> Result<Vec<Vec<usize>>> {
    let n = o.points.len();
    if a == b || a >= n || b >= n {
        return Err(Error::OutOfRange("secant planes need two distinct ovoid points".into()));
    }
    let f = &o.field;
    let mut planes: Vec<(ProjPoint, Vec<usize>)> = Vec::new();
    for i in 0..n {
        if i == a || i == b || planes.iter().any(|(_, s)| s.contains(&i)) {
            continue;
        }
        let cols = [a, b, i].map(|j| o.points[j].coords().to_vec());
        let m = CodeMatrix::from_columns(f, 4, &cols)?.transpose();
        let normal = ProjPoint::new(f, m.null_space().row(0))?;
        let members: Vec<usize> = (0..n)
            .filter(|&j| j == a || j == b || o.coplanar_idx(a, b, i, j))
            .collect();
        planes.push((normal, members));
    }
    planes.sort();
    Ok(planes.into_iter().map(|(_, s)| s).collect())
}

fn verify_ovoid(o: &Ovoid) -> Result<()> {
    let f = &o.field;
    let q = f.q() as usize;
    let n = o.points.len();
    if n != q * q + 1 {
        return Err(Error::Internal(format!("ovoid has {n} points, expected {}", q * q + 1)));
    }
    // no line meets the set in three points
    let set: std::collections::HashSet<&ProjPoint> = o.points.iter().collect();
    for i in 0..n {
        for j in i + 1..n {
            let (u, v) = (o.points[i].coords(), o.points[j].coords());
            for t in f.elements().into_iter().skip(1) {
                let w: Vec<FieldElem> = u.iter().zip(v).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect();
                if set.contains(&ProjPoint::new(f, &w)?) {
                    return Err(Error::Internal("three collinear ovoid points".into()));
                }
            }
        }
    }
    if o.planes.len() != q + 1 || o.planes.iter().any(|p| p.len() != q + 1) {
        return Err(Error::Internal("secant planes do not partition the ovoid".into()));
    }
    Ok(())
}

// q = 3: the first n columns, 6 <= n <= 10
const Q3: [[u32; 10]; 4] = [
    [0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 0, 1, 2, 1, 2, 2, 1, 2, 1],
    [0, 0, 1, 0, 2, 0, 2, 2, 1, 1],
    [0, 0, 1, 1, 2, 2, 1, 0, 2, 0],
];
// q = 4 with w = 2, w+1 = 3: the first n columns for n != 7
const Q4: [[u32; 17]; 4] = [
    [0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 0, 1, 2, 3, 1, 2, 3, 2, 2, 3, 1, 2, 1, 3, 3, 1],
    [0, 0, 1, 0, 2, 0, 3, 0, 1, 1, 2, 2, 3, 2, 3, 3, 1],
    [0, 0, 0, 1, 0, 2, 0, 3, 1, 2, 1, 2, 2, 3, 3, 1, 3],
];
const Q4_7: [[u32; 7]; 4] = [
    [0, 1, 1, 1, 1, 1, 1],
    [1, 0, 1, 2, 3, 1, 2],
    [0, 0, 1, 0, 2, 0, 1],
    [0, 0, 0, 1, 0, 2, 2],
];

/// Largest length with pair distance 6 over GF(q).
pub fn max_length(q: u32) -> usize {
    let q = q as usize;
    q * q + 1
}

/// A pair-distance-6 code together with how its columns were found.
#[derive(Clone, Debug)]
pub struct D6Code {
    pub code: LinearCode,
    pub certificate: PairCertificate,
    /// `None` for the fixed small-field matrices.
    pub ordering: Option<OrderedPoints>,
    pub form: Option<QuadricForm>,
}

/// Builds and certifies the `[n, n-4]` code with pair distance 6.
pub fn construct_d6(f: &FieldSpec, n: usize) -> Result<(LinearCode, PairCertificate)> {
    let c = construct_d6_with(f, n, &Limits::default())?;
    Ok((c.code, c.certificate))
}

pub fn construct_d6_with(f: &FieldSpec, n: usize, limits: &Limits) -> Result<D6Code> {
    let q = f.q();
    if q < 3 {
        return Err(Error::OutOfRange(format!("pair distance 6 needs q >= 3, got {q}")));
    }
    if n < 6 {
        return Err(Error::OutOfRange(format!("n = {n} is below the minimum length 6")));
    }
    if n > max_length(q) {
        return Err(Error::OutOfRange(format!("n = {n} exceeds q^2+1 = {}", max_length(q))));
    }
    let (h, ordering, form) = match (q, n) {
        (3, _) => (first_columns(f, &Q3, n)?, None, None),
        (4, 7) => (CodeMatrix::from_codes(f, &Q4_7)?, None, None),
        (4, _) => (first_columns(f, &Q4, n)?, None, None),
        _ => {
            let o = elliptic_quadric(f)?;
            let ord = order_points(&o, n, limits)?;
            let cols: Vec<Vec<FieldElem>> = ord.points.iter().map(|&i| o.points()[i].coords().to_vec()).collect();
            (CodeMatrix::from_columns(f, 4, &cols)?, Some(ord), Some(o.form()))
        }
    };
    let certificate = check_theorem_conditions(&h, 4)?;
    if let Some(v) = &certificate.failure {
        return Err(Error::Internal(format!(
            "pair-distance-6 matrix for q = {q}, n = {n} fails: {v}"
        )));
    }
    Ok(D6Code {
        code: LinearCode::new(h)?,
        certificate,
        ordering,
        form,
    })
}

fn first_columns<const N: usize>(f: &FieldSpec, rows: &[[u32; N]; 4], n: usize) -> Result<CodeMatrix> {
    let cut: Vec<&[u32]> = rows.iter().map(|r| &r[..n]).collect();
    CodeMatrix::from_codes(f, &cut)
}
