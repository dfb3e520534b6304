//! Weierstrass curves, their rational points and the chord-tangent group law.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, nonsingular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    field: FieldSpec,
    a: [FieldElem; 5],
}

/// A rational point; `Infinity` is the identity `O` and sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ECPoint {
    Infinity,
    Affine(FieldElem, FieldElem),
}

impl EllipticCurve {
    /// Coefficients in the order `a1, a2, a3, a4, a6`.
    pub fn new(f: &FieldSpec, a: [FieldElem; 5]) -> Result<Self> {
        if a.iter().any(|&c| !f.contains(c)) {
            return Err(Error::OutOfRange("curve coefficient outside the field".into()));
        }
        let c = EllipticCurve { field: f.clone(), a };
        if c.discriminant().is_zero() {
            return Err(Error::OutOfRange("singular curve: discriminant is zero".into()));
        }
        Ok(c)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coefficients(&self) -> [FieldElem; 5] {
        self.a
    }

    pub fn discriminant(&self) -> FieldElem {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let k = |v: i64| f.from_int(v);
        let m = |x: FieldElem, y: FieldElem| f.mul(x, y);
        let b2 = f.add(m(a1, a1), m(k(4), a2));
        let b4 = f.add(m(k(2), a4), m(a1, a3));
        let b6 = f.add(m(a3, a3), m(k(4), a6));
        let b8 = f.sub(
            f.add(f.add(m(m(a1, a1), a6), m(k(4), m(a2, a6))), m(a2, m(a3, a3))),
            f.add(m(a1, m(a3, a4)), m(a4, a4)),
        );
        let t1 = m(m(b2, b2), b8);
        let t2 = m(k(8), m(b4, m(b4, b4)));
        let t3 = m(k(27), m(b6, b6));
        let t4 = m(k(9), m(b2, m(b4, b6)));
        f.sub(t4, f.add(f.add(t1, t2), t3))
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        let ECPoint::Affine(x, y) = *p else {
            return true;
        };
        let f = &self.field;
        if !f.contains(x) || !f.contains(y) {
            return false;
        }
        let [a1, _, a3, _, _] = self.a;
        let lhs = f.add(f.mul(y, y), f.mul(y, f.add(f.mul(a1, x), a3)));
        lhs == self.rhs(x)
    }

    fn rhs(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        let [_, a2, _, a4, a6] = self.a;
        // ((x + a2) x + a4) x + a6
        f.add(f.mul(f.add(f.mul(f.add(x, a2), x), a4), x), a6)
    }

    pub fn neg(&self, p: &ECPoint) -> ECPoint {
        match *p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => {
                let f = &self.field;
                let [a1, _, a3, _, _] = self.a;
                ECPoint::Affine(x, f.sub(f.neg(y), f.add(f.mul(a1, x), a3)))
            }
        }
    }

    /// Group law without membership checks.
    pub(crate) fn add_unchecked(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (ECPoint::Infinity, r) | (r, ECPoint::Infinity) => return r,
            (ECPoint::Affine(x1, y1), ECPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        if *q == self.neg(p) {
            return ECPoint::Infinity;
        }
        let f = &self.field;
        let [a1, a2, a3, a4, _] = self.a;
        let lambda = if x1 != x2 {
            f.div(f.sub(y2, y1), f.sub(x2, x1)).expect("distinct x")
        } else {
            let num = f.sub(
                f.add(
                    f.add(f.mul(f.from_int(3), f.mul(x1, x1)), f.mul(f.from_int(2), f.mul(a2, x1))),
                    a4,
                ),
                f.mul(a1, y1),
            );
            let den = f.add(f.add(f.mul(f.from_int(2), y1), f.mul(a1, x1)), a3);
            f.div(num, den).expect("P != -P")
        };
        let nu = f.sub(y1, f.mul(lambda, x1));
        let x3 = f.sub(
            f.sub(f.sub(f.add(f.mul(lambda, lambda), f.mul(a1, lambda)), a2), x1),
            x2,
        );
        let y3 = f.sub(f.sub(f.neg(f.mul(f.add(lambda, a1), x3)), nu), a3);
        ECPoint::Affine(x3, y3)
    }

    /// Number of rational points, including `O`.
    pub fn count_points(&self) -> usize {
        self.count_points_with(&RootTable::new(&self.field))
    }

    pub(crate) fn count_points_with(&self, roots: &RootTable) -> usize {
        1 + self
            .field
            .elements()
            .into_iter()
            .map(|x| self.ys_over(x, roots).len())
            .sum::<usize>()
    }

    /// The `y` with `(x, y)` on the curve, ascending.
    fn ys_over(&self, x: FieldElem, roots: &RootTable) -> Vec<FieldElem> {
        let f = &self.field;
        let [a1, _, a3, _, _] = self.a;
        let b = f.add(f.mul(a1, x), a3);
        let c = self.rhs(x);
        let mut ys = if f.p() == 2 {
            if b.is_zero() {
                vec![roots.sqrt(c).expect("squaring is onto in characteristic 2")]
            } else {
                // y = b z with z^2 + z = c / b^2
                let t = f.div(c, f.mul(b, b)).expect("b != 0");
                match roots.artin_schreier(t) {
                    Some(z) => vec![f.mul(b, z), f.mul(b, f.add(z, FieldElem::ONE))],
                    None => vec![],
                }
            }
        } else {
            // (2y + b)^2 = b^2 + 4c
            let disc = f.add(f.mul(b, b), f.mul(f.from_int(4), c));
            let half = f.inv(f.from_int(2)).expect("odd characteristic");
            match roots.sqrt(disc) {
                None => vec![],
                Some(r) if r.is_zero() => vec![f.mul(f.neg(b), half)],
                Some(r) => vec![f.mul(f.sub(r, b), half), f.mul(f.sub(f.neg(r), b), half)],
            }
        };
        ys.sort();
        ys
    }
}

/// Square roots and, in characteristic 2, solutions of `z^2 + z = c`.
pub(crate) struct RootTable {
    sqrt: Vec<Option<FieldElem>>,
    artin_schreier: Vec<Option<FieldElem>>,
}

impl RootTable {
    pub(crate) fn new(f: &FieldSpec) -> Self {
        let q = f.q() as usize;
        let mut sqrt = vec![None; q];
        let mut artin_schreier = vec![None; q];
        for z in f.elements() {
            let s = f.mul(z, z);
            sqrt[s.0 as usize].get_or_insert(z);
            if f.p() == 2 {
                artin_schreier[f.add(s, z).0 as usize].get_or_insert(z);
            }
        }
        RootTable { sqrt, artin_schreier }
    }

    fn sqrt(&self, c: FieldElem) -> Option<FieldElem> {
        self.sqrt[c.0 as usize]
    }

    fn artin_schreier(&self, c: FieldElem) -> Option<FieldElem> {
        self.artin_schreier[c.0 as usize]
    }
}

/// `P + Q` on `c`.
pub fn ec_add(c: &EllipticCurve, p: &ECPoint, q: &ECPoint) -> Result<ECPoint> {
    if !c.contains(p) || !c.contains(q) {
        return Err(Error::OffCurve);
    }
    Ok(c.add_unchecked(p, q))
}

/// `O` followed by the affine points in ascending `(x, y)` order.
pub fn ec_points(c: &EllipticCurve) -> Vec<ECPoint> {
    let roots = RootTable::new(c.field());
    let mut out = vec![ECPoint::Infinity];
    for x in c.field().elements() {
        out.extend(c.ys_over(x, &roots).into_iter().map(|y| ECPoint::Affine(x, y)));
    }
    out
}

/// The group `E(F_q)` with elements numbered as in [`ec_points`], so `O` is 0.
#[derive(Clone, Debug)]
pub struct Group {
    curve: EllipticCurve,
    points: Vec<ECPoint>,
    index: HashMap<ECPoint, usize>,
    table: Option<Vec<u32>>,
    neg: Vec<usize>,
}

const TABLE_LIMIT: usize = 2048;

impl Group {
    pub fn new(c: &EllipticCurve) -> Self {
        let points = ec_points(c);
        let index: HashMap<ECPoint, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let neg = points.iter().map(|p| index[&c.neg(p)]).collect();
        let mut g = Group {
            curve: c.clone(),
            points,
            index,
            table: None,
            neg,
        };
        let n = g.points.len();
        if n <= TABLE_LIMIT {
            let mut t = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    t.push(g.add_slow(i, j) as u32);
                }
            }
            g.table = Some(t);
        }
        g
    }

    fn add_slow(&self, i: usize, j: usize) -> usize {
        self.index[&self.curve.add_unchecked(&self.points[i], &self.points[j])]
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ECPoint] {
        &self.points
    }

    pub fn index_of(&self, p: &ECPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.points.len() + j] as usize,
            None => self.add_slow(i, j),
        }
    }

    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(q: u32, a: [u32; 5]) -> EllipticCurve {
        let f = FieldSpec::of_order(q).unwrap();
        EllipticCurve::new(&f, a.map(FieldElem)).unwrap()
    }

    #[test]
    fn y2_x3_3x_over_gf5() {
        let c = curve(5, [0, 0, 0, 3, 0]);
        let pts = ec_points(&c);
        assert_eq!(pts.len(), 10);
        assert_eq!(pts[0], ECPoint::Infinity);
        let origin = ECPoint::Affine(FieldElem(0), FieldElem(0));
        assert_eq!(c.neg(&origin), origin);
        assert_eq!(ec_add(&c, &origin, &origin).unwrap(), ECPoint::Infinity);
        let per_x: Vec<usize> = (0..5)
            .map(|x| {
                pts.iter()
                    .filter(|p| matches!(p, ECPoint::Affine(px, _) if px.0 == x))
                    .count()
            })
            .collect();
        assert_eq!(per_x, vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn identity_and_inverse() {
        let c = curve(8, [1, 0, 0, 0, 1]);
        for p in ec_points(&c) {
            assert_eq!(ec_add(&c, &p, &ECPoint::Infinity).unwrap(), p);
            assert_eq!(ec_add(&c, &p, &c.neg(&p)).unwrap(), ECPoint::Infinity);
        }
    }

    #[test]
    fn singular_and_off_curve() {
        let f = FieldSpec::of_order(5).unwrap();
        assert!(EllipticCurve::new(&f, [0, 0, 0, 0, 0].map(FieldElem)).is_err());
        let c = curve(5, [0, 0, 0, 3, 0]);
        let off = ECPoint::Affine(FieldElem(0), FieldElem(1));
        assert_eq!(ec_add(&c, &off, &ECPoint::Infinity), Err(Error::OffCurve));
    }

    #[test]
    fn hasse_bound_over_gf7() {
        let f = FieldSpec::of_order(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                if let Ok(c) = EllipticCurve::new(&f, [0, 0, 0, a, b].map(FieldElem)) {
                    let n = ec_points(&c).len();
                    assert!(n <= 7 + 5 + 1);
                    assert_eq!(n, c.count_points());
                }
            }
        }
    }
}
