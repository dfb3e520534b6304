//! MDS symbol-pair codes from evaluation codes on maximal elliptic curves.
//!
//! The code is `C_L(D, kO)`: the functions with a pole of order at most `k`
//! at infinity, evaluated at an ordered list `D` of affine points. If no `k`
//! cyclically consecutive points of `D` sum to `O`, the pair distance is
//! `n - k + 2`.

mod arrange;
mod curve;

pub use arrange::{arrange, first_zero_window, layout, subset_sum_count, window_check, EvalArrangement, LayoutCase};
pub use curve::{ec_add, ec_points, ECPoint, EllipticCurve, Group};

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldSpec};
use crate::linalg::{CodeMatrix, LinearCode};
use crate::pairmetric::{Condition, EcEvidence, PairCertificate, Route, Violation};
use crate::Limits;

/// Integer square root, exact.
pub fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// The largest number of rational points of an elliptic curve over GF(q).
pub fn n_max(f: &FieldSpec) -> usize {
    let q = f.q() as u64;
    let m = isqrt(4 * q);
    let (p, a) = (f.p() as u64, f.a());
    let delta = if a >= 3 && a % 2 == 1 && m.is_multiple_of(p) {
        0
    } else {
        1
    };
    (q + m + delta) as usize
}

/// Largest supported field for [`find_maximal_curve`].
pub const MAX_SEARCH_Q: u32 = 1 << 10;

/// The first curve with [`n_max`] points in a fixed scan order: for `p >= 5`
/// `y^2 = x^3 + ax + b` over ascending `(a, b)`; for `p = 3`
/// `y^2 = x^3 + a2 x^2 + a4 x + a6` over ascending `(a2, a4, a6)`; for
/// `p = 2` first `y^2 + xy = x^3 + a2 x^2 + a6` over `(a2, a6)`, then
/// `y^2 + a3 y = x^3 + a4 x + a6` over `(a3, a4, a6)`.
pub fn find_maximal_curve(f: &FieldSpec) -> Result<EllipticCurve> {
    if f.q() > MAX_SEARCH_Q {
        return Err(Error::OutOfRange(format!(
            "curve search supports q <= {MAX_SEARCH_Q}, got {}",
            f.q()
        )));
    }
    let target = n_max(f);
    let els = f.elements();
    let z = FieldElem::ZERO;
    let mut candidates: Box<dyn Iterator<Item = [FieldElem; 5]>> = match f.p() {
        2 => {
            let ord = els.clone().into_iter().flat_map({
                let els = els.clone();
                move |a2| els.clone().into_iter().map(move |a6| [FieldElem::ONE, a2, z, z, a6])
            });
            let sup = els.clone().into_iter().flat_map({
                let els = els.clone();
                move |a3| {
                    let els2 = els.clone();
                    els.clone()
                        .into_iter()
                        .flat_map(move |a4| els2.clone().into_iter().map(move |a6| [z, z, a3, a4, a6]))
                }
            });
            Box::new(ord.chain(sup))
        }
        3 => Box::new(els.clone().into_iter().flat_map({
            let els = els.clone();
            move |a2| {
                let els2 = els.clone();
                els.clone()
                    .into_iter()
                    .flat_map(move |a4| els2.clone().into_iter().map(move |a6| [z, a2, z, a4, a6]))
            }
        })),
        _ => Box::new(els.clone().into_iter().flat_map({
            let els = els.clone();
            move |a| els.clone().into_iter().map(move |b| [z, z, z, a, b])
        })),
    };
    let roots = curve::RootTable::new(f);
    candidates
        .find_map(|c| {
            let e = EllipticCurve::new(f, c).ok()?;
            (e.count_points_with(&roots) == target).then_some(e)
        })
        .ok_or_else(|| Error::Internal(format!("no curve over GF({}) with {target} points", f.q())))
}

/// A monomial `x^x_pow * y^y_pow`, with pole order `2 x_pow + 3 y_pow` at `O`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RrFunction {
    pub x_pow: u32,
    pub y_pow: u32,
}

impl RrFunction {
    pub fn pole_order(&self) -> u32 {
        2 * self.x_pow + 3 * self.y_pow
    }

    pub fn eval(&self, f: &FieldSpec, x: FieldElem, y: FieldElem) -> FieldElem {
        f.mul(f.pow(x, self.x_pow as u64), f.pow(y, self.y_pow as u64))
    }
}

/// A basis of `L(kO)`: `1` and one monomial for each pole order `2..=k`.
pub fn rr_basis(k: usize) -> Vec<RrFunction> {
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return out;
    }
    out.push(RrFunction { x_pow: 0, y_pow: 0 });
    for m in 2..=k as u32 {
        out.push(if m % 2 == 0 {
            RrFunction { x_pow: m / 2, y_pow: 0 }
        } else {
            RrFunction {
                x_pow: (m - 3) / 2,
                y_pow: 1,
            }
        });
    }
    out
}

/// The `k x n` evaluation matrix of [`rr_basis`] at the arranged points.
pub fn generator_matrix(a: &EvalArrangement) -> Result<CodeMatrix> {
    let f = a.curve.field();
    let basis = rr_basis(a.k);
    let mut rows = Vec::with_capacity(a.k);
    for func in &basis {
        let mut row = Vec::with_capacity(a.points.len());
        for p in &a.points {
            let ECPoint::Affine(x, y) = *p else {
                return Err(Error::Internal("the point at infinity cannot be evaluated".into()));
            };
            row.push(func.eval(f, x, y).0);
        }
        rows.push(row);
    }
    let g = CodeMatrix::from_codes(f, &rows)?;
    if g.rank() != a.k {
        return Err(Error::Internal(format!(
            "evaluation matrix has rank {} < k = {}",
            g.rank(),
            a.k
        )));
    }
    Ok(g)
}

/// A constructed elliptic-curve code with everything needed to re-verify it.
#[derive(Clone, Debug)]
pub struct EcCode {
    pub code: LinearCode,
    pub certificate: PairCertificate,
    pub arrangement: EvalArrangement,
}

fn check_params(f: &FieldSpec, n: usize, d: usize) -> Result<()> {
    let nm = n_max(f);
    if d + 2 < 7 {
        return Err(Error::OutOfRange(format!("pair distance d+2 = {} is below 7", d + 2)));
    }
    if d + 2 > n {
        return Err(Error::OutOfRange(format!(
            "pair distance d+2 = {} exceeds n = {n}",
            d + 2
        )));
    }
    if n + 3 > nm {
        return Err(Error::OutOfRange(format!(
            "n = {n} exceeds N(q)-3 = {}",
            nm.saturating_sub(3)
        )));
    }
    Ok(())
}

/// Builds and certifies an `[n, n-d]` code with pair distance `d + 2`.
pub fn construct_ec(f: &FieldSpec, n: usize, d: usize) -> Result<(LinearCode, PairCertificate)> {
    let c = construct_ec_with(f, n, d, &Limits::default())?;
    Ok((c.code, c.certificate))
}

pub fn construct_ec_with(f: &FieldSpec, n: usize, d: usize, limits: &Limits) -> Result<EcCode> {
    check_params(f, n, d)?;
    let curve = find_maximal_curve(f)?;
    let arrangement = arrange(&curve, n, n - d, limits)?;
    let g = generator_matrix(&arrangement)?;
    let code = LinearCode::from_generator(&g)?;
    let certificate = certify_ec(&arrangement, code.parity_check())?;
    if let Some(v) = &certificate.failure {
        return Err(Error::Internal(format!("elliptic-curve code fails: {v}")));
    }
    Ok(EcCode {
        code,
        certificate,
        arrangement,
    })
}

/// Checks that `h` is a parity check for the evaluation code of `a` and that
/// the arrangement has no `k` consecutive points summing to `O`.
pub fn certify_ec(a: &EvalArrangement, h: &CodeMatrix) -> Result<PairCertificate> {
    let n = a.points.len();
    let mut cert = PairCertificate {
        q: a.curve.field().q(),
        n,
        d_pair: n - a.k + 2,
        dim_exponent: a.k,
        route: Route::EcAlgebraic,
        dependent_witness: None,
        ec: None,
        failure: None,
    };
    let g = generator_matrix(a)?;
    if h.cols() != n || h.rows() + a.k != n || h.rank() != h.rows() || !g.mul_transpose(h)?.is_zero() {
        cert.failure = Some(Violation {
            condition: Condition::EcGenerator,
            witness: vec![],
        });
        return Ok(cert);
    }
    let zero = first_zero_window(a);
    cert.ec = Some(EcEvidence {
        window_check: zero.is_none(),
        subset_sum_count: subset_sum_count(a),
    });
    if let Some(w) = zero {
        cert.failure = Some(Violation {
            condition: Condition::EcWindows,
            witness: (0..a.k).map(|j| (w + j) % n).collect(),
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    #[test]
    fn n_max_examples() {
        let expect = [(5, 10), (7, 13), (8, 14), (9, 16), (11, 18), (13, 21), (128, 150)];
        for (q, n) in expect {
            assert_eq!(n_max(&gf(q)), n, "q = {q}");
        }
        assert_eq!(isqrt(512), 22);
        assert_eq!(isqrt(u32::MAX as u64 * 4), 131071);
    }

    #[test]
    fn basis_examples() {
        assert_eq!(rr_basis(1), vec![RrFunction { x_pow: 0, y_pow: 0 }]);
        let orders: Vec<u32> = rr_basis(5).iter().map(|b| b.pole_order()).collect();
        assert_eq!(orders, vec![0, 2, 3, 4, 5]);
        let b = rr_basis(5);
        assert_eq!((b[2].x_pow, b[2].y_pow), (0, 1));
        assert_eq!((b[4].x_pow, b[4].y_pow), (1, 1));
        for k in 1..30 {
            assert_eq!(rr_basis(k).len(), k);
        }
    }

    #[test]
    fn maximal_curves() {
        for q in [5, 7, 8, 9, 11, 13] {
            let f = gf(q);
            let c = find_maximal_curve(&f).unwrap();
            assert!(!c.discriminant().is_zero());
            assert_eq!(ec_points(&c).len(), n_max(&f));
        }
    }

    #[test]
    fn basis_is_independent_on_points() {
        // evaluation rank k on a curve with at least k + 1 points
        let f = gf(11);
        let c = find_maximal_curve(&f).unwrap();
        let pts: Vec<ECPoint> = ec_points(&c).into_iter().skip(1).collect();
        for k in 1..pts.len() {
            let a = EvalArrangement {
                curve: c.clone(),
                points: pts.clone(),
                k,
            };
            assert_eq!(generator_matrix(&a).unwrap().rank(), k);
        }
    }

    #[test]
    fn pipeline_q11() {
        let f = gf(11);
        let (code, cert) = construct_ec(&f, 15, 10).unwrap();
        assert_eq!(code.dimension(), 5);
        assert_eq!(cert.d_pair, 12);
        assert_eq!(cert.route, Route::EcAlgebraic);
        assert!(cert.verified());
        assert!(cert.ec.unwrap().window_check);
    }

    #[test]
    fn parameter_errors() {
        let f = gf(11);
        assert!(construct_ec(&f, 16, 10).is_err());
        assert!(construct_ec(&f, 10, 4).is_err());
        assert!(construct_ec(&f, 8, 7).is_err());
        assert!(find_maximal_curve(&gf(2048)).is_err());
    }

    #[test]
    fn corrupted_parity_check_is_rejected() {
        let f = gf(7);
        let c = construct_ec_with(&f, 9, 6, &Limits::default()).unwrap();
        let mut h = c.code.parity_check().clone();
        let v = h.get(0, 0);
        h.set(0, 0, f.add(v, FieldElem::ONE)).unwrap();
        let cert = certify_ec(&c.arrangement, &h).unwrap();
        assert_eq!(cert.failure.unwrap().condition, Condition::EcGenerator);
    }
}
