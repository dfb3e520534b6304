//! File formats and subcommand logic behind the `sympair` binary.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sympair::d5::{self, XOrder};
use sympair::d6::{self, QuadricForm};
use sympair::ecmds::{self, ECPoint, EllipticCurve, EvalArrangement};
use sympair::gf::prime_power;
use sympair::linalg::rs_parity_check;
use sympair::pairmetric::{certify_cost, certify_parity_check, min_pair_distance_bruteforce, Condition, Violation};
use sympair::{CodeMatrix, FieldElem, FieldSpec, Limits, LinearCode, PairCertificate};

pub const SCHEMA_VERSION: u32 = 1;

/// Above this many rank computations, `verify` checks elliptic and
/// Reed-Solomon files through their provenance instead of the bare matrix.
pub const MATRIX_CHECK_BUDGET: u128 = 5_000_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments, parameters outside every construction, unreadable or
    /// malformed files. Exit status 2.
    #[error("{0}")]
    Usage(String),
    /// The file parsed but its claim does not hold. Exit status 1.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl From<sympair::Error> for CliError {
    fn from(e: sympair::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    D5,
    Ovoid,
    Elliptic,
    Rs,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::D5 => "d5",
            Construction::Ovoid => "ovoid",
            Construction::Elliptic => "elliptic",
            Construction::Rs => "rs",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub route: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependent_witness: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_check: Option<bool>,
    /// Decimal string; the count can exceed 64 bits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_sum_count: Option<String>,
    pub checks_passed: Vec<String>,
}

impl CertificateRecord {
    fn from_certificate(c: &PairCertificate) -> Self {
        let checks: &[&str] = match (&c.ec, c.route) {
            (Some(_), _) => &["ec-generator", "ec-windows"],
            (None, sympair::Route::MdsHamming) => &["row-rank", "all-r-subsets-independent"],
            _ => &[
                "cyclic-windows-independent",
                "small-subsets-independent",
                "dependent-set-exists",
            ],
        };
        CertificateRecord {
            route: c.route.as_str().to_string(),
            dependent_witness: c.dependent_witness.clone(),
            window_check: c.ec.as_ref().map(|e| e.window_check),
            subset_sum_count: c.ec.as_ref().map(|e| e.subset_sum_count.to_string()),
            checks_passed: checks.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    D5 {
        /// The field-element order used for the blocks; absent for the fixed
        /// q = 2 and q = 4 matrices.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x_order: Option<Vec<u32>>,
    },
    Ovoid {
        /// `odd`: x1 x0 + y^2 - c z^2; `even`: x1 x0 + y^2 + yz + c z^2.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        form: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ordering: Option<String>,
    },
    Elliptic {
        /// `[a1, a2, a3, a4, a6]`.
        curve: [u32; 5],
        k: usize,
        /// Affine evaluation points `(x, y)` in column order.
        points: Vec<[u32; 2]>,
    },
    Rs,
}

/// A self-contained, re-verifiable code description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub schema_version: u32,
    pub q: u32,
    pub p: u32,
    pub a: u32,
    /// Constant term first, monic.
    pub modulus: Vec<u32>,
    pub n: usize,
    pub d_pair: usize,
    pub k: usize,
    pub construction: Construction,
    /// Row-major element codes.
    pub parity_check: Vec<Vec<u32>>,
    pub certificate: CertificateRecord,
    pub provenance: Provenance,
}

impl CodeFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("code files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed code file: {e}")))
    }
}

fn field(q: u32) -> CliResult<FieldSpec> {
    if prime_power(q).is_none() {
        return Err(CliError::Usage(format!("q = {q} is not a prime power")));
    }
    Ok(FieldSpec::of_order(q)?)
}

fn assemble(
    f: &FieldSpec,
    d_pair: usize,
    construction: Construction,
    code: &LinearCode,
    cert: &PairCertificate,
    provenance: Provenance,
) -> CodeFile {
    CodeFile {
        schema_version: SCHEMA_VERSION,
        q: f.q(),
        p: f.p(),
        a: f.a(),
        modulus: f.modulus().to_vec(),
        n: code.length(),
        d_pair,
        k: code.dimension(),
        construction,
        parity_check: code.parity_check().to_codes(),
        certificate: CertificateRecord::from_certificate(cert),
        provenance,
    }
}

fn form_record(form: QuadricForm) -> (String, u32) {
    match form {
        QuadricForm::Odd { c } => ("odd".to_string(), c.code()),
        QuadricForm::Even { c } => ("even".to_string(), c.code()),
    }
}

/// Builds the code for `(q, n, d_pair)`: pair distance 5 and 6 from their
/// dedicated families, larger distances from Reed-Solomon codes when
/// `n <= q + 1` and from elliptic curves otherwise.
pub fn construct(q: u32, n: usize, d_pair: usize, limits: &Limits) -> CliResult<CodeFile> {
    let f = field(q)?;
    match d_pair {
        0..=4 => Err(CliError::Usage(format!("pair distance {d_pair} is below 5"))),
        5 => {
            let (code, cert) = d5::construct_d5(&f, n)?;
            let x_order =
                (q != 2 && q != 4).then(|| XOrder::standard(&f).as_slice().iter().map(|x| x.code()).collect());
            Ok(assemble(
                &f,
                5,
                Construction::D5,
                &code,
                &cert,
                Provenance::D5 { x_order },
            ))
        }
        6 => {
            let c = d6::construct_d6_with(&f, n, limits)?;
            let (form, cc) = match c.form.map(form_record) {
                Some((s, c)) => (Some(s), Some(c)),
                None => (None, None),
            };
            let prov = Provenance::Ovoid {
                form,
                c: cc,
                ordering: c.ordering.as_ref().map(|o| o.source.as_str().to_string()),
            };
            Ok(assemble(&f, 6, Construction::Ovoid, &c.code, &c.certificate, prov))
        }
        _ if n <= q as usize + 1 => {
            if d_pair > n {
                return Err(CliError::Usage(format!("pair distance {d_pair} exceeds n = {n}")));
            }
            let h = rs_parity_check(&f, n, d_pair - 2)?;
            let cert = certify_parity_check(&h)?;
            if let Some(v) = &cert.failure {
                return Err(CliError::Verification(v.to_string()));
            }
            Ok(assemble(
                &f,
                d_pair,
                Construction::Rs,
                &LinearCode::new(h)?,
                &cert,
                Provenance::Rs,
            ))
        }
        _ => {
            let c = ecmds::construct_ec_with(&f, n, d_pair - 2, limits)?;
            let points = c
                .arrangement
                .points
                .iter()
                .map(|p| match p {
                    ECPoint::Affine(x, y) => [x.code(), y.code()],
                    ECPoint::Infinity => unreachable!("evaluation points are affine"),
                })
                .collect();
            let prov = Provenance::Elliptic {
                curve: c.arrangement.curve.coefficients().map(|x| x.code()),
                k: c.arrangement.k,
                points,
            };
            Ok(assemble(
                &f,
                d_pair,
                Construction::Elliptic,
                &c.code,
                &c.certificate,
                prov,
            ))
        }
    }
}

/// Outcome of [`verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub route: String,
    /// How the certificate was recomputed: `matrix` or `provenance`.
    pub basis: &'static str,
    pub failure: Option<Violation>,
    /// Brute-force pair distance, when the oracle ran.
    pub oracle: Option<usize>,
    /// Set when the oracle was requested but the code is too large.
    pub oracle_skipped: bool,
}

impl Verdict {
    pub fn verified(&self) -> bool {
        self.failure.is_none()
    }
}

fn parse_matrix(file: &CodeFile) -> CliResult<(FieldSpec, CodeMatrix)> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::Usage(format!(
            "unsupported schema_version {}",
            file.schema_version
        )));
    }
    let f = FieldSpec::with_modulus(file.p, &file.modulus)?;
    if f.q() != file.q || f.a() != file.a {
        return Err(CliError::Usage(format!(
            "q = {} does not match p = {}, modulus degree {}",
            file.q,
            file.p,
            f.a()
        )));
    }
    let rows = &file.parity_check;
    if rows.is_empty() || rows.iter().any(|r| r.len() != file.n) {
        return Err(CliError::Usage(format!(
            "parity_check must be a non-empty grid with n = {} columns",
            file.n
        )));
    }
    if let Some(&bad) = rows.iter().flatten().find(|&&c| c >= file.q) {
        return Err(CliError::Usage(format!(
            "matrix entry {bad} is not below q = {}",
            file.q
        )));
    }
    let h = CodeMatrix::from_codes(&f, rows)?;
    Ok((f, h))
}

fn fail(condition: Condition, witness: Vec<usize>) -> Option<Violation> {
    Some(Violation { condition, witness })
}

fn elliptic_arrangement(f: &FieldSpec, curve: &[u32; 5], k: usize, points: &[[u32; 2]]) -> CliResult<EvalArrangement> {
    let coeffs = curve.map(FieldElem);
    if coeffs.iter().any(|&c| !f.contains(c)) {
        return Err(CliError::Usage("curve coefficient out of range".to_string()));
    }
    let curve = EllipticCurve::new(f, coeffs)?;
    let points: Vec<ECPoint> = points
        .iter()
        .map(|&[x, y]| ECPoint::Affine(FieldElem(x), FieldElem(y)))
        .collect();
    Ok(EvalArrangement { curve, points, k })
}

/// Checks provenance points before handing them to the algebraic verifier.
fn bad_points(a: &EvalArrangement) -> Option<Vec<usize>> {
    let mut seen = std::collections::HashMap::new();
    for (i, p) in a.points.iter().enumerate() {
        if !a.curve.contains(p) {
            return Some(vec![i]);
        }
        if let Some(j) = seen.insert(*p, i) {
            return Some(vec![j, i]);
        }
    }
    None
}

/// Recomputes the certificate of `file`. Pair distances 5 and 6, and any file
/// whose matrix check fits [`MATRIX_CHECK_BUDGET`], are judged from the
/// matrix alone; larger elliptic and Reed-Solomon files are re-derived from
/// their provenance. With `oracle`, codes of at most `cap` words are also
/// enumerated.
pub fn verify(file: &CodeFile, oracle: bool, cap: u128) -> CliResult<Verdict> {
    verify_with_budget(file, oracle, cap, MATRIX_CHECK_BUDGET)
}

fn verify_with_budget(file: &CodeFile, oracle: bool, cap: u128, budget: u128) -> CliResult<Verdict> {
    let (f, h) = parse_matrix(file)?;
    let mut v = Verdict {
        route: String::new(),
        basis: "matrix",
        failure: None,
        oracle: None,
        oracle_skipped: false,
    };
    let r = h.rows();
    if file.d_pair < 5 || r + 2 != file.d_pair || file.k + r != file.n {
        return Err(CliError::Usage(format!(
            "shape mismatch: {r} parity rows, n = {}, k = {}, d_pair = {}",
            file.n, file.k, file.d_pair
        )));
    }
    let matrix_only =
        matches!(file.construction, Construction::D5 | Construction::Ovoid) || certify_cost(r, file.n) <= budget;
    if matrix_only {
        let c = certify_parity_check(&h)?;
        v.route = c.route.as_str().to_string();
        v.failure = c.failure;
    } else {
        v.basis = "provenance";
        match (&file.provenance, file.construction) {
            (Provenance::Elliptic { curve, k, points }, Construction::Elliptic) => {
                v.route = sympair::Route::EcAlgebraic.as_str().to_string();
                if *k != file.k || points.len() != file.n {
                    return Err(CliError::Usage(
                        "elliptic provenance does not match n and k".to_string(),
                    ));
                }
                let a = elliptic_arrangement(&f, curve, *k, points)?;
                v.failure = match bad_points(&a) {
                    Some(w) => fail(Condition::EcGenerator, w),
                    None => ecmds::certify_ec(&a, &h)?.failure,
                };
            }
            (Provenance::Rs, Construction::Rs) => {
                v.route = sympair::Route::MdsHamming.as_str().to_string();
                if h != rs_parity_check(&f, file.n, r)? {
                    v.failure = fail(Condition::SmallSubsets, vec![]);
                }
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "provenance does not match construction {}",
                    file.construction.as_str()
                )))
            }
        }
    }
    if oracle && v.failure.is_none() {
        let code = LinearCode::new(h)?;
        if code.size() <= cap {
            let d = min_pair_distance_bruteforce(&code, cap)?;
            v.oracle = Some(d);
            if d != file.d_pair {
                v.failure = fail(Condition::BruteForce, vec![d]);
            }
        } else {
            v.oracle_skipped = true;
        }
    }
    Ok(v)
}

/// One line of a `table` sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub q: u32,
    pub n: usize,
    pub d_pair: usize,
    pub k: usize,
    pub route: String,
    pub verified: bool,
    pub millis: u128,
}

pub const TABLE_HEADER: &str = "q,n,d_pair,k,route,verified,millis";

impl TableRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.q, self.n, self.d_pair, self.k, self.route, self.verified, self.millis
        )
    }
}

/// The lengths `construct` accepts for `(q, d_pair)`.
pub fn feasible_lengths(q: u32, d_pair: usize) -> CliResult<std::ops::RangeInclusive<usize>> {
    let f = field(q)?;
    let qs = q as usize;
    match d_pair {
        0..=4 => Err(CliError::Usage(format!("pair distance {d_pair} is below 5"))),
        5 => Ok(5..=d5::max_length(q)),
        6 if q < 3 => Err(CliError::Usage(format!("pair distance 6 needs q >= 3, got {q}"))),
        6 => Ok(6..=d6::max_length(q)),
        _ => {
            if f.q() > ecmds::MAX_SEARCH_Q {
                return Err(CliError::Usage(format!(
                    "curve search supports q <= {}, got {q}",
                    ecmds::MAX_SEARCH_Q
                )));
            }
            let top = (qs + 1).max(ecmds::n_max(&f).saturating_sub(3));
            if d_pair > top {
                return Err(CliError::Usage(format!(
                    "pair distance {d_pair} exceeds the longest length {top}"
                )));
            }
            Ok(d_pair..=top)
        }
    }
}

/// Constructs and verifies every feasible length; rows come back sorted by `n`.
pub fn table(q: u32, d_pair: usize, limits: &Limits) -> CliResult<Vec<TableRow>> {
    let lengths: Vec<usize> = feasible_lengths(q, d_pair)?.collect();
    let mut rows: Vec<TableRow> = lengths
        .into_par_iter()
        .map(|n| {
            let start = Instant::now();
            let built = construct(q, n, d_pair, limits);
            let (k, route, verified) = match built {
                Ok(file) => match verify(&file, false, 0) {
                    Ok(v) => (file.k, v.route.clone(), v.verified()),
                    Err(_) => (file.k, file.certificate.route.clone(), false),
                },
                Err(_) => (n + 2 - d_pair, "none".to_string(), false),
            };
            TableRow {
                q,
                n,
                d_pair,
                k,
                route,
                verified,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    rows.sort_by_key(|r| r.n);
    Ok(rows)
}

/// Result of `ec-search`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveReport {
    pub q: u32,
    pub coefficients: [u32; 5],
    pub points: usize,
    pub n_max: usize,
}

pub fn ec_search(q: u32) -> CliResult<CurveReport> {
    let f = field(q)?;
    let c = ecmds::find_maximal_curve(&f)?;
    Ok(CurveReport {
        q,
        coefficients: c.coefficients().map(|x| x.code()),
        points: c.count_points(),
        n_max: ecmds::n_max(&f),
    })
}
