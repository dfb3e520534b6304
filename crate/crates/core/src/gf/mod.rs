//! Arithmetic in GF(p^a) with a fixed polynomial basis.
//!
//! An element is stored as its integer code: the base-`p` digits of the code
//! are the coefficients of the element in the basis `1, x, x^2, ...`, with
//! digit `i` the coefficient of `x^i`. Code 0 is zero and code 1 is one. For
//! every `(p, a)` with `a >= 2` the modulus comes from an embedded table (see
//! [`table`]), so emitted matrices are reproducible bit for bit.
//!
//! The embedded table can be replaced by a file named in the
//! `SYMPAIR_GF_TABLE` environment variable. Each non-empty line not starting
//! with `#` reads `p a c0 c1 ... ca`, the coefficients of a monic irreducible
//! polynomial of degree `a` listed from the constant term upwards.
//!
//! ```
//! use sympair::gf::{FieldSpec, FieldElem};
//!
//! let f = FieldSpec::new(2, 2).unwrap();
//! let w = FieldElem(2);
//! assert_eq!(f.mul(w, w), FieldElem(3));
//! ```

mod poly;
pub(crate) mod table;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub use poly::{is_irreducible, is_prime};

/// Name of the environment variable that points at a replacement polynomial table.
pub const TABLE_ENV: &str = "SYMPAIR_GF_TABLE";

/// Largest supported field size.
pub const MAX_Q: u32 = 1 << 16;

/// A field element, identified by its code in `0..q`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of irreducible moduli keyed by `(p, a)`.
#[derive(Clone, Debug, Default)]
pub struct PolyTable {
    entries: HashMap<(u32, u32), Vec<u32>>,
}

impl PolyTable {
    /// The table compiled into the crate.
    pub fn embedded() -> Self {
        let entries = table::IRREDUCIBLE
            .iter()
            .map(|&(p, a, c)| ((p, a), c.to_vec()))
            .collect();
        PolyTable { entries }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidTable(format!("line {}: {e}", lineno + 1)))?;
            if nums.len() < 4 {
                return Err(Error::InvalidTable(format!("line {}: too short", lineno + 1)));
            }
            let (p, a) = (nums[0], nums[1]);
            let coeffs = nums[2..].to_vec();
            if coeffs.len() != a as usize + 1 {
                return Err(Error::InvalidTable(format!(
                    "line {}: expected {} coefficients",
                    lineno + 1,
                    a + 1
                )));
            }
            entries.insert((p, a), coeffs);
        }
        Ok(PolyTable { entries })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::InvalidTable(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, p: u32, a: u32) -> Option<&[u32]> {
        self.entries.get(&(p, a)).map(Vec::as_slice)
    }
}

fn default_table() -> &'static std::result::Result<PolyTable, Error> {
    static TABLE: OnceLock<std::result::Result<PolyTable, Error>> = OnceLock::new();
    TABLE.get_or_init(|| match std::env::var_os(TABLE_ENV) {
        Some(path) => PolyTable::from_file(path),
        None => Ok(PolyTable::embedded()),
    })
}

#[derive(Debug)]
enum AddRule {
    Prime,
    Binary,
    Table(Vec<u16>),
    Digits,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    a: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1), g the least primitive element.
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] unused.
    log: Vec<u32>,
    add: AddRule,
}

/// A finite field GF(p^a) together with its modulus.
///
/// Cloning is cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("a", &self.inner.a)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// GF(p^a) with the modulus from the active polynomial table.
    pub fn new(p: u32, a: u32) -> Result<Self> {
        let table = default_table().as_ref().map_err(Clone::clone)?;
        Self::from_table(table, p, a)
    }

    pub fn from_table(table: &PolyTable, p: u32, a: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::UnsupportedField { p, a });
        }
        if a == 1 {
            return Self::with_modulus(p, &[0, 1]);
        }
        let m = table.get(p, a).ok_or(Error::UnsupportedField { p, a })?;
        Self::with_modulus(p, m)
    }

    /// The field of size `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, a) = prime_power(q).ok_or(Error::OutOfRange(format!("{q} is not a prime power")))?;
        Self::new(p, a)
    }

    /// GF(p)[x]/(modulus). The modulus is listed constant term first and must
    /// be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let a = modulus.len().saturating_sub(1) as u32;
        if a == 0 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidTable(format!(
                "modulus {modulus:?} is not a monic polynomial over GF({p})"
            )));
        }
        let q = (p as u64).checked_pow(a).filter(|&q| q <= MAX_Q as u64);
        let q = q.ok_or(Error::UnsupportedField { p, a })? as u32;
        if a > 1 && !is_irreducible(p, modulus) {
            return Err(Error::InvalidTable(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        Ok(Self::build(p, a, q, modulus.to_vec()))
    }

    fn build(p: u32, a: u32, q: u32, modulus: Vec<u32>) -> Self {
        let slow = SlowMul {
            p,
            a,
            modulus: &modulus,
        };
        // least element of order q-1
        let mut gen = 1u32;
        if q > 2 {
            gen = (2..q)
                .find(|&g| slow.order(g, q) == q - 1)
                .expect("every finite field has a primitive element");
        }
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().enumerate().take(n.max(1)) {
            *e = x;
            log[x as usize] = i as u32;
            x = slow.mul(x, gen);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        let add = if a == 1 {
            AddRule::Prime
        } else if p == 2 {
            AddRule::Binary
        } else if q <= 2048 {
            let mut t = vec![0u16; (q * q) as usize];
            for x in 0..q {
                for y in 0..q {
                    t[(x * q + y) as usize] = digit_add(x, y, p, a) as u16;
                }
            }
            AddRule::Table(t)
        } else {
            AddRule::Digits
        };
        FieldSpec {
            inner: Arc::new(Inner {
                p,
                a,
                q,
                modulus,
                exp,
                log,
                add,
            }),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn a(&self) -> u32 {
        self.inner.a
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub fn contains(&self, x: FieldElem) -> bool {
        x.0 < self.inner.q
    }

    #[inline]
    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let s = &*self.inner;
        FieldElem(match &s.add {
            AddRule::Prime => {
                let t = x.0 + y.0;
                if t >= s.p {
                    t - s.p
                } else {
                    t
                }
            }
            AddRule::Binary => x.0 ^ y.0,
            AddRule::Table(t) => t[(x.0 * s.q + y.0) as usize] as u32,
            AddRule::Digits => digit_add(x.0, y.0, s.p, s.a),
        })
    }

    #[inline]
    pub fn neg(&self, x: FieldElem) -> FieldElem {
        let s = &*self.inner;
        if s.p == 2 || x.0 == 0 {
            return x;
        }
        if s.a == 1 {
            return FieldElem(s.p - x.0);
        }
        let mut v = x.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..s.a {
            let d = v % s.p;
            out += ((s.p - d) % s.p) * place;
            v /= s.p;
            place *= s.p;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.0 == 0 || y.0 == 0 {
            return FieldElem::ZERO;
        }
        let s = &*self.inner;
        let i = s.log[x.0 as usize] + s.log[y.0 as usize];
        FieldElem(s.exp[i as usize])
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let s = &*self.inner;
        let l = s.log[x.0 as usize];
        let n = s.q - 1;
        Ok(FieldElem(s.exp[((n - l) % n.max(1)) as usize]))
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if x.0 == 0 {
            return FieldElem::ZERO;
        }
        let s = &*self.inner;
        let n = (s.q - 1) as u64;
        let l = s.log[x.0 as usize] as u64 * (e % n) % n;
        FieldElem(s.exp[l as usize])
    }

    /// The least code whose multiplicative order is `q - 1`.
    pub fn primitive_element(&self) -> FieldElem {
        FieldElem(self.inner.exp[1 % self.inner.exp.len()])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElem) -> Result<u32> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.inner.q - 1;
        let l = self.inner.log[x.0 as usize];
        Ok(n / gcd(n, l))
    }

    /// All elements in ascending code order.
    pub fn elements(&self) -> Vec<FieldElem> {
        (0..self.inner.q).map(FieldElem).collect()
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(self.inner.p as i64) as u32)
    }

    /// Absolute trace to GF(p).
    pub fn trace(&self, x: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for _ in 0..self.inner.a {
            acc = self.add(acc, y);
            y = self.pow(y, self.inner.p as u64);
        }
        acc
    }

    pub fn is_square(&self, x: FieldElem) -> bool {
        if x.0 == 0 || self.inner.p == 2 {
            return true;
        }
        self.inner.log[x.0 as usize].is_multiple_of(2)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn digit_add(mut x: u32, mut y: u32, p: u32, a: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..a {
        out += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        place *= p;
    }
    out
}

/// `(p, a)` with `p^a == q`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut a) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

/// Polynomial-basis multiplication straight from the modulus; only used to
/// bootstrap the log tables.
struct SlowMul<'a> {
    p: u32,
    a: u32,
    modulus: &'a [u32],
}

impl SlowMul<'_> {
    fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.a)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        let (dx, dy) = (self.digits(x), self.digits(y));
        let mut prod = vec![0u32; 2 * self.a as usize];
        for (i, &u) in dx.iter().enumerate() {
            for (j, &v) in dy.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        let r = poly::rem(&prod, self.modulus, self.p);
        r.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn order(&self, g: u32, q: u32) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, g);
            k += 1;
            if k > q {
                return 0;
            }
        }
        k
    }
}
