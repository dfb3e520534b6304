//! Dense polynomials over GF(p), coefficient vectors stored low degree first.

/// Remainder of `num` modulo the monic-or-not polynomial `den` over GF(p).
pub(crate) fn rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = num.to_vec();
    let dlen = trimmed_len(den);
    assert!(dlen > 0, "division by the zero polynomial");
    let lead_inv = inv_mod(den[dlen - 1], p);
    loop {
        let rlen = trimmed_len(&r);
        if rlen < dlen {
            r.truncate(rlen);
            return r;
        }
        let c = r[rlen - 1] * lead_inv % p;
        let shift = rlen - dlen;
        for (i, &d) in den[..dlen].iter().enumerate() {
            let sub = c * d % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
    }
}

fn trimmed_len(v: &[u32]) -> usize {
    v.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1)
}

pub(crate) fn inv_mod(x: u32, p: u32) -> u32 {
    // p is prime, so x^(p-2) is the inverse.
    pow_mod(x, p - 2, p)
}

pub(crate) fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let m = p as u64;
    let mut base = b as u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `code`.
pub(crate) fn monic_from_code(p: u32, deg: u32, mut code: u64) -> Vec<u32> {
    let mut v = Vec::with_capacity(deg as usize + 1);
    for _ in 0..deg {
        v.push((code % p as u64) as u32);
        code /= p as u64;
    }
    v.push(1);
    v
}

/// Irreducibility over GF(p) by trial division with every monic polynomial
/// of degree at most half the degree of `f`.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = match trimmed_len(f) {
        0 | 1 => return false,
        l => (l - 1) as u32,
    };
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d);
        for code in 0..count {
            let g = monic_from_code(p, d, code);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
