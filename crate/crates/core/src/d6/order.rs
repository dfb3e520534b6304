//! Ordering ovoid points so that no four cyclically consecutive ones are
//! coplanar.

use std::collections::HashMap;

use super::Ovoid;
use crate::error::{Error, Result};
use crate::Limits;

/// Which procedure produced an ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderSource {
    /// The plane-by-plane greedy procedure with its endgame and wraparound
    /// repairs.
    Primary,
    /// The bounded depth-first search, used when the greedy result fails.
    Backtrack,
}

impl OrderSource {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderSource::Primary => "primary",
            OrderSource::Backtrack => "backtrack",
        }
    }
}

/// Point indices into [`Ovoid::points`], in column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPoints {
    pub points: Vec<usize>,
    pub source: OrderSource,
}

/// Orders `n` points of `o`, starting with `A, B`.
///
/// Needs `q >= 5` odd or `q >= 8` even. The greedy result is re-verified; if
/// it fails, a depth-first search capped at `limits.max_states` nodes takes
/// over.
pub fn order_points(o: &Ovoid, n: usize, limits: &Limits) -> Result<OrderedPoints> {
    let q = o.field().q() as usize;
    let even = o.field().p() == 2;
    if q < 5 || (even && q < 8) {
        return Err(Error::OutOfRange(format!(
            "point ordering needs q >= 5 odd or q >= 8 even, got {q}"
        )));
    }
    if n < 6 || n > q * q + 1 {
        return Err(Error::OutOfRange(format!("n = {n} outside [6, q^2+1 = {}]", q * q + 1)));
    }
    let (found, preference) = primary(o, n);
    if let Some(points) = found {
        if is_valid(o, &points) {
            return Ok(OrderedPoints {
                points,
                source: OrderSource::Primary,
            });
        }
    }
    backtrack(o, n, &preference, limits.max_states).map(|points| OrderedPoints {
        points,
        source: OrderSource::Backtrack,
    })
}

/// True iff no four cyclically consecutive points are coplanar and some
/// secant plane holds four of the points.
pub(crate) fn is_valid(o: &Ovoid, s: &[usize]) -> bool {
    let n = s.len();
    let windows = (0..n).all(|i| !o.coplanar_idx(s[i], s[(i + 1) % n], s[(i + 2) % n], s[(i + 3) % n]));
    windows && has_coplanar_four(o, s)
}

fn has_coplanar_four(o: &Ovoid, s: &[usize]) -> bool {
    let mut count = vec![0usize; o.planes().len()];
    let has_ab = s.contains(&o.a()) && s.contains(&o.b());
    s.iter().filter_map(|&i| o.plane_of(i)).any(|pl| {
        count[pl] += 1;
        count[pl] >= 2 && has_ab
    })
}

struct Builder<'a> {
    o: &'a Ovoid,
    seq: Vec<usize>,
    /// Replacement for the last three points when the order is cut at a
    /// given length that leaves two points of one plane at the end.
    tails: HashMap<usize, [usize; 3]>,
}

impl<'a> Builder<'a> {
    fn new(o: &'a Ovoid) -> Self {
        Builder {
            o,
            seq: vec![o.a(), o.b()],
            tails: HashMap::new(),
        }
    }

    fn last(&self, k: usize) -> usize {
        self.seq[self.seq.len() - k]
    }

    fn is_proper(&self, c: usize) -> bool {
        self.seq.len() < 3 || !self.o.coplanar_idx(self.last(3), self.last(2), self.last(1), c)
    }

    /// Removes and appends the least point of `pool` that is proper and off
    /// every plane spanned by a triple in `avoid`.
    fn take(&mut self, pool: &mut Vec<usize>, avoid: &[[usize; 3]]) -> Option<usize> {
        let pos = pool
            .iter()
            .position(|&c| self.is_proper(c) && avoid.iter().all(|t| !self.o.coplanar_idx(t[0], t[1], t[2], c)))?;
        let c = pool.remove(pos);
        self.seq.push(c);
        Some(c)
    }

    /// Alternates between two planes until the first has one point left,
    /// then places the last two points by the three endgame cases.
    fn pair_block(&mut self, alpha: &mut Vec<usize>, beta: &mut Vec<usize>) -> Option<()> {
        while alpha.len() > 1 {
            self.take(alpha, &[])?;
            self.take(beta, &[])?;
        }
        if alpha.len() != 1 || beta.len() != 1 {
            return None;
        }
        let (pm, qm) = (alpha.pop()?, beta.pop()?);
        let l = self.seq.len();
        if self.is_proper(pm) {
            if !self.o.coplanar_idx(self.last(2), self.last(1), pm, qm) {
                self.seq.extend([pm, qm]);
            } else {
                // ..., Q_{m-3}, P_{m-2}, P_{m-1}, Q_{m-2}, Q_{m-1}, P_m, Q_m
                self.seq.swap(l - 3, l - 2);
                let s = &self.seq;
                self.tails.insert(l - 2, [s[l - 5], s[l - 4], s[l - 2]]);
                self.tails.insert(l, [s[l - 2], s[l - 3], s[l - 1]]);
                self.seq.extend([pm, qm]);
            }
        } else {
            // ..., P_{m-1}, Q_{m-1}, Q_m, P_m
            self.tails.insert(l + 1, [self.seq[l - 2], pm, qm]);
            self.seq.extend([qm, pm]);
        }
        Some(())
    }

    /// All points of the first three planes, finished by the interleave
    /// with the fourth and fifth planes.
    fn triple_block(&mut self, pools: &mut [Vec<usize>]) -> Option<()> {
        let [alpha, beta, gamma, delta, zeta, ..] = pools else {
            return None;
        };
        while alpha.len() > 1 {
            self.take(alpha, &[])?;
            self.take(beta, &[])?;
            self.take(gamma, &[])?;
        }
        let (p, q, r) = (alpha.pop()?, beta.pop()?, gamma.pop()?);
        let (q2, r2) = (self.last(2), self.last(1));
        let s1 = self.take(delta, &[[p, q2, r2]])?;
        self.seq.push(p);
        let t1 = self.take(zeta, &[[p, q, s1]])?;
        self.seq.push(q);
        self.take(delta, &[[q, r, t1]])?;
        self.seq.push(r);
        self.take(zeta, &[])?;
        self.take(delta, &[])?;
        self.take(zeta, &[])?;
        Some(())
    }
}

/// Runs the greedy procedure. Returns the cut and repaired order, if every
/// step succeeded, and a preference list for the fallback search.
fn primary(o: &Ovoid, n: usize) -> (Option<Vec<usize>>, Vec<usize>) {
    let q = o.field().q() as usize;
    let even = o.field().p() == 2;
    let mut pools: Vec<Vec<usize>> = o
        .planes()
        .iter()
        .map(|pl| pl.iter().copied().filter(|&i| i != o.a() && i != o.b()).collect())
        .collect();
    let mut b = Builder::new(o);

    if n % 2 == 1 && n >= 7 && n < 2 * q {
        // odd n ending in the first plane: after A, B, P_1 use planes 2 and 3
        let first = pools[0].remove(0);
        b.seq.push(first);
        let [_, _, gamma, delta, ..] = &mut pools[..] else {
            unreachable!()
        };
        while b.seq.len() < n {
            if b.take(gamma, &[]).is_none() || (b.seq.len() < n && b.take(delta, &[]).is_none()) {
                return (None, preference(o, &b.seq));
            }
        }
        let pref = preference(o, &b.seq);
        return (Some(b.seq), pref);
    }

    let ok = if even && n > q * q - q + 2 {
        b.triple_block(&mut pools).is_some() && pairs(&mut b, &mut pools[3..])
    } else {
        let planes = if even { q } else { q + 1 };
        pairs(&mut b, &mut pools[..planes])
    };
    let pref = preference(o, &b.seq);
    if !ok || b.seq.len() < n {
        return (None, pref);
    }
    let mut s = b.seq[..n].to_vec();
    if let Some(tail) = b.tails.get(&n) {
        s[n - 3..].copy_from_slice(tail);
    }
    if !replace_last_point(o, &mut s) {
        return (None, pref);
    }
    (Some(s), pref)
}

fn pairs(b: &mut Builder, pools: &mut [Vec<usize>]) -> bool {
    pools.chunks_exact_mut(2).all(|c| {
        let (x, y) = c.split_at_mut(1);
        b.pair_block(&mut x[0], &mut y[0]).is_some()
    })
}

/// If `X, Y, Z, A` are coplanar, swaps `Z` for the least unused point of its
/// plane off the planes `WXY` and `XYA`.
fn replace_last_point(o: &Ovoid, s: &mut [usize]) -> bool {
    let n = s.len();
    let (w, x, y, z) = (s[n - 4], s[n - 3], s[n - 2], s[n - 1]);
    if !o.coplanar_idx(x, y, z, o.a()) {
        return true;
    }
    let Some(pl) = o.plane_of(z) else {
        return false;
    };
    let repl = o.planes()[pl].iter().copied().find(|&c| {
        c != o.a() && c != o.b() && !s.contains(&c) && !o.coplanar_idx(w, x, y, c) && !o.coplanar_idx(x, y, c, o.a())
    });
    match repl {
        Some(c) => {
            s[n - 1] = c;
            true
        }
        None => false,
    }
}

fn preference(o: &Ovoid, seq: &[usize]) -> Vec<usize> {
    let mut pref: Vec<usize> = seq.to_vec();
    pref.extend((0..o.points().len()).filter(|i| !seq.contains(i)));
    pref
}

/// Depth-first search over extensions of `A, B`, candidates tried in
/// `preference` order.
fn backtrack(o: &Ovoid, n: usize, preference: &[usize], max_states: usize) -> Result<Vec<usize>> {
    let total = o.points().len();
    let mut used = vec![false; total];
    let mut seq = vec![o.a(), o.b()];
    used[o.a()] = true;
    used[o.b()] = true;
    // next preference index to try at each depth
    let mut cursor: Vec<usize> = vec![0];
    let mut states = 0usize;
    while let Some(&start) = cursor.last() {
        if seq.len() == n {
            if is_valid(o, &seq) {
                return Ok(seq);
            }
            cursor.pop();
            let c = seq.pop().expect("nonempty");
            used[c] = false;
            continue;
        }
        let l = seq.len();
        let next = preference[start.min(total)..]
            .iter()
            .position(|&c| !used[c] && (l < 3 || !o.coplanar_idx(seq[l - 3], seq[l - 2], seq[l - 1], c)));
        match next {
            Some(off) => {
                states += 1;
                if states > max_states {
                    return Err(Error::SearchExhausted(max_states));
                }
                let pos = start + off;
                *cursor.last_mut().expect("nonempty") = pos + 1;
                let c = preference[pos];
                seq.push(c);
                used[c] = true;
                cursor.push(0);
            }
            None => {
                cursor.pop();
                if seq.len() <= 2 {
                    break;
                }
                let c = seq.pop().expect("nonempty");
                used[c] = false;
            }
        }
    }
    Err(Error::SearchExhausted(states))
}
