//! Ordering the evaluation points so that no `k` cyclically consecutive
//! points sum to `O`.

use num_bigint::BigUint;

use super::curve::{ECPoint, EllipticCurve, Group};
use super::n_max;
use crate::error::{Error, Result};
use crate::Limits;

/// An ordered evaluation set `D` for the divisor `G = kO`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalArrangement {
    pub curve: EllipticCurve,
    pub points: Vec<ECPoint>,
    pub k: usize,
}

/// The four layouts, split by the parities of `d = n - k` and `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayoutCase {
    /// `d` odd, `n` even: the plain paired list.
    OddDEvenN,
    /// `d` even, `n` odd: the paired list with one point left unmatched.
    EvenDOddN,
    /// `d` even, `n` even: two unmatched points interleaved every `k`.
    EvenDEvenN,
    /// `d` odd, `n` odd: one unmatched point interleaved every `k`.
    OddDOddN,
}

impl LayoutCase {
    pub fn of(n: usize, d: usize) -> Self {
        match (d.is_multiple_of(2), n.is_multiple_of(2)) {
            (false, true) => LayoutCase::OddDEvenN,
            (true, false) => LayoutCase::EvenDOddN,
            (true, true) => LayoutCase::EvenDEvenN,
            (false, false) => LayoutCase::OddDOddN,
        }
    }

    /// Size `M` of the virtual group whose labels `1..M-1` the layout uses.
    pub fn virtual_order(self, n: usize) -> usize {
        match self {
            LayoutCase::OddDEvenN => n + 1,
            LayoutCase::EvenDOddN | LayoutCase::OddDOddN => n + 2,
            LayoutCase::EvenDEvenN => n + 3,
        }
    }
}

/// The layout as labels of `P_1, ..., P_{m-1}`, where `P_{2i-1} + P_{2i} = O`.
pub fn layout(case: LayoutCase, m: usize, k: usize) -> Vec<usize> {
    match case {
        LayoutCase::OddDEvenN => (1..m).collect(),
        LayoutCase::EvenDOddN => (1..m - 1).collect(),
        LayoutCase::EvenDEvenN => {
            let n = m - 3;
            let (s, r) = (n / (k + 1), n % (k + 1));
            let mut v = interleave(s * k + r - 1, k, s, |j| if j < s { m - 4 - j } else { m - 4 });
            v.push(m - 2);
            v
        }
        LayoutCase::OddDOddN => {
            let n = m - 2;
            let (s, r) = (n / (k + 1), n % (k + 1));
            interleave(s * k + r, k, s, |j| if j < s { m - 2 - j } else { m - 2 })
        }
    }
}

/// `1..=base` with `insert(j)` placed right after label `jk - 1`, `j = 1..=s`.
fn interleave(base: usize, k: usize, s: usize, insert: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(base + s);
    let mut j = 1;
    for label in 1..=base {
        v.push(label);
        while j <= s && label == j * k - 1 {
            v.push(insert(j));
            j += 1;
        }
    }
    v
}

/// Builds an arrangement of `n` points for `G = kO`.
///
/// Non-identity points are paired with their negatives in ascending order.
/// Labels of the layout map to the last pairs, which amounts to deleting
/// pairs from the front; order-2 points fill the unmatched roles first. The
/// SWITCH step swaps a pair inside a zero-sum window, and if windows still
/// sum to `O` a bounded adjacent-swap search repairs the order.
pub fn arrange(c: &EllipticCurve, n: usize, k: usize, limits: &Limits) -> Result<EvalArrangement> {
    let nm = n_max(c.field());
    if k == 0 || k >= n || n + 3 > nm.max(3) {
        return Err(Error::OutOfRange(format!(
            "need 0 < k < n <= N(q)-3, got k = {k}, n = {n}"
        )));
    }
    let g = Group::new(c);
    if n + 3 > g.order() {
        return Err(Error::OutOfRange(format!(
            "curve has {} points, n = {n} needs n + 3",
            g.order()
        )));
    }
    let case = LayoutCase::of(n, n - k);
    let m = case.virtual_order(n);
    let labels = layout(case, m, k);
    let table = assign_labels(&g, &labels, m)?;
    let mut seq: Vec<usize> = labels.iter().map(|&v| table[v]).collect();
    switch_step(&g, &mut seq, k);
    if first_zero(&g, &seq, k).is_some() {
        repair(&g, &mut seq, k, limits.rearrange_attempts)?;
    }
    Ok(EvalArrangement {
        curve: c.clone(),
        points: seq.iter().map(|&i| g.points()[i]).collect(),
        k,
    })
}

/// Group index for every virtual label used.
fn assign_labels(g: &Group, labels: &[usize], m: usize) -> Result<Vec<usize>> {
    let mut pairs = Vec::new();
    let mut torsion = Vec::new();
    let mut seen = vec![false; g.order()];
    for i in 1..g.order() {
        if seen[i] {
            continue;
        }
        let j = g.neg(i);
        seen[i] = true;
        seen[j] = true;
        if i == j {
            torsion.push(i);
        } else {
            pairs.push((i, j));
        }
    }
    let mut used = vec![false; m];
    for &v in labels {
        used[v] = true;
    }
    // per slot: (both labels used, the single used label)
    let slots: Vec<(usize, bool, usize)> = (1..=(m - 1) / 2)
        .filter_map(|s| {
            let (a, b) = (2 * s - 1, 2 * s);
            match (used[a], used[b]) {
                (true, true) => Some((s, true, a)),
                (true, false) => Some((s, false, a)),
                (false, true) => Some((s, false, b)),
                (false, false) => None,
            }
        })
        .collect();
    let lone = slots.iter().filter(|s| !s.1).count();
    let consumed = slots.len() - lone.min(torsion.len());
    if consumed > pairs.len() {
        return Err(Error::Internal(format!(
            "layout needs {consumed} point pairs, curve has {}",
            pairs.len()
        )));
    }
    let mut next_pair = pairs.len() - consumed;
    let mut torsion = torsion.into_iter();
    let mut table = vec![usize::MAX; m];
    for (s, both, label) in slots {
        if both {
            let (p, q) = pairs[next_pair];
            next_pair += 1;
            table[2 * s - 1] = p;
            table[2 * s] = q;
        } else if let Some(t) = torsion.next() {
            table[label] = t;
        } else {
            table[label] = pairs[next_pair].0;
            next_pair += 1;
        }
    }
    Ok(table)
}

fn window_sum(g: &Group, seq: &[usize], start: usize, k: usize) -> usize {
    let n = seq.len();
    (0..k).fold(0, |acc, j| g.add(acc, seq[(start + j) % n]))
}

fn first_zero(g: &Group, seq: &[usize], k: usize) -> Option<usize> {
    (0..seq.len()).find(|&i| window_sum(g, seq, i, k) == 0)
}

fn zero_windows(g: &Group, seq: &[usize], k: usize) -> usize {
    (0..seq.len()).filter(|&i| window_sum(g, seq, i, k) == 0).count()
}

/// For each window summing to `O`: swap its first point with a preceding
/// negative, or else its last point with a following negative.
fn switch_step(g: &Group, seq: &mut [usize], k: usize) {
    let n = seq.len();
    for _ in 0..2 {
        let mut changed = false;
        for i in 0..n {
            if window_sum(g, seq, i, k) != 0 {
                continue;
            }
            let (prev, last, next) = ((i + n - 1) % n, (i + k - 1) % n, (i + k) % n);
            if g.neg(seq[prev]) == seq[i] {
                seq.swap(prev, i);
                changed = true;
            } else if g.neg(seq[last]) == seq[next] {
                seq.swap(last, next);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Greedy adjacent-swap descent on the number of zero-sum windows.
fn repair(g: &Group, seq: &mut [usize], k: usize, max_attempts: usize) -> Result<()> {
    let n = seq.len();
    let mut attempts = 0;
    let mut bad = zero_windows(g, seq, k);
    while bad > 0 {
        let mut improved = false;
        for j in 0..n {
            attempts += 1;
            if attempts > max_attempts {
                return Err(Error::SearchExhausted(max_attempts));
            }
            let j2 = (j + 1) % n;
            seq.swap(j, j2);
            let now = zero_windows(g, seq, k);
            if now < bad {
                bad = now;
                improved = true;
                break;
            }
            seq.swap(j, j2);
        }
        if !improved {
            return Err(Error::SearchExhausted(attempts));
        }
    }
    Ok(())
}

/// Start of the first cyclic window of `k` points summing to `O`.
pub fn first_zero_window(a: &EvalArrangement) -> Option<usize> {
    let n = a.points.len();
    if a.k == 0 || a.k > n {
        return None;
    }
    let c = &a.curve;
    let mut sum = a.points[..a.k]
        .iter()
        .fold(ECPoint::Infinity, |s, p| c.add_unchecked(&s, p));
    for i in 0..n {
        if sum == ECPoint::Infinity {
            return Some(i);
        }
        sum = c.add_unchecked(&sum, &c.neg(&a.points[i]));
        sum = c.add_unchecked(&sum, &a.points[(i + a.k) % n]);
    }
    None
}

/// True iff no `k` cyclically consecutive points sum to `O`.
pub fn window_check(a: &EvalArrangement) -> bool {
    first_zero_window(a).is_none()
}

/// `N(k, O, D)`: the number of `k`-subsets of the points summing to `O`.
pub fn subset_sum_count(a: &EvalArrangement) -> BigUint {
    let g = Group::new(&a.curve);
    let order = g.order();
    let k = a.k;
    // dp[j][e]: j-subsets of the points seen so far with sum e
    let mut dp = vec![vec![BigUint::ZERO; order]; k + 1];
    dp[0][0] = BigUint::from(1u32);
    for (seen, p) in a.points.iter().enumerate() {
        let Some(pi) = g.index_of(p) else {
            continue;
        };
        for j in (1..=k.min(seen + 1)).rev() {
            let (lo, hi) = dp.split_at_mut(j);
            let (src, dst) = (&lo[j - 1], &mut hi[0]);
            for (e, cnt) in src.iter().enumerate() {
                if *cnt != BigUint::ZERO {
                    dst[g.add(e, pi)] += cnt;
                }
            }
        }
    }
    std::mem::take(&mut dp[k][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecmds::{ec_points, find_maximal_curve};
    use crate::gf::FieldSpec;
    use crate::linalg::for_each_subset;
    use std::ops::ControlFlow;

    #[test]
    fn worked_example_layout() {
        let d1 = layout(LayoutCase::EvenDEvenN, 19, 6);
        let mut expect: Vec<usize> = (1..=5).collect();
        expect.push(14);
        expect.extend(6..=11);
        expect.extend([15, 12, 13, 17]);
        assert_eq!(d1, expect);
        let n = d1.len();
        let tail: Vec<usize> = d1[n - 6..].iter().chain(&d1[..2]).copied().collect();
        assert_eq!(tail, vec![10, 11, 15, 12, 13, 17, 1, 2]);
    }

    #[test]
    fn layouts_have_length_n() {
        for n in 7..30 {
            for k in 1..n - 4 {
                let case = LayoutCase::of(n, n - k);
                let mut v = layout(case, case.virtual_order(n), k);
                assert_eq!(v.len(), n, "n = {n}, k = {k}");
                v.sort();
                v.dedup();
                assert_eq!(v.len(), n);
            }
        }
    }

    #[test]
    fn odd_window_on_paired_list() {
        let f = FieldSpec::of_order(13).unwrap();
        let c = find_maximal_curve(&f).unwrap();
        // d odd, n even: k odd, plain pairs
        let a = arrange(&c, 16, 7, &Limits::default()).unwrap();
        assert!(window_check(&a));
    }

    #[test]
    fn paired_window_fails_when_even() {
        let f = FieldSpec::of_order(13).unwrap();
        let c = find_maximal_curve(&f).unwrap();
        let g = Group::new(&c);
        let p = g.points()[1];
        let q = g.points()[2];
        let pts = vec![p, c.neg(&p), q, c.neg(&q), p, q];
        let a = EvalArrangement {
            curve: c,
            points: pts,
            k: 2,
        };
        assert!(!window_check(&a));
    }

    #[test]
    fn subset_count_matches_enumeration() {
        let f = FieldSpec::of_order(7).unwrap();
        let c = find_maximal_curve(&f).unwrap();
        let pts: Vec<ECPoint> = ec_points(&c).into_iter().skip(1).take(9).collect();
        for k in 1..=9 {
            let a = EvalArrangement {
                curve: c.clone(),
                points: pts.clone(),
                k,
            };
            let mut count = 0u32;
            for_each_subset::<()>(pts.len(), k, |s| {
                let sum = s
                    .iter()
                    .fold(ECPoint::Infinity, |acc, &i| c.add_unchecked(&acc, &pts[i]));
                if sum == ECPoint::Infinity {
                    count += 1;
                }
                ControlFlow::Continue(())
            });
            assert_eq!(subset_sum_count(&a), BigUint::from(count), "k = {k}");
        }
        let mut rev = pts.clone();
        rev.reverse();
        let a = EvalArrangement {
            curve: c.clone(),
            points: pts,
            k: 4,
        };
        let b = EvalArrangement {
            curve: c,
            points: rev,
            k: 4,
        };
        assert_eq!(subset_sum_count(&a), subset_sum_count(&b));
    }
}
