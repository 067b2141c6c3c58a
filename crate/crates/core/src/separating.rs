//! Strongly 3-separating integer sets.
//!
//! Two conditions on a set `M` of positive integers:
//!
//! * (S1) for ordered triples `m`, `n` of pairwise-distinct elements,
//!   `n2 (m3 - m1) = n1 (m3 - m2) + n3 (m2 - m1)` only when `m = n`;
//! * (S2) for ordered pairs of distinct elements,
//!   `m1 - m2 + n2 - n1 = 0` only when `(m1, m2) = (n1, n2)`.
//!
//! The (S1) identity says the three points `(m_i, n_i)` are collinear, which
//! lets the checker solve for `n3` instead of scanning all triple pairs. (S2)
//! is the Sidon condition: all differences of distinct elements are distinct.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparatingError {
    #[error("set has {size} elements, condition needs at least {needed}")]
    TooSmall { size: usize, needed: usize },
    #[error("set is not strongly 3-separating: {0}")]
    NotSeparating(String),
    #[error("invalid integer set: {0}")]
    InvalidSet(String),
}

pub type Triple = [u64; 3];
pub type Pair = [u64; 2];

/// Outcome of a condition check: either it holds, or a counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict<W> {
    Holds,
    Violated(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

/// `n2 (m3 - m1) == n1 (m3 - m2) + n3 (m2 - m1)`, evaluated exactly.
pub fn triple_identity(m: Triple, n: Triple) -> bool {
    let [m1, m2, m3] = m.map(i128::from);
    let [n1, n2, n3] = n.map(i128::from);
    n2 * (m3 - m1) == n1 * (m3 - m2) + n3 * (m2 - m1)
}

fn sorted_distinct(set: &[u64]) -> Vec<u64> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Checks (S1). Triples are scanned in lexicographic order of the sorted set,
/// so the first counterexample is deterministic.
pub fn check_s1(set: &[u64]) -> Result<Verdict<(Triple, Triple)>, SeparatingError> {
    let m = sorted_distinct(set);
    if m.len() < 3 {
        return Err(SeparatingError::TooSmall {
            size: m.len(),
            needed: 3,
        });
    }
    Ok(match s1_violation(&m) {
        Some(w) => Verdict::Violated(w),
        None => Verdict::Holds,
    })
}

fn s1_violation(m: &[u64]) -> Option<(Triple, Triple)> {
    let len = m.len();
    for a in 0..len {
        for b in 0..len {
            if b == a {
                continue;
            }
            for c in 0..len {
                if c == a || c == b {
                    continue;
                }
                let mt = [m[a], m[b], m[c]];
                let (m1, m2, m3) = (mt[0] as i128, mt[1] as i128, mt[2] as i128);
                for &n1 in m {
                    for &n2 in m {
                        if n2 == n1 {
                            continue;
                        }
                        // n3 (m2 - m1) = n2 (m3 - m1) - n1 (m3 - m2)
                        let num = n2 as i128 * (m3 - m1) - n1 as i128 * (m3 - m2);
                        let den = m2 - m1;
                        if num % den != 0 {
                            continue;
                        }
                        let n3 = num / den;
                        if n3 <= 0 || n3 == n1 as i128 || n3 == n2 as i128 {
                            continue;
                        }
                        let n3 = n3 as u64;
                        if m.binary_search(&n3).is_ok() {
                            let nt = [n1, n2, n3];
                            if nt != mt {
                                return Some((mt, nt));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Checks (S2) as "all differences of distinct elements are distinct". On
/// failure returns pairs `(a, b), (c, d)` with `a - b = c - d`.
pub fn check_s2(set: &[u64]) -> Result<Verdict<(Pair, Pair)>, SeparatingError> {
    let m = sorted_distinct(set);
    if m.len() < 2 {
        return Err(SeparatingError::TooSmall {
            size: m.len(),
            needed: 2,
        });
    }
    let mut seen: HashMap<u64, Pair> = HashMap::new();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            if let Some(&first) = seen.get(&(b - a)) {
                return Ok(Verdict::Violated((first, [a, b])));
            }
            seen.insert(b - a, [a, b]);
        }
    }
    Ok(Verdict::Holds)
}

/// (S1) and (S2) together, for sets of size at least 3.
pub fn is_strongly_separating(set: &[u64]) -> bool {
    matches!(check_s1(set), Ok(Verdict::Holds)) && matches!(check_s2(set), Ok(Verdict::Holds))
}

/// A strictly increasing set of positive integers with certification flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SeparatingSet {
    elements: Vec<u64>,
    s1_verified: bool,
    s2_verified: bool,
}

impl SeparatingSet {
    /// Sorts the input and runs both checks. Rejects zero and repeats.
    pub fn new(elements: &[u64]) -> Result<Self, SeparatingError> {
        let mut v = elements.to_vec();
        v.sort_unstable();
        if v.first() == Some(&0) {
            return Err(SeparatingError::InvalidSet(
                "elements must be positive".into(),
            ));
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(SeparatingError::InvalidSet("repeated element".into()));
        }
        let s1 = v.len() >= 3 && s1_violation(&v).is_none();
        let s2 = v.len() >= 2 && matches!(check_s2(&v), Ok(Verdict::Holds));
        Ok(SeparatingSet {
            elements: v,
            s1_verified: s1,
            s2_verified: s2,
        })
    }

    /// Like [`SeparatingSet::new`], but fails unless both conditions hold.
    pub fn strongly_separating(elements: &[u64]) -> Result<Self, SeparatingError> {
        let set = Self::new(elements)?;
        set.require_strong()?;
        Ok(set)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> u64 {
        self.elements.last().copied().unwrap_or(0)
    }

    pub fn s1_verified(&self) -> bool {
        self.s1_verified
    }

    pub fn s2_verified(&self) -> bool {
        self.s2_verified
    }

    pub fn is_strong(&self) -> bool {
        self.s1_verified && self.s2_verified
    }

    fn require_strong(&self) -> Result<(), SeparatingError> {
        if self.elements.len() < 3 {
            return Err(SeparatingError::TooSmall {
                size: self.elements.len(),
                needed: 3,
            });
        }
        if !self.s1_verified {
            let w = s1_violation(&self.elements).expect("flag mirrors the check");
            return Err(SeparatingError::NotSeparating(format!(
                "(S1) fails for triples {:?} and {:?}",
                w.0, w.1
            )));
        }
        if !self.s2_verified {
            let w = check_s2(&self.elements).expect("size checked");
            let w = w.counterexample().expect("flag mirrors the check");
            return Err(SeparatingError::NotSeparating(format!(
                "(S2) fails for pairs {:?} and {:?}",
                w.0, w.1
            )));
        }
        Ok(())
    }

    /// Every `x` outside the set for which adding `x` breaks (S1) or (S2).
    ///
    /// Each violation involving `x` is an equation in `x` once the other
    /// entries are fixed from the set: linear for the pair condition and when
    /// `x` occupies one slot or the same slot of both triples, quadratic when
    /// it occupies different slots of the two triples. Only positive integer
    /// roots are kept.
    pub fn forbidden_values(&self) -> Result<BTreeSet<u64>, SeparatingError> {
        self.require_strong()?;
        let mut out = BTreeSet::new();
        // m1 - m2 + n2 - n1 = 0
        solve_slot_equations(
            &self.elements,
            2,
            |m, n| m[0] - m[1] + n[1] - n[0],
            &mut out,
        )?;
        // n2 (m3 - m1) - n1 (m3 - m2) - n3 (m2 - m1) = 0
        solve_slot_equations(
            &self.elements,
            3,
            |m, n| n[1] * (m[2] - m[0]) - n[0] * (m[2] - m[1]) - n[2] * (m[1] - m[0]),
            &mut out,
        )?;
        Ok(out)
    }

    /// Adds the least admissible value above the current maximum and
    /// re-verifies the result from scratch.
    pub fn extend(&self) -> Result<SeparatingSet, SeparatingError> {
        let forbidden = self.forbidden_values()?;
        let mut x = self.max() + 1;
        while forbidden.contains(&x) {
            x += 1;
        }
        let mut next = self.elements.clone();
        next.push(x);
        let set = SeparatingSet::new(&next)?;
        if !set.is_strong() {
            return Err(SeparatingError::NotSeparating(format!(
                "extension by {x} failed re-verification"
            )));
        }
        Ok(set)
    }

    /// Extends repeatedly until the set has `size` elements.
    pub fn build_prefix(&self, size: usize) -> Result<SeparatingSet, SeparatingError> {
        self.require_strong()?;
        let mut cur = self.clone();
        while cur.len() < size {
            cur = cur.extend()?;
        }
        Ok(cur)
    }
}

/// Collects every positive `x` outside `m` solving `eq(mt, nt) = 0` for two
/// `arity`-tuples of distinct entries of `m ∪ {x}` that differ and contain `x`.
///
/// `x` sits in at most one slot per tuple, so after fixing the other slots
/// from `m` the equation is a polynomial of degree at most 2 in `x`,
/// recovered from its values at -1, 0 and 1.
fn solve_slot_equations<F>(
    m: &[u64],
    arity: usize,
    eq: F,
    out: &mut BTreeSet<u64>,
) -> Result<(), SeparatingError>
where
    F: Fn(&[i128], &[i128]) -> i128,
{
    let len = m.len();
    let mut slots: Vec<Option<usize>> = vec![None];
    slots.extend((0..arity).map(Some));
    let mut mt = vec![0i128; arity];
    let mut nt = vec![0i128; arity];
    for &m_slot in &slots {
        for &n_slot in &slots {
            if m_slot.is_none() && n_slot.is_none() {
                continue;
            }
            let free_m = arity - usize::from(m_slot.is_some());
            let free = free_m + arity - usize::from(n_slot.is_some());
            let mut idx = vec![0usize; free];
            loop {
                if distinct(&idx[..free_m]) && distinct(&idx[free_m..]) {
                    let fill = |x: i128, mt: &mut [i128], nt: &mut [i128]| {
                        let mut it = idx.iter().map(|&i| m[i] as i128);
                        for (i, v) in mt.iter_mut().enumerate() {
                            *v = if m_slot == Some(i) {
                                x
                            } else {
                                it.next().unwrap()
                            };
                        }
                        for (i, v) in nt.iter_mut().enumerate() {
                            *v = if n_slot == Some(i) {
                                x
                            } else {
                                it.next().unwrap()
                            };
                        }
                    };
                    let mut at = |x: i128| {
                        fill(x, &mut mt, &mut nt);
                        eq(&mt, &nt)
                    };
                    let (e0, e1, em1) = (at(0), at(1), at(-1));
                    let a2 = (e1 + em1 - 2 * e0) / 2;
                    let a1 = (e1 - em1) / 2;
                    match integer_roots(a2, a1, e0) {
                        Roots::All => {
                            fill(1, &mut mt, &mut nt);
                            if mt != nt {
                                return Err(SeparatingError::NotSeparating(
                                    "violation equation vanishes identically".into(),
                                ));
                            }
                        }
                        Roots::Some(roots) => {
                            for x in roots {
                                if x <= 0 || m.binary_search(&(x as u64)).is_ok() {
                                    continue;
                                }
                                fill(x, &mut mt, &mut nt);
                                if mt != nt {
                                    out.insert(x as u64);
                                }
                            }
                        }
                    }
                }
                if !advance(&mut idx, len) {
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Steps an odometer over `0..base` digits; false once it wraps around.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn distinct(idx: &[usize]) -> bool {
    (0..idx.len()).all(|i| (i + 1..idx.len()).all(|j| idx[i] != idx[j]))
}

enum Roots {
    All,
    Some(Vec<i128>),
}

/// Integer roots of `a x^2 + b x + c`.
fn integer_roots(a: i128, b: i128, c: i128) -> Roots {
    if a == 0 {
        if b == 0 {
            return if c == 0 {
                Roots::All
            } else {
                Roots::Some(vec![])
            };
        }
        return Roots::Some(if c % b == 0 { vec![-c / b] } else { vec![] });
    }
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return Roots::Some(vec![]);
    }
    let s = isqrt(disc);
    if s * s != disc {
        return Roots::Some(vec![]);
    }
    let mut out = Vec::new();
    for num in [-b + s, -b - s] {
        if num % (2 * a) == 0 {
            out.push(num / (2 * a));
        }
    }
    out.dedup();
    Roots::Some(out)
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Parses a comma-separated list of positive integers.
pub fn parse_set(text: &str) -> Result<Vec<u64>, SeparatingError> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: u64 = tok
            .parse()
            .map_err(|_| SeparatingError::InvalidSet(format!("bad integer {tok:?}")))?;
        out.push(v);
    }
    Ok(out)
}

pub fn format_set(set: &[u64]) -> String {
    let v: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    v.join(",")
}

impl FromStr for SeparatingSet {
    type Err = SeparatingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeparatingSet::new(&parse_set(s)?)
    }
}

impl fmt::Display for SeparatingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_set(&self.elements))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s1_examples() {
        assert_eq!(
            check_s1(&[1, 2, 3]).unwrap(),
            Verdict::Violated(([1, 2, 3], [3, 2, 1]))
        );
        assert!(check_s1(&[1, 2, 4]).unwrap().holds());
        assert_eq!(
            check_s1(&[1, 2]),
            Err(SeparatingError::TooSmall { size: 2, needed: 3 })
        );
    }

    #[test]
    fn s2_examples() {
        assert!(check_s2(&[1, 2, 4]).unwrap().holds());
        assert_eq!(
            check_s2(&[1, 2, 4, 5]).unwrap(),
            Verdict::Violated(([1, 4], [2, 5]))
        );
        assert!(check_s2(&[1, 2]).unwrap().holds());
        assert!(matches!(
            check_s2(&[7]),
            Err(SeparatingError::TooSmall { .. })
        ));
    }

    #[test]
    fn eight_breaks_the_triple_condition() {
        assert!(check_s2(&[1, 2, 4, 8]).unwrap().holds());
        // (1,2,4) and (2,4,8): 4*7 = 2*2 + 8*1
        assert_eq!(
            check_s1(&[1, 2, 4, 8]).unwrap(),
            Verdict::Violated(([1, 2, 4], [2, 4, 8]))
        );
    }

    #[test]
    fn new_rejects_bad_sets() {
        assert!(matches!(
            SeparatingSet::new(&[0, 1, 2]),
            Err(SeparatingError::InvalidSet(_))
        ));
        assert!(matches!(
            SeparatingSet::new(&[1, 1, 2]),
            Err(SeparatingError::InvalidSet(_))
        ));
        let s = SeparatingSet::new(&[4, 1, 2]).unwrap();
        assert_eq!(s.elements(), &[1, 2, 4]);
        assert!(s.is_strong());
    }

    #[test]
    fn forbidden_values_of_124() {
        let m = SeparatingSet::new(&[1, 2, 4]).unwrap();
        let f = m.forbidden_values().unwrap();
        for x in [3, 5, 6, 7, 8, 10] {
            assert!(f.contains(&x), "{x} should be forbidden");
        }
        assert!(!f.contains(&9));
        assert!(!f.contains(&1) && !f.contains(&2) && !f.contains(&4));
    }

    #[test]
    fn extend_picks_nine() {
        let m = SeparatingSet::new(&[1, 2, 4]).unwrap();
        let e = m.extend().unwrap();
        assert_eq!(e.elements(), &[1, 2, 4, 9]);
        let e2 = e.extend().unwrap();
        assert_eq!(e2.elements(), &[1, 2, 4, 9, 15]);
        assert!(e2.is_strong());
    }

    #[test]
    fn build_prefix_cases() {
        let m = SeparatingSet::new(&[1, 2, 4]).unwrap();
        assert_eq!(m.build_prefix(3).unwrap(), m);
        assert_eq!(m.build_prefix(6).unwrap().elements(), &[1, 2, 4, 9, 15, 24]);
        let bad = SeparatingSet::new(&[1, 2, 3]).unwrap();
        assert!(matches!(
            bad.build_prefix(4),
            Err(SeparatingError::NotSeparating(_))
        ));
    }

    #[test]
    fn integer_root_solver() {
        // (x - 3)(x + 5) = x^2 + 2x - 15
        match integer_roots(1, 2, -15) {
            Roots::Some(mut r) => {
                r.sort();
                assert_eq!(r, vec![-5, 3]);
            }
            Roots::All => panic!(),
        }
        match integer_roots(-1, 0, 2) {
            Roots::Some(r) => assert!(r.is_empty()),
            Roots::All => panic!(),
        }
        assert!(matches!(integer_roots(0, 0, 0), Roots::All));
        assert_eq!(isqrt(1 << 40), 1 << 20);
    }

    #[test]
    fn parse_and_display() {
        let s: SeparatingSet = "4, 1,2".parse().unwrap();
        assert_eq!(s.to_string(), "1,2,4");
        assert!(parse_set("1,x").is_err());
    }
}
