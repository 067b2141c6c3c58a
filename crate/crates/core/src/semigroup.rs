//! Finite semigroups given by a multiplication (Cayley) table.
//!
//! Elements are `0..n` indices. Green's preorders are computed against the
//! semigroup with an identity adjoined, but that identity is never stored:
//! reflexivity is forced instead.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("not associative: ({i}*{j})*{k} != {i}*({j}*{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("element {0} out of range")]
    OutOfRange(usize),
}

/// A finite semigroup stored as a row-major `n x n` table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteSemigroup {
    /// Builds a semigroup from table rows, checking closure and associativity.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, SemigroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(SemigroupError::MalformedTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SemigroupError::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            table.extend_from_slice(row);
        }
        Self::from_table(n, table)
    }

    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self, SemigroupError> {
        if order == 0 {
            return Err(SemigroupError::MalformedTable(
                "order must be positive".into(),
            ));
        }
        if table.len() != order * order {
            return Err(SemigroupError::MalformedTable(format!(
                "expected {} entries, found {}",
                order * order,
                table.len()
            )));
        }
        if let Some(pos) = table.iter().position(|&v| v >= order) {
            return Err(SemigroupError::MalformedTable(format!(
                "entry {} at row {}, column {} is out of range 0..{order}",
                table[pos],
                pos / order,
                pos % order
            )));
        }
        let s = FiniteSemigroup {
            order,
            table,
            labels: None,
        };
        if let Some((i, j, k)) = s.associativity_violation() {
            return Err(SemigroupError::NotAssociative { i, j, k });
        }
        Ok(s)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, SemigroupError> {
        if labels.len() != self.order {
            return Err(SemigroupError::MalformedTable(format!(
                "{} labels for {} elements",
                labels.len(),
                self.order
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The first triple `(i, j, k)` in lexicographic order with
    /// `(ij)k != i(jk)`.
    fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(i, j);
                for k in 0..n {
                    if self.mul(ij, k) != self.mul(i, self.mul(j, k)) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    /// `x^e` for `e >= 1`.
    pub fn pow(&self, x: usize, e: u64) -> usize {
        assert!(e >= 1, "semigroup powers start at 1");
        let mut acc = x;
        for _ in 1..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.order)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn check_element(&self, x: usize) -> Result<(), SemigroupError> {
        if x < self.order {
            Ok(())
        } else {
            Err(SemigroupError::OutOfRange(x))
        }
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.order).filter(|&x| self.is_idempotent(x)).collect()
    }

    /// The two-sided identity, if there is one.
    pub fn identity(&self) -> Option<usize> {
        (0..self.order)
            .find(|&e| (0..self.order).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    pub fn is_monoid(&self) -> bool {
        self.identity().is_some()
    }

    pub fn is_group(&self) -> bool {
        match self.identity() {
            Some(e) => (0..self.order).all(|x| (0..self.order).any(|y| self.mul(x, y) == e)),
            None => false,
        }
    }

    /// Membership mask of the subsemigroup generated by `gens`.
    pub fn generated_by(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        let mut frontier: Vec<usize> = Vec::new();
        for &g in gens {
            if !inside[g] {
                inside[g] = true;
                frontier.push(g);
            }
        }
        let mut members = frontier.clone();
        while let Some(x) = frontier.pop() {
            let snapshot = members.clone();
            for &y in &snapshot {
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if !inside[p] {
                        inside[p] = true;
                        members.push(p);
                        frontier.push(p);
                    }
                }
            }
        }
        inside
    }

    /// The monoid `S^1` obtained by adjoining a fresh identity as the last index.
    pub fn with_identity_adjoined(&self) -> FiniteSemigroup {
        let n = self.order;
        let one = n;
        let mut table = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                table.push(if i == one {
                    j
                } else if j == one {
                    i
                } else {
                    self.mul(i, j)
                });
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut l = l.clone();
            l.push("1".into());
            l
        });
        FiniteSemigroup {
            order: n + 1,
            table,
            labels,
        }
    }

    /// Cyclic group of order `n`, with `0` the identity.
    pub fn cyclic_group(n: usize) -> FiniteSemigroup {
        let table = (0..n * n).map(|c| (c / n + c % n) % n).collect();
        FiniteSemigroup::from_table(n, table).expect("cyclic group table is associative")
    }

    /// Null semigroup on `n` elements: every product is `0`.
    pub fn null(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_table(n, vec![0; n * n]).expect("null table is associative")
    }

    /// Left-zero semigroup: `xy = x`.
    pub fn left_zero(n: usize) -> FiniteSemigroup {
        let table = (0..n * n).map(|c| c / n).collect();
        FiniteSemigroup::from_table(n, table).expect("left-zero table is associative")
    }

    /// Right-zero semigroup: `xy = y`.
    pub fn right_zero(n: usize) -> FiniteSemigroup {
        let table = (0..n * n).map(|c| c % n).collect();
        FiniteSemigroup::from_table(n, table).expect("right-zero table is associative")
    }

    /// Serializes into the Cayley-table text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        if let Some(labels) = &self.labels {
            out.push_str("labels: ");
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn green(&self) -> GreenStructure {
        GreenStructure::compute(self)
    }

    pub fn power_profile(&self, x: usize) -> PowerProfile {
        let mut first_seen = vec![0u64; self.order];
        let mut cur = x;
        let mut e = 1u64;
        loop {
            if first_seen[cur] != 0 {
                let index = first_seen[cur];
                let period = e - index;
                let idem = index.div_ceil(period) * period;
                return PowerProfile {
                    element: x,
                    index,
                    period,
                    idempotent_power: idem,
                };
            }
            first_seen[cur] = e;
            cur = self.mul(cur, x);
            e += 1;
        }
    }

    /// The first element (in table order) whose H-class contains no
    /// idempotent, or `None` when the semigroup is a union of groups.
    pub fn non_group_element(&self) -> Option<usize> {
        let green = self.green();
        green
            .h_classes
            .iter()
            .filter(|class| !class.iter().any(|&e| self.is_idempotent(e)))
            .map(|class| class[0])
            .min()
    }

    pub fn is_union_of_groups(&self) -> bool {
        self.non_group_element().is_none()
    }

    /// Every `s` for which no `t` satisfies `ts = s` or `st = s`.
    pub fn relative_identity_violators(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&s| !(0..self.order).any(|t| self.mul(t, s) == s || self.mul(s, t) == s))
            .collect()
    }

    pub fn has_relative_identities(&self) -> bool {
        self.relative_identity_violators().is_empty()
    }
}

impl FromStr for FiniteSemigroup {
    type Err = SemigroupError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| SemigroupError::MalformedTable("missing order line".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| SemigroupError::MalformedTable(format!("bad order line {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| SemigroupError::MalformedTable(format!("missing row {i}")))?;
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| {
                        SemigroupError::MalformedTable(format!("bad entry {tok:?} in row {i}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let labels = match lines.next() {
            None => None,
            Some(line) => {
                let rest = line.strip_prefix("labels:").ok_or_else(|| {
                    SemigroupError::MalformedTable(format!("unexpected trailing line {line:?}"))
                })?;
                Some(
                    rest.split_whitespace()
                        .map(String::from)
                        .collect::<Vec<_>>(),
                )
            }
        };
        if let Some(extra) = lines.next() {
            return Err(SemigroupError::MalformedTable(format!(
                "unexpected trailing line {extra:?}"
            )));
        }
        let s = FiniteSemigroup::from_rows(&rows)?;
        match labels {
            Some(l) => s.with_labels(l),
            None => Ok(s),
        }
    }
}

impl fmt::Display for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Powers of a single element: `x^index = x^(index + period)` with both
/// minimal, and `x^idempotent_power` the idempotent in the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerProfile {
    pub element: usize,
    pub index: u64,
    pub period: u64,
    pub idempotent_power: u64,
}

/// A square boolean relation on element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a && *b)
            .collect();
        Relation { n: self.n, bits }
    }

    /// `a (self ∘ other) c` iff some `b` has `a self b` and `b other c`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                if self.holds(a, b) {
                    for c in 0..self.n {
                        if other.holds(b, c) {
                            out.set(a, c);
                        }
                    }
                }
            }
        }
        out
    }

    /// The equivalence `a ~ b` iff `a <= b` and `b <= a`.
    pub fn symmetric_part(&self) -> Relation {
        let mut out = Relation::empty(self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                if self.holds(a, b) && self.holds(b, a) {
                    out.set(a, b);
                }
            }
        }
        out
    }

    /// Classes of an equivalence relation, each sorted, ordered by least member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for a in 0..self.n {
            if seen[a] {
                continue;
            }
            let class: Vec<usize> = (0..self.n).filter(|&b| self.holds(a, b)).collect();
            for &b in &class {
                seen[b] = true;
            }
            out.push(class);
        }
        out
    }
}

/// Green's preorders and equivalences of a finite semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreenStructure {
    pub r_leq: Relation,
    pub l_leq: Relation,
    pub j_leq: Relation,
    pub r_classes: Vec<Vec<usize>>,
    pub l_classes: Vec<Vec<usize>>,
    pub j_classes: Vec<Vec<usize>>,
    pub h_classes: Vec<Vec<usize>>,
}

impl GreenStructure {
    fn compute(s: &FiniteSemigroup) -> Self {
        let n = s.order();
        let mut r_leq = Relation::empty(n);
        let mut l_leq = Relation::empty(n);
        let mut j_leq = Relation::empty(n);
        for t in 0..n {
            r_leq.set(t, t);
            l_leq.set(t, t);
            j_leq.set(t, t);
            for u in 0..n {
                let tu = s.mul(t, u);
                let ut = s.mul(u, t);
                r_leq.set(tu, t);
                l_leq.set(ut, t);
                j_leq.set(tu, t);
                j_leq.set(ut, t);
                for v in 0..n {
                    j_leq.set(s.mul(ut, v), t);
                }
            }
        }
        let r = r_leq.symmetric_part();
        let l = l_leq.symmetric_part();
        let j = j_leq.symmetric_part();
        let h = r.intersect(&l);
        GreenStructure {
            r_classes: r.classes(),
            l_classes: l.classes(),
            j_classes: j.classes(),
            h_classes: h.classes(),
            r_leq,
            l_leq,
            j_leq,
        }
    }

    pub fn r(&self) -> Relation {
        self.r_leq.symmetric_part()
    }

    pub fn l(&self) -> Relation {
        self.l_leq.symmetric_part()
    }

    pub fn j(&self) -> Relation {
        self.j_leq.symmetric_part()
    }

    pub fn h(&self) -> Relation {
        self.r().intersect(&self.l())
    }

    pub fn h_class_of(&self, x: usize) -> &[usize] {
        self.h_classes
            .iter()
            .find(|c| c.contains(&x))
            .expect("H-classes partition the semigroup")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteSemigroup {
        "2\n0 1\n1 0\n".parse().unwrap()
    }

    #[test]
    fn trivial_and_z2_load() {
        let t: FiniteSemigroup = "1\n0\n".parse().unwrap();
        assert_eq!(t.order(), 1);
        assert!(t.is_group());
        let g = z2();
        assert!(g.is_group());
        assert_eq!(g.identity(), Some(0));
    }

    #[test]
    fn two_by_two_table_checked_exhaustively() {
        // rows "0 1 / 1 1": 0 is an identity and 1 a zero, so the table is associative.
        let s: FiniteSemigroup = "2\n0 1\n1 1\n".parse().unwrap();
        assert!(s.is_monoid());
        assert_eq!(s.identity(), Some(0));
        // a non-associative table reports the first violating triple
        let err = "2\n1 0\n0 0\n".parse::<FiniteSemigroup>().unwrap_err();
        assert_eq!(err, SemigroupError::NotAssociative { i: 0, j: 0, k: 1 });
    }

    #[test]
    fn malformed_tables() {
        assert!(matches!(
            "2\n0 1\n".parse::<FiniteSemigroup>(),
            Err(SemigroupError::MalformedTable(_))
        ));
        assert!(matches!(
            "2\n0 2\n1 0\n".parse::<FiniteSemigroup>(),
            Err(SemigroupError::MalformedTable(_))
        ));
        assert!(matches!(
            "2\n0 1 1\n1 0\n".parse::<FiniteSemigroup>(),
            Err(SemigroupError::MalformedTable(_))
        ));
        assert!(matches!(
            "x\n".parse::<FiniteSemigroup>(),
            Err(SemigroupError::MalformedTable(_))
        ));
        assert!(matches!(
            "".parse::<FiniteSemigroup>(),
            Err(SemigroupError::MalformedTable(_))
        ));
        assert!(matches!(
            "1\n0\nbogus\n".parse::<FiniteSemigroup>(),
            Err(SemigroupError::MalformedTable(_))
        ));
        assert!(matches!(
            "2\n0 0\n0 0\nlabels: a\n".parse::<FiniteSemigroup>(),
            Err(SemigroupError::MalformedTable(_))
        ));
    }

    #[test]
    fn labels_round_trip() {
        let s: FiniteSemigroup = "2\n0 0\n0 0\nlabels: 0 a\n".parse().unwrap();
        assert_eq!(s.label(1), "a");
        let back: FiniteSemigroup = s.to_text().parse().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn green_of_group_is_one_class() {
        let g = FiniteSemigroup::cyclic_group(3);
        let green = g.green();
        for classes in [
            &green.r_classes,
            &green.l_classes,
            &green.j_classes,
            &green.h_classes,
        ] {
            assert_eq!(classes, &vec![vec![0, 1, 2]]);
        }
    }

    #[test]
    fn green_of_null() {
        let green = FiniteSemigroup::null(2).green();
        assert_eq!(green.h_classes, vec![vec![0], vec![1]]);
        assert!(green.r_leq.holds(0, 1));
        assert!(!green.r_leq.holds(1, 0));
        assert!(green.r_leq.holds(1, 1));
    }

    #[test]
    fn green_of_left_and_right_zero() {
        // xy = x: sS^1 = {s} so R is trivial, while S^1 s = S makes L universal.
        let lz = FiniteSemigroup::left_zero(2).green();
        assert_eq!(lz.r_classes, vec![vec![0], vec![1]]);
        assert_eq!(lz.l_classes, vec![vec![0, 1]]);
        let rz = FiniteSemigroup::right_zero(2).green();
        assert_eq!(rz.r_classes, vec![vec![0, 1]]);
        assert_eq!(rz.l_classes, vec![vec![0], vec![1]]);
    }

    #[test]
    fn power_profiles() {
        let lz = FiniteSemigroup::left_zero(2);
        let p = lz.power_profile(1);
        assert_eq!((p.index, p.period, p.idempotent_power), (1, 1, 1));
        let null = FiniteSemigroup::null(2);
        let p = null.power_profile(1);
        assert_eq!((p.index, p.period, p.idempotent_power), (2, 1, 2));
        let z3 = FiniteSemigroup::cyclic_group(3);
        let p = z3.power_profile(1);
        assert_eq!((p.index, p.period, p.idempotent_power), (1, 3, 3));
    }

    #[test]
    fn power_profile_with_tail_and_cycle() {
        // monogenic semigroup a, a^2, a^3 = a^5, cycle {a^3, a^4}
        let mut table = vec![0; 16];
        // element i is a^(i+1)
        let reduce = |e: usize| if e <= 4 { e } else { 3 + (e - 3) % 2 };
        for i in 0..4 {
            for j in 0..4 {
                table[i * 4 + j] = reduce(i + j + 2) - 1;
            }
        }
        let s = FiniteSemigroup::from_table(4, table).unwrap();
        let p = s.power_profile(0);
        assert_eq!((p.index, p.period), (3, 2));
        assert_eq!(p.idempotent_power, 4);
        let e = s.pow(0, p.idempotent_power);
        assert!(s.is_idempotent(e));
    }

    #[test]
    fn union_of_groups_predicate() {
        assert!(z2().is_union_of_groups());
        assert!(FiniteSemigroup::left_zero(2).is_union_of_groups());
        assert_eq!(FiniteSemigroup::null(2).non_group_element(), Some(1));
    }

    #[test]
    fn relative_identities_predicate() {
        assert!(z2().has_relative_identities());
        assert!(FiniteSemigroup::left_zero(2).has_relative_identities());
        assert_eq!(
            FiniteSemigroup::null(2).relative_identity_violators(),
            vec![1]
        );
        let monoid = FiniteSemigroup::null(2).with_identity_adjoined();
        assert!(monoid.is_monoid());
        assert!(monoid.has_relative_identities());
        assert!(!monoid.is_union_of_groups());
    }

    #[test]
    fn generated_subsemigroup() {
        let z3 = FiniteSemigroup::cyclic_group(3);
        assert_eq!(z3.generated_by(&[1]), vec![true, true, true]);
        assert_eq!(z3.generated_by(&[0]), vec![true, false, false]);
        let null = FiniteSemigroup::null(2);
        assert_eq!(null.generated_by(&[1]), vec![true, true]);
    }
}
