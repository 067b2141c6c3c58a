//! Brute-force ground truth: relation enumeration, generator-map checks,
//! isomorphism semi-decision and exhaustive enumeration of small objects.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::graded::{Ambient, GeneratedSub, GradedElement, GradedError, Truncation};
use crate::semigroup::FiniteSemigroup;
use crate::witness::{Expression, GeneratorMap, RelationWitness, WitnessError};

pub const MAX_GENERATORS: usize = 8;
/// Cap on the number of words enumerated in non-commutative ambients.
pub const MAX_WORDS: usize = 1 << 22;
pub const MAX_CENSUS_ORDER: usize = 4;
pub const MAX_SUBSET_SCAN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} generators exceed the limit of {limit}")]
    TooManyGenerators { count: usize, limit: usize },
    #[error("degree bound must be positive")]
    ZeroDegree,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Coordinates of generator products, one evaluator per generator list.
struct Evaluator {
    table: Option<Arc<FiniteSemigroup>>,
    gens: Vec<Vec<u64>>,
    dim: usize,
}

impl Evaluator {
    fn new(ambient: &Ambient, gens: &[GradedElement]) -> Self {
        let gens: Vec<Vec<u64>> = gens.iter().map(GradedElement::coordinates).collect();
        let dim = gens[0].len();
        let table = match ambient {
            Ambient::NxS(s) => Some(s.clone()),
            _ => None,
        };
        Evaluator { table, gens, dim }
    }

    fn exponents(&self, exps: &[u64], out: &mut [u64]) {
        out.fill(0);
        for (g, &a) in self.gens.iter().zip(exps) {
            for (o, &x) in out.iter_mut().zip(g) {
                *o += a * x;
            }
        }
    }

    fn step(&self, prefix: &[u64], gen: usize, out: &mut [u64]) {
        let g = &self.gens[gen];
        match &self.table {
            Some(s) => {
                out[0] = prefix[0] + g[0];
                out[1] = s.mul(prefix[1] as usize, g[1] as usize) as u64;
            }
            None => {
                for ((o, &p), &x) in out.iter_mut().zip(prefix).zip(g) {
                    *o = p + x;
                }
            }
        }
    }

    fn element(&self, coords: &[u64]) -> GradedElement {
        match &self.table {
            Some(_) => GradedElement::element(coords[0], coords[1] as usize),
            None => GradedElement::vector(coords[0], coords[1..].to_vec()),
        }
    }

    fn packer(&self, degree: u64) -> Packer {
        let mut bits = Vec::with_capacity(self.dim);
        for c in 0..self.dim {
            let max = match (&self.table, c) {
                (Some(s), 1) => s.order() as u64,
                _ => self
                    .gens
                    .iter()
                    .map(|g| g[c])
                    .max()
                    .unwrap()
                    .saturating_mul(degree),
            };
            bits.push(64 - max.leading_zeros());
        }
        let packed = bits.iter().sum::<u32>() <= 128;
        Packer { bits, packed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Packed(u128),
    Wide(Box<[u64]>),
}

struct Packer {
    bits: Vec<u32>,
    packed: bool,
}

impl Packer {
    #[inline]
    fn key(&self, coords: &[u64]) -> Key {
        if self.packed {
            let mut k = 0u128;
            for (&c, &b) in coords.iter().zip(&self.bits) {
                k = (k << b) | c as u128;
            }
            Key::Packed(k)
        } else {
            Key::Wide(coords.into())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Exponents,
    Words,
}

fn mode_for(ambients: &[&Ambient]) -> Mode {
    if ambients.iter().all(|a| a.semigroup().is_none()) {
        Mode::Exponents
    } else {
        Mode::Words
    }
}

/// Compact expression codes: 16-bit exponents, or `(length, word index)`.
struct Codec {
    mode: Mode,
    k: usize,
}

impl Codec {
    fn exponents(exps: &[u64]) -> u128 {
        exps.iter()
            .rev()
            .fold(0u128, |acc, &a| (acc << 16) | a as u128)
    }

    fn word(len: usize, index: usize) -> u128 {
        ((len as u128) << 64) | index as u128
    }

    fn decode(&self, code: u128) -> Expression {
        match self.mode {
            Mode::Exponents => Expression::Exponents(
                (0..self.k)
                    .map(|i| ((code >> (16 * i)) & 0xffff) as u64)
                    .collect(),
            ),
            Mode::Words => {
                let len = (code >> 64) as usize;
                let mut idx = (code & u64::MAX as u128) as usize;
                let mut w = vec![0; len];
                for slot in w.iter_mut().rev() {
                    *slot = idx % self.k;
                    idx /= self.k;
                }
                Expression::Word(w)
            }
        }
    }
}

fn check_sizes(k: usize, degree: u64, mode: Mode) -> Result<(), OracleError> {
    if k > MAX_GENERATORS {
        return Err(OracleError::TooManyGenerators {
            count: k,
            limit: MAX_GENERATORS,
        });
    }
    if degree == 0 {
        return Err(OracleError::ZeroDegree);
    }
    match mode {
        Mode::Exponents if degree > 0xffff => {
            Err(OracleError::TooLarge(format!("degree {degree}")))
        }
        Mode::Words => {
            let mut total = 0usize;
            let mut level = 1usize;
            for _ in 0..degree {
                level = level.saturating_mul(k);
                total = total.saturating_add(level);
                if total > MAX_WORDS {
                    return Err(OracleError::TooLarge(format!(
                        "more than {MAX_WORDS} words of length at most {degree} over {k} generators"
                    )));
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Visits every product of degree `1..=degree`, by degree and then
/// lexicographically (exponent vectors in decreasing order of the first
/// exponent), with its coordinates under each evaluator.
fn for_each_expression<F>(
    evals: &[Evaluator],
    k: usize,
    degree: u64,
    mode: Mode,
    mut f: F,
) -> ControlFlow<()>
where
    F: FnMut(u128, &[Vec<u64>]) -> ControlFlow<()>,
{
    let mut vals: Vec<Vec<u64>> = evals.iter().map(|e| vec![0; e.dim]).collect();
    match mode {
        Mode::Exponents => {
            let mut a = vec![0u64; k];
            for d in 1..=degree {
                a.fill(0);
                a[0] = d;
                loop {
                    for (e, v) in evals.iter().zip(vals.iter_mut()) {
                        e.exponents(&a, v);
                    }
                    f(Codec::exponents(&a), &vals)?;
                    let tail = a[k - 1];
                    a[k - 1] = 0;
                    let Some(i) = (0..k - 1).rev().find(|&i| a[i] > 0) else {
                        break;
                    };
                    a[i] -= 1;
                    a[i + 1] = tail + 1;
                }
            }
        }
        Mode::Words => {
            let mut levels: Vec<Vec<u64>> = evals.iter().map(|e| e.gens.concat()).collect();
            for (i, _) in evals[0].gens.iter().enumerate() {
                for (e, v) in evals.iter().zip(vals.iter_mut()) {
                    v.copy_from_slice(&e.gens[i]);
                }
                f(Codec::word(1, i), &vals)?;
            }
            let mut count = k;
            for len in 2..=degree as usize {
                let mut next: Vec<Vec<u64>> = evals
                    .iter()
                    .map(|e| Vec::with_capacity(count * k * e.dim))
                    .collect();
                for w in 0..count {
                    for i in 0..k {
                        for (ei, e) in evals.iter().enumerate() {
                            let prefix = &levels[ei][w * e.dim..(w + 1) * e.dim];
                            e.step(prefix, i, &mut vals[ei]);
                            next[ei].extend_from_slice(&vals[ei]);
                        }
                        f(Codec::word(len, w * k + i), &vals)?;
                    }
                }
                levels = next;
                count *= k;
            }
        }
    }
    ControlFlow::Continue(())
}

/// Products of one value, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationGroup {
    pub value: GradedElement,
    pub expressions: Vec<Expression>,
}

/// Every pair of distinct products of degree at most `degree` with equal
/// value, grouped by that value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationTable {
    pub degree: u64,
    pub groups: Vec<RelationGroup>,
}

impl RelationTable {
    /// Number of unordered relations.
    pub fn len(&self) -> usize {
        self.groups
            .iter()
            .map(|g| g.expressions.len() * (g.expressions.len() - 1) / 2)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Relations with sides in canonical order.
    pub fn relations(&self) -> impl Iterator<Item = RelationWitness> + '_ {
        self.groups.iter().flat_map(|g| {
            g.expressions.iter().tuple_combinations().map(|(a, b)| {
                RelationWitness {
                    lhs: a.clone(),
                    rhs: b.clone(),
                }
                .canonical()
            })
        })
    }

    /// Either orientation counts.
    pub fn contains(&self, r: &RelationWitness) -> bool {
        r.lhs != r.rhs
            && self
                .groups
                .iter()
                .any(|g| g.expressions.contains(&r.lhs) && g.expressions.contains(&r.rhs))
    }
}

pub fn relations_up_to(sub: &GeneratedSub, degree: u64) -> Result<RelationTable, OracleError> {
    let k = sub.generators().len();
    let mode = mode_for(&[sub.ambient()]);
    check_sizes(k, degree, mode)?;
    let eval = Evaluator::new(sub.ambient(), sub.generators());
    let packer = eval.packer(degree);
    let evals = [eval];
    let mut buckets: HashMap<Key, (Vec<u64>, Vec<u128>)> = HashMap::new();
    let _ = for_each_expression(&evals, k, degree, mode, |code, vals| {
        buckets
            .entry(packer.key(&vals[0]))
            .or_insert_with(|| (vals[0].clone(), Vec::new()))
            .1
            .push(code);
        ControlFlow::Continue(())
    });
    let codec = Codec { mode, k };
    let mut groups: Vec<RelationGroup> = buckets
        .into_values()
        .filter(|(_, codes)| codes.len() > 1)
        .map(|(coords, codes)| RelationGroup {
            value: evals[0].element(&coords),
            expressions: codes.into_iter().map(|c| codec.decode(c)).collect(),
        })
        .collect();
    groups.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(RelationTable { degree, groups })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// A relation of the source whose image fails in the target.
    Forward,
    /// A relation of the target whose preimage fails in the source.
    Backward,
}

/// A relation on one side that the map does not carry to the other side.
/// The relation is written over the generators of the side where it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapViolation {
    pub direction: Direction,
    pub relation: RelationWitness,
    /// Common value of both sides where the relation holds.
    pub value: GradedElement,
    /// Values of the two sides on the other side of the map.
    pub images: (GradedElement, GradedElement),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Preservation {
    Preserved,
    Violated(MapViolation),
}

impl Preservation {
    pub fn is_preserved(&self) -> bool {
        matches!(self, Preservation::Preserved)
    }
}

/// Whether `map` and its inverse respect every relation of degree at most
/// `degree`, reporting the first failure in enumeration order.
pub fn map_preserves(map: &GeneratorMap, degree: u64) -> Result<Preservation, OracleError> {
    let k = map.source.generators().len();
    let mode = mode_for(&[map.source.ambient(), map.target.ambient()]);
    check_sizes(k, degree, mode)?;
    let src = Evaluator::new(map.source.ambient(), map.source.generators());
    let tgt = Evaluator::new(map.target.ambient(), &map.target_in_source_order());
    let (sp, tp) = (src.packer(degree), tgt.packer(degree));
    let evals = [src, tgt];
    let mut fwd: HashMap<Key, (Key, u128)> = HashMap::new();
    let mut bwd: HashMap<Key, (Key, u128)> = HashMap::new();
    let mut found: Option<(Direction, u128, u128)> = None;
    let _ = for_each_expression(&evals, k, degree, mode, |code, vals| {
        let (sk, tk) = (sp.key(&vals[0]), tp.key(&vals[1]));
        match fwd.entry(sk.clone()) {
            Entry::Occupied(o) if o.get().0 != tk => {
                found = Some((Direction::Forward, o.get().1, code));
                return ControlFlow::Break(());
            }
            Entry::Occupied(_) => {}
            Entry::Vacant(v) => {
                v.insert((tk.clone(), code));
            }
        }
        match bwd.entry(tk) {
            Entry::Occupied(o) if o.get().0 != sk => {
                found = Some((Direction::Backward, o.get().1, code));
                ControlFlow::Break(())
            }
            Entry::Occupied(_) => ControlFlow::Continue(()),
            Entry::Vacant(v) => {
                v.insert((sk, code));
                ControlFlow::Continue(())
            }
        }
    });
    let Some((direction, first, second)) = found else {
        return Ok(Preservation::Preserved);
    };
    let codec = Codec { mode, k };
    let (a, b) = (codec.decode(first), codec.decode(second));
    let (fa, fb) = (map.apply(&a), map.apply(&b));
    let (sa, sb) = (a.evaluate(&map.source), b.evaluate(&map.source));
    let (ta, tb) = (fa.evaluate(&map.target), fb.evaluate(&map.target));
    let v = match direction {
        Direction::Forward => MapViolation {
            direction,
            relation: RelationWitness { lhs: a, rhs: b },
            value: sa,
            images: (ta, tb),
        },
        Direction::Backward => MapViolation {
            direction,
            relation: RelationWitness { lhs: fa, rhs: fb },
            value: ta,
            images: (sa, sb),
        },
    };
    Ok(Preservation::Violated(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NonIsoWitness {
    IndecomposableCount {
        source: usize,
        target: usize,
    },
    /// Every bijection of indecomposables, each with the relation it breaks.
    AllBijectionsViolated(Vec<(Vec<usize>, MapViolation)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IsoVerdict {
    NonIsomorphic(NonIsoWitness),
    /// Some bijection respects all relations up to `degree`. This is not a
    /// proof of isomorphism.
    ConsistentUpTo {
        degree: u64,
        bijection: Vec<usize>,
    },
}

impl IsoVerdict {
    pub fn is_non_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::NonIsomorphic(_))
    }
}

/// The indecomposables of `sub`, as a subsemigroup presented by them.
pub fn minimal_presentation(sub: &GeneratedSub) -> Result<GeneratedSub, OracleError> {
    let ind = sub.truncated_closure(sub.max_grade())?.indecomposables();
    Ok(sub.with_generators(ind)?)
}

/// Any isomorphism maps indecomposables onto indecomposables, so it is
/// pinned down by a bijection between them; every bijection is tested.
pub fn iso_semidecision(
    a: &GeneratedSub,
    b: &GeneratedSub,
    degree: u64,
) -> Result<IsoVerdict, OracleError> {
    let a = minimal_presentation(a)?;
    let b = minimal_presentation(b)?;
    let (ka, kb) = (a.generators().len(), b.generators().len());
    if ka != kb {
        return Ok(IsoVerdict::NonIsomorphic(
            NonIsoWitness::IndecomposableCount {
                source: ka,
                target: kb,
            },
        ));
    }
    if ka > MAX_GENERATORS {
        return Err(OracleError::TooManyGenerators {
            count: ka,
            limit: MAX_GENERATORS,
        });
    }
    let mut violations = Vec::new();
    for perm in (0..ka).permutations(ka) {
        let map = GeneratorMap::new(a.clone(), b.clone(), perm.clone())?;
        match map_preserves(&map, degree)? {
            Preservation::Preserved => {
                return Ok(IsoVerdict::ConsistentUpTo {
                    degree,
                    bijection: perm,
                })
            }
            Preservation::Violated(v) => violations.push((perm, v)),
        }
    }
    Ok(IsoVerdict::NonIsomorphic(
        NonIsoWitness::AllBijectionsViolated(violations),
    ))
}

const UNSET: usize = usize::MAX;

fn partial_associative(t: &[usize], n: usize) -> bool {
    for a in 0..n {
        for b in 0..n {
            let ab = t[a * n + b];
            if ab == UNSET {
                continue;
            }
            for c in 0..n {
                let bc = t[b * n + c];
                if bc == UNSET {
                    continue;
                }
                let (l, r) = (t[ab * n + c], t[a * n + bc]);
                if l != UNSET && r != UNSET && l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// All associative tables on `{0, ..., n-1}`.
pub fn associative_tables(n: usize) -> Result<Vec<Vec<usize>>, OracleError> {
    if n > MAX_CENSUS_ORDER {
        return Err(OracleError::TooLarge(format!(
            "census of order {n} (limit {MAX_CENSUS_ORDER})"
        )));
    }
    fn go(t: &mut Vec<usize>, cell: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if cell == n * n {
            out.push(t.clone());
            return;
        }
        for v in 0..n {
            t[cell] = v;
            if partial_associative(t, n) {
                go(t, cell + 1, n, out);
            }
        }
        t[cell] = UNSET;
    }
    let mut out = Vec::new();
    if n > 0 {
        go(&mut vec![UNSET; n * n], 0, n, &mut out);
    }
    Ok(out)
}

/// Lexicographically least relabeling of a table.
pub fn canonical_table(t: &[usize], n: usize) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut u = vec![0; n * n];
    for p in (0..n).permutations(n) {
        for i in 0..n {
            for j in 0..n {
                u[p[i] * n + p[j]] = p[t[i * n + j]];
            }
        }
        if best.as_ref().is_none_or(|b| u < *b) {
            best = Some(u.clone());
        }
    }
    best.unwrap_or_default()
}

/// Semigroups of order `n` up to isomorphism, in canonical form, sorted.
pub fn census(n: usize) -> Result<Vec<FiniteSemigroup>, OracleError> {
    let canon: BTreeSet<Vec<usize>> = associative_tables(n)?
        .iter()
        .map(|t| canonical_table(t, n))
        .collect();
    Ok(canon
        .into_iter()
        .map(|t| FiniteSemigroup::from_table(n, t).expect("enumerated tables are associative"))
        .collect())
}

/// Number of subsets of a truncation closed under products whose grade
/// stays within the bound.
pub fn enumerate_subsemigroups(t: &Truncation) -> Result<u64, OracleError> {
    let n = t.len();
    if n > MAX_SUBSET_SCAN {
        return Err(OracleError::TooLarge(format!(
            "{n} elements (limit {MAX_SUBSET_SCAN})"
        )));
    }
    let amb = t.ambient();
    let mut prod = vec![None; n * n];
    for (i, a) in t.elements().iter().enumerate() {
        for (j, b) in t.elements().iter().enumerate() {
            let p = amb.mul(a, b);
            if p.grade <= t.bound() {
                prod[i * n + j] = Some(t.index_of(&p).expect("truncations are closed"));
            }
        }
    }
    let count = (0u32..1 << n)
        .filter(|&mask| {
            let bits: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            bits.iter().all(|&i| {
                bits.iter()
                    .all(|&j| prod[i * n + j].is_none_or(|p| mask >> p & 1 == 1))
            })
        })
        .count();
    Ok(count as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{build_sm, freeness_class, Freeness};

    #[test]
    fn free_and_non_free() {
        assert!(relations_up_to(&build_sm(&[1, 2]).unwrap(), 6)
            .unwrap()
            .is_empty());
        let t = relations_up_to(&build_sm(&[1, 2, 4]).unwrap(), 7).unwrap();
        let Freeness::NonFree(w) = freeness_class(&[1, 2, 4]).unwrap() else {
            unreachable!()
        };
        assert!(t.contains(&w));
        assert!(t.contains(&RelationWitness {
            lhs: w.rhs.clone(),
            rhs: w.lhs.clone()
        }));
        let g = t
            .groups
            .iter()
            .find(|g| g.value == GradedElement::pair(7, 14))
            .unwrap();
        assert!(g.expressions.contains(&w.lhs));
        assert_eq!(t.relations().count(), t.len());
    }

    #[test]
    fn idempotent_powers_are_separated_by_grade() {
        let s = Arc::new(FiniteSemigroup::null(2));
        let sub = GeneratedSub::new(Ambient::NxS(s), vec![GradedElement::element(1, 0)]).unwrap();
        assert!(relations_up_to(&sub, 4).unwrap().is_empty());
    }

    #[test]
    fn word_relations_in_nxs() {
        let s = Arc::new(FiniteSemigroup::left_zero(2));
        let sub = GeneratedSub::new(
            Ambient::NxS(s),
            vec![GradedElement::element(1, 0), GradedElement::element(1, 1)],
        )
        .unwrap();
        let t = relations_up_to(&sub, 2).unwrap();
        // ab = a·a and ba = b·b in a left zero semigroup
        assert_eq!(t.len(), 2);
        assert!(t.contains(&RelationWitness {
            lhs: Expression::Word(vec![0, 1]),
            rhs: Expression::Word(vec![0, 0])
        }));
    }

    #[test]
    fn map_examples() {
        let a = build_sm(&[1, 2, 4]).unwrap();
        assert!(map_preserves(&GeneratorMap::identity(&a), 8)
            .unwrap()
            .is_preserved());
        let rev = GeneratorMap::new(
            build_sm(&[1, 2, 3]).unwrap(),
            build_sm(&[1, 2, 3]).unwrap(),
            vec![2, 1, 0],
        )
        .unwrap();
        assert!(map_preserves(&rev, 7).unwrap().is_preserved());
        let swap =
            GeneratorMap::new(a.clone(), build_sm(&[1, 2, 4]).unwrap(), vec![1, 0, 2]).unwrap();
        let Preservation::Violated(v) = map_preserves(&swap, 7).unwrap() else {
            panic!("swapping 1 and 2 is not a homomorphism");
        };
        assert_eq!(v.direction, Direction::Forward);
        assert!(v.relation.holds_in(&a));
        assert_ne!(v.images.0, v.images.1);
        let Freeness::NonFree(w) = freeness_class(&[1, 2, 4]).unwrap() else {
            unreachable!()
        };
        let images = (
            swap.apply(&w.lhs).evaluate(&swap.target),
            swap.apply(&w.rhs).evaluate(&swap.target),
        );
        assert_eq!(
            images,
            (GradedElement::pair(7, 12), GradedElement::pair(7, 17))
        );
    }

    #[test]
    fn backward_violations_are_caught() {
        // free source, non-free target: only the inverse fails
        let a = build_sm(&[1, 2]).unwrap();
        let b = GeneratedSub::new(
            Ambient::NxN,
            vec![GradedElement::pair(1, 1), GradedElement::pair(2, 2)],
        )
        .unwrap();
        let Preservation::Violated(v) =
            map_preserves(&GeneratorMap::new(a, b.clone(), vec![0, 1]).unwrap(), 2).unwrap()
        else {
            panic!("(1,1)^2 = (2,2) has no counterpart in S_{{1,2}}");
        };
        assert_eq!(v.direction, Direction::Backward);
        assert!(v.relation.holds_in(&b));
    }

    #[test]
    fn iso_examples() {
        let a = build_sm(&[1, 2, 4]).unwrap();
        assert_eq!(
            iso_semidecision(&a, &a, 8).unwrap(),
            IsoVerdict::ConsistentUpTo {
                degree: 8,
                bijection: vec![0, 1, 2]
            }
        );
        assert_eq!(
            iso_semidecision(&build_sm(&[1, 2]).unwrap(), &a, 8).unwrap(),
            IsoVerdict::NonIsomorphic(NonIsoWitness::IndecomposableCount {
                source: 2,
                target: 3
            })
        );
        let v = iso_semidecision(&a, &build_sm(&[1, 2, 9]).unwrap(), 14).unwrap();
        let IsoVerdict::NonIsomorphic(NonIsoWitness::AllBijectionsViolated(all)) = v else {
            panic!()
        };
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn census_counts() {
        let counts: Vec<usize> = (0..=3).map(|n| census(n).unwrap().len()).collect();
        assert_eq!(counts, vec![0, 1, 5, 24]);
        assert_eq!(associative_tables(2).unwrap().len(), 8);
        assert_eq!(associative_tables(3).unwrap().len(), 113);
        assert!(matches!(census(5), Err(OracleError::TooLarge(_))));
    }

    #[test]
    fn subset_scans() {
        let chain = GeneratedSub::new(Ambient::NxN, vec![GradedElement::pair(1, 1)]).unwrap();
        assert_eq!(
            enumerate_subsemigroups(&chain.truncated_closure(3).unwrap()).unwrap(),
            5
        );
        assert_eq!(
            enumerate_subsemigroups(&Truncation::empty(Ambient::NxN, 3)).unwrap(),
            1
        );
        let sm = build_sm(&[1, 2]).unwrap();
        assert_eq!(
            enumerate_subsemigroups(&sm.truncated_closure(1).unwrap()).unwrap(),
            4
        );
    }

    #[test]
    fn limits() {
        let gens = (1..=9).map(|m| GradedElement::pair(1, m)).collect();
        let big = GeneratedSub::new(Ambient::NxN, gens).unwrap();
        assert!(matches!(
            relations_up_to(&big, 2),
            Err(OracleError::TooManyGenerators { .. })
        ));
        assert_eq!(
            relations_up_to(&build_sm(&[1]).unwrap(), 0),
            Err(OracleError::ZeroDegree)
        );
    }
}
