//! Concrete families of subsemigroups and the data certifying that their
//! members are pairwise non-isomorphic.
//!
//! `S_M = ⟨(1, m) : m ∈ M⟩ ≤ N x N` and its lift `T_M ≤ N^k` are built here,
//! together with the two families inside `N x S`: one for semigroups that
//! are not unions of groups, one (subdirect) for semigroups with an element
//! lacking relative identities.

use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::graded::{Ambient, Fiber, GeneratedSub, GradedElement, GradedError};
use crate::semigroup::FiniteSemigroup;
use crate::separating::{triple_identity, SeparatingSet, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the integer set is empty")]
    EmptySet,
    #[error("invalid integer set: {0}")]
    InvalidSet(String),
    #[error("triple {0:?} has repeated entries")]
    DegenerateTriple(Triple),
    #[error("1 must belong to the set")]
    MissingOne,
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("the semigroup is a union of groups")]
    IsUnionOfGroups,
    #[error("every element of the semigroup has a relative identity")]
    HasRelativeIdentities,
    #[error("bad parameter set: {0}")]
    BadM(String),
    #[error("pool is not strongly 3-separating: {0}")]
    NotSeparating(String),
    #[error("generator map is not a bijection: {0}")]
    NotBijection(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// The correspondence `(1, m_i) -> (1, n_i)` together with whether it
/// satisfies `n2 (m3 - m1) = n1 (m3 - m2) + n3 (m2 - m1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleCriterion {
    pub m_triple: Triple,
    pub n_triple: Triple,
    pub holds: bool,
}

fn check_triple(t: Triple) -> Result<(), WitnessError> {
    if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
        Err(WitnessError::DegenerateTriple(t))
    } else {
        Ok(())
    }
}

pub fn triple_criterion(m: Triple, n: Triple) -> Result<TripleCriterion, WitnessError> {
    check_triple(m)?;
    check_triple(n)?;
    Ok(TripleCriterion {
        m_triple: m,
        n_triple: n,
        holds: triple_identity(m, n),
    })
}

/// Whether the generator correspondence `(1, m_i) -> (1, n_i)` extends to an
/// isomorphism `S_M -> S_N`.
pub fn correspondence_is_isomorphism(m: Triple, n: Triple) -> Result<bool, WitnessError> {
    Ok(triple_criterion(m, n)?.holds)
}

/// A product of generators: an exponent vector over the generator list
/// (commutative ambients) or a word of generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Expression {
    Exponents(Vec<u64>),
    Word(Vec<usize>),
}

impl Expression {
    pub fn degree(&self) -> u64 {
        match self {
            Expression::Exponents(e) => e.iter().sum(),
            Expression::Word(w) => w.len() as u64,
        }
    }

    /// Value in `sub`. Panics on an empty expression or an index outside the
    /// generator list.
    pub fn evaluate(&self, sub: &GeneratedSub) -> GradedElement {
        let gens = sub.generators();
        let amb = sub.ambient();
        let mut acc: Option<GradedElement> = None;
        let mut push = |e: GradedElement| {
            acc = Some(match acc.take() {
                None => e,
                Some(a) => amb.mul(&a, &e),
            });
        };
        match self {
            Expression::Exponents(exps) => {
                for (i, &a) in exps.iter().enumerate() {
                    if a > 0 {
                        push(amb.pow(&gens[i], a));
                    }
                }
            }
            Expression::Word(w) => {
                for &i in w {
                    push(gens[i].clone());
                }
            }
        }
        acc.expect("expressions have positive degree")
    }
}

/// Two different products of generators with the same value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RelationWitness {
    pub lhs: Expression,
    pub rhs: Expression,
}

impl RelationWitness {
    pub fn holds_in(&self, sub: &GeneratedSub) -> bool {
        self.lhs != self.rhs && self.lhs.evaluate(sub) == self.rhs.evaluate(sub)
    }

    pub fn degree(&self) -> u64 {
        self.lhs.degree().max(self.rhs.degree())
    }

    /// The same relation with sides in canonical order.
    pub fn canonical(self) -> Self {
        if self.lhs <= self.rhs {
            self
        } else {
            RelationWitness {
                lhs: self.rhs,
                rhs: self.lhs,
            }
        }
    }
}

/// A bijection between generator lists, read as a candidate homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorMap {
    pub source: GeneratedSub,
    pub target: GeneratedSub,
    /// `image[i]` is the target generator that source generator `i` maps to.
    pub image: Vec<usize>,
}

impl GeneratorMap {
    pub fn new(
        source: GeneratedSub,
        target: GeneratedSub,
        image: Vec<usize>,
    ) -> Result<Self, WitnessError> {
        let k = source.generators().len();
        if target.generators().len() != k || image.len() != k {
            return Err(WitnessError::NotBijection(format!(
                "{} source generators, {} target generators, {} images",
                k,
                target.generators().len(),
                image.len()
            )));
        }
        let mut hit = vec![false; k];
        for &i in &image {
            if i >= k || hit[i] {
                return Err(WitnessError::NotBijection(format!("image {image:?}")));
            }
            hit[i] = true;
        }
        Ok(GeneratorMap {
            source,
            target,
            image,
        })
    }

    pub fn identity(sub: &GeneratedSub) -> Self {
        let k = sub.generators().len();
        GeneratorMap {
            source: sub.clone(),
            target: sub.clone(),
            image: (0..k).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        GeneratorMap {
            source: self.target.clone(),
            target: self.source.clone(),
            image: inv,
        }
    }

    /// Rewrites a source expression over the target generators.
    pub fn apply(&self, e: &Expression) -> Expression {
        match e {
            Expression::Exponents(exps) => {
                let mut out = vec![0; exps.len()];
                for (i, &a) in exps.iter().enumerate() {
                    out[self.image[i]] += a;
                }
                Expression::Exponents(out)
            }
            Expression::Word(w) => Expression::Word(w.iter().map(|&i| self.image[i]).collect()),
        }
    }

    /// Target generators listed in source order.
    pub fn target_in_source_order(&self) -> Vec<GradedElement> {
        self.image
            .iter()
            .map(|&j| self.target.generators()[j].clone())
            .collect()
    }
}

fn normalize_set(m: &[u64]) -> Result<Vec<u64>, WitnessError> {
    if m.is_empty() {
        return Err(WitnessError::EmptySet);
    }
    let mut v = m.to_vec();
    v.sort_unstable();
    v.dedup();
    if v[0] == 0 {
        return Err(WitnessError::InvalidSet("entries must be positive".into()));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Freeness {
    Free,
    NonFree(RelationWitness),
}

/// `S_M` is free commutative exactly when `|M| <= 2`. Otherwise, for the
/// three smallest elements `m1 < m2 < m3`,
/// `m2 (1,m1) + m3 (1,m2) + m1 (1,m3) = m3 (1,m1) + m1 (1,m2) + m2 (1,m3)`.
pub fn freeness_class(m: &[u64]) -> Result<Freeness, WitnessError> {
    let m = normalize_set(m)?;
    if m.len() <= 2 {
        return Ok(Freeness::Free);
    }
    let mut lhs = vec![0; m.len()];
    let mut rhs = vec![0; m.len()];
    (lhs[0], lhs[1], lhs[2]) = (m[1], m[2], m[0]);
    (rhs[0], rhs[1], rhs[2]) = (m[2], m[0], m[1]);
    Ok(Freeness::NonFree(RelationWitness {
        lhs: Expression::Exponents(lhs),
        rhs: Expression::Exponents(rhs),
    }))
}

/// `S_M = ⟨(1, m) : m ∈ M⟩ ≤ N x N`, generators in increasing order of `m`.
pub fn build_sm(m: &[u64]) -> Result<GeneratedSub, WitnessError> {
    let m = normalize_set(m)?;
    let gens = m.iter().map(|&x| GradedElement::pair(1, x)).collect();
    Ok(GeneratedSub::new(Ambient::NxN, gens)?)
}

/// `T_M = ⟨(1, ..., 1, m) : m ∈ M⟩ ≤ N^k`, which contains the diagonal.
pub fn build_tm(m: &[u64], k: usize) -> Result<GeneratedSub, WitnessError> {
    if k < 2 {
        return Err(WitnessError::BadDimension(k));
    }
    let m = normalize_set(m)?;
    if m[0] != 1 {
        return Err(WitnessError::MissingOne);
    }
    let gens = m
        .iter()
        .map(|&x| {
            let mut fiber = vec![1; k - 1];
            fiber[k - 2] = x;
            GradedElement::vector(1, fiber)
        })
        .collect();
    let ambient = if k == 2 {
        Ambient::NxN
    } else {
        Ambient::NxK(k)
    };
    Ok(GeneratedSub::new(ambient, gens)?)
}

/// `(n, ..., n, p) -> (n, p)`; `None` off the image of `T_M`.
pub fn flatten_diagonal(e: &GradedElement) -> Option<GradedElement> {
    match &e.fiber {
        Fiber::Vector(v) if !v.is_empty() => {
            let (last, front) = v.split_last().unwrap();
            front
                .iter()
                .all(|&x| x == e.grade)
                .then(|| GradedElement::pair(e.grade, *last))
        }
        _ => None,
    }
}

/// A member of one of the `N x S` families, with the element `x` it was
/// built from and the least `k` making `x^k` idempotent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub sub: GeneratedSub,
    pub parameters: Vec<u64>,
    pub element: usize,
    pub idempotent_power: u64,
    pub idempotent: usize,
}

impl FamilyMember {
    /// For each parameter `m`: `((1, x^k)^{mk}, (m, x)^k)`. Both sides
    /// coincide because `x^k` is idempotent.
    pub fn linkage_relations(&self) -> Vec<(u64, GradedElement, GradedElement)> {
        let amb = self.sub.ambient();
        let k = self.idempotent_power;
        let base = GradedElement::element(1, self.idempotent);
        self.parameters
            .iter()
            .map(|&m| {
                let lhs = amb.pow(&base, m * k);
                let rhs = amb.pow(&GradedElement::element(m, self.element), k);
                (m, lhs, rhs)
            })
            .collect()
    }

    /// Truncation bound `2 max(M ∪ {2})` at which every generator is
    /// checked to be indecomposable.
    pub fn indecomposability_bound(&self) -> u64 {
        2 * self.parameters.iter().copied().chain([2]).max().unwrap()
    }
}

/// `⟨(1, x^k), (m, x) : m ∈ M⟩ ≤ N x S` where `x` is the first element
/// whose H-class has no idempotent. `M` must avoid 1.
pub fn non_group_family(s: Arc<FiniteSemigroup>, m: &[u64]) -> Result<FamilyMember, WitnessError> {
    let x = s.non_group_element().ok_or(WitnessError::IsUnionOfGroups)?;
    let mut params = m.to_vec();
    params.sort_unstable();
    params.dedup();
    if let Some(&bad) = params.iter().find(|&&v| v < 2) {
        return Err(WitnessError::BadM(format!(
            "{bad} is not allowed; parameters must be at least 2"
        )));
    }
    let profile = s.power_profile(x);
    let k = profile.idempotent_power;
    debug_assert!(k > 1);
    let e = s.pow(x, k);
    let mut gens = vec![GradedElement::element(1, e)];
    gens.extend(params.iter().map(|&p| GradedElement::element(p, x)));
    let sub = GeneratedSub::new(Ambient::NxS(s), gens)?;
    Ok(FamilyMember {
        sub,
        parameters: params,
        element: x,
        idempotent_power: k,
        idempotent: e,
    })
}

/// `⟨(1, s^k), (2, t), (m, s) : t ∉ {s, s^k}, m ∈ M⟩ ≤ N x S` where `s` is
/// the first element with no relative identity. `M` must consist of odd
/// numbers greater than 1.
pub fn subdirect_family(s: Arc<FiniteSemigroup>, m: &[u64]) -> Result<FamilyMember, WitnessError> {
    let x = *s
        .relative_identity_violators()
        .first()
        .ok_or(WitnessError::HasRelativeIdentities)?;
    let mut params = m.to_vec();
    params.sort_unstable();
    params.dedup();
    if let Some(&bad) = params.iter().find(|&&v| v < 3 || v % 2 == 0) {
        return Err(WitnessError::BadM(format!(
            "{bad} is not allowed; parameters must be odd and at least 3"
        )));
    }
    let k = s.power_profile(x).idempotent_power;
    debug_assert!(k > 1);
    let e = s.pow(x, k);
    let mut gens = vec![GradedElement::element(1, e)];
    gens.extend(
        (0..s.order())
            .filter(|&t| t != x && t != e)
            .map(|t| GradedElement::element(2, t)),
    );
    gens.extend(params.iter().map(|&p| GradedElement::element(p, x)));
    let sub = GeneratedSub::new(Ambient::NxS(s), gens)?;
    Ok(FamilyMember {
        sub,
        parameters: params,
        element: x,
        idempotent_power: k,
        idempotent: e,
    })
}

/// For every ordered pair `(g, h)` of distinct indecomposables, the least
/// `p <= max_exponent` with `h^p = g^q` for some `q <= max_exponent`
/// (and that `q`). Returned sorted, so two subsemigroups whose
/// indecomposables correspond under an isomorphism have equal profiles.
pub fn power_linkage_profile(
    sub: &GeneratedSub,
    bound: u64,
    max_exponent: u64,
) -> Result<Vec<Option<(u64, u64)>>, WitnessError> {
    let ind = sub.truncated_closure(bound)?.indecomposables();
    let amb = sub.ambient();
    let mut out = Vec::new();
    for (i, g) in ind.iter().enumerate() {
        let g_pows: Vec<GradedElement> = (1..=max_exponent).map(|q| amb.pow(g, q)).collect();
        for (j, h) in ind.iter().enumerate() {
            if i == j {
                continue;
            }
            let link = (1..=max_exponent).find_map(|p| {
                let hp = amb.pow(h, p);
                g_pows
                    .iter()
                    .position(|x| *x == hp)
                    .map(|q| (p, q as u64 + 1))
            });
            out.push(link);
        }
    }
    out.sort();
    Ok(out)
}

/// Non-isomorphism evidence for one pair of 3-subsets of a pool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCertificate {
    pub m: Triple,
    pub n: Triple,
    /// Each ordering of `n` tried against `m`, with the criterion verdict.
    pub orderings: Vec<TripleCriterion>,
    pub certified: bool,
}

/// Certifies `S_M ≇ S_N` for every pair of distinct listed subsets: an
/// isomorphism would send indecomposables `(1, m_i)` to some ordering of
/// the `(1, n_i)`, and each ordering is checked against the criterion.
pub fn pairwise_noniso_certificate(
    pool: &SeparatingSet,
    subsets: &[Triple],
) -> Result<Vec<PairCertificate>, WitnessError> {
    if !pool.is_strong() {
        return Err(WitnessError::NotSeparating(pool.to_string()));
    }
    let mut sorted: Vec<Triple> = subsets
        .iter()
        .map(|t| {
            let mut t = *t;
            t.sort_unstable();
            check_triple(t)?;
            if t.iter().any(|x| pool.elements().binary_search(x).is_err()) {
                return Err(WitnessError::InvalidSet(format!(
                    "{t:?} is not contained in the pool"
                )));
            }
            Ok(t)
        })
        .collect::<Result<_, _>>()?;
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::new();
    for (i, &m) in sorted.iter().enumerate() {
        for &n in &sorted[i + 1..] {
            let orderings: Vec<TripleCriterion> = n
                .iter()
                .copied()
                .permutations(3)
                .map(|p| triple_criterion(m, [p[0], p[1], p[2]]))
                .collect::<Result<_, _>>()?;
            let certified = orderings.iter().all(|c| !c.holds);
            out.push(PairCertificate {
                m,
                n,
                orderings,
                certified,
            });
        }
    }
    Ok(out)
}

/// All 3-element subsets of a set, in lexicographic order.
pub fn three_subsets(set: &[u64]) -> Vec<Triple> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v.into_iter()
        .combinations(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_criterion_examples() {
        assert!(correspondence_is_isomorphism([1, 2, 4], [1, 2, 4]).unwrap());
        assert!(correspondence_is_isomorphism([1, 2, 3], [3, 2, 1]).unwrap());
        assert!(!correspondence_is_isomorphism([1, 2, 4], [2, 1, 4]).unwrap());
        assert_eq!(
            correspondence_is_isomorphism([1, 1, 4], [1, 2, 4]),
            Err(WitnessError::DegenerateTriple([1, 1, 4]))
        );
    }

    #[test]
    fn freeness_examples() {
        assert_eq!(freeness_class(&[7]).unwrap(), Freeness::Free);
        assert_eq!(freeness_class(&[2, 5]).unwrap(), Freeness::Free);
        let Freeness::NonFree(w) = freeness_class(&[1, 2, 4]).unwrap() else {
            panic!("three generators are never free");
        };
        assert_eq!(w.lhs, Expression::Exponents(vec![2, 4, 1]));
        assert_eq!(w.rhs, Expression::Exponents(vec![4, 1, 2]));
        let sm = build_sm(&[1, 2, 4]).unwrap();
        assert_eq!(w.lhs.evaluate(&sm), GradedElement::pair(7, 14));
        assert!(w.holds_in(&sm));
        assert_eq!(freeness_class(&[]), Err(WitnessError::EmptySet));
    }

    #[test]
    fn sm_and_tm() {
        assert_eq!(build_sm(&[4, 1, 2]).unwrap().generators().len(), 3);
        assert_eq!(
            build_sm(&[5]).unwrap().generators(),
            &[GradedElement::pair(1, 5)]
        );
        assert_eq!(build_sm(&[]), Err(WitnessError::EmptySet));
        let tm = build_tm(&[1, 2, 4], 3).unwrap();
        assert_eq!(
            tm.generators(),
            &[
                GradedElement::vector(1, vec![1, 1]),
                GradedElement::vector(1, vec![1, 2]),
                GradedElement::vector(1, vec![1, 4])
            ]
        );
        assert!(tm.is_subdirect());
        assert_eq!(build_tm(&[2, 4], 3), Err(WitnessError::MissingOne));
        let diag = build_tm(&[1], 2).unwrap();
        assert_eq!(diag.generators(), &[GradedElement::pair(1, 1)]);
        assert_eq!(
            flatten_diagonal(&GradedElement::vector(3, vec![3, 3, 7])),
            Some(GradedElement::pair(3, 7))
        );
        assert_eq!(
            flatten_diagonal(&GradedElement::vector(3, vec![2, 7])),
            None
        );
    }

    fn null2() -> Arc<FiniteSemigroup> {
        Arc::new(FiniteSemigroup::null(2))
    }

    #[test]
    fn non_group_family_over_null() {
        let w = non_group_family(null2(), &[3]).unwrap();
        assert_eq!((w.element, w.idempotent_power, w.idempotent), (1, 2, 0));
        assert_eq!(
            w.sub.generators(),
            &[GradedElement::element(1, 0), GradedElement::element(3, 1)]
        );
        let rel = w.linkage_relations();
        assert_eq!(
            rel,
            vec![(
                3,
                GradedElement::element(6, 0),
                GradedElement::element(6, 0)
            )]
        );
        assert!(matches!(
            non_group_family(null2(), &[1]),
            Err(WitnessError::BadM(_))
        ));
        let z2 = Arc::new(FiniteSemigroup::cyclic_group(2));
        assert_eq!(
            non_group_family(z2, &[3]),
            Err(WitnessError::IsUnionOfGroups)
        );
    }

    #[test]
    fn subdirect_family_over_null() {
        let w = subdirect_family(null2(), &[3]).unwrap();
        assert_eq!(
            w.sub.generators(),
            &[GradedElement::element(1, 0), GradedElement::element(3, 1)]
        );
        assert!(w.sub.is_subdirect());
        let w = subdirect_family(null2(), &[5, 3]).unwrap();
        assert_eq!(
            w.sub.generators().last(),
            Some(&GradedElement::element(5, 1))
        );
        assert!(matches!(
            subdirect_family(null2(), &[2]),
            Err(WitnessError::BadM(_))
        ));
        assert!(matches!(
            subdirect_family(null2(), &[1]),
            Err(WitnessError::BadM(_))
        ));
        let lz = Arc::new(FiniteSemigroup::left_zero(2));
        assert_eq!(
            subdirect_family(lz, &[3]),
            Err(WitnessError::HasRelativeIdentities)
        );
    }

    #[test]
    fn subdirect_family_adds_middle_generators() {
        // null semigroup on {0, a, b}: violators a and b, s = a, s^2 = 0
        let s = Arc::new(FiniteSemigroup::null(3));
        let w = subdirect_family(s, &[3]).unwrap();
        assert_eq!(
            w.sub.generators(),
            &[
                GradedElement::element(1, 0),
                GradedElement::element(2, 2),
                GradedElement::element(3, 1)
            ]
        );
        assert!(w.sub.is_subdirect());
        let t = w
            .sub
            .truncated_closure(w.indecomposability_bound())
            .unwrap();
        assert_eq!(t.indecomposables(), w.sub.generators());
    }

    #[test]
    fn linkage_profiles_separate_parameters() {
        let profile = |m: &[u64]| {
            let w = non_group_family(null2(), m).unwrap();
            power_linkage_profile(&w.sub, w.indecomposability_bound(), 12).unwrap()
        };
        assert_eq!(profile(&[3]), vec![Some((2, 6)), Some((6, 2))]);
        assert_eq!(profile(&[5]), vec![Some((2, 10)), Some((10, 2))]);
        assert_ne!(profile(&[3, 5]), profile(&[3]));
    }

    #[test]
    fn generator_maps() {
        let a = build_sm(&[1, 2, 4]).unwrap();
        let b = build_sm(&[1, 2, 8]).unwrap();
        assert!(GeneratorMap::new(a.clone(), b.clone(), vec![0, 0, 1]).is_err());
        assert!(GeneratorMap::new(a.clone(), build_sm(&[1, 2]).unwrap(), vec![0, 1]).is_err());
        let f = GeneratorMap::new(a, b, vec![1, 2, 0]).unwrap();
        let e = Expression::Exponents(vec![3, 0, 1]);
        assert_eq!(f.apply(&e), Expression::Exponents(vec![1, 3, 0]));
        assert_eq!(f.inverse().apply(&f.apply(&e)), e);
    }

    #[test]
    fn certificates_over_prefix() {
        let pool = SeparatingSet::new(&[1, 2, 4])
            .unwrap()
            .build_prefix(5)
            .unwrap();
        let subsets = three_subsets(pool.elements());
        assert_eq!(subsets.len(), 10);
        let report = pairwise_noniso_certificate(&pool, &subsets).unwrap();
        assert_eq!(report.len(), 45);
        assert!(report.iter().all(|p| p.certified && p.orderings.len() == 6));
        let bad = SeparatingSet::new(&[1, 2, 3]).unwrap();
        assert!(matches!(
            pairwise_noniso_certificate(&bad, &[[1, 2, 3]]),
            Err(WitnessError::NotSeparating(_))
        ));
    }
}
