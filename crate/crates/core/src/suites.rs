//! Named verification batteries. Each returns a list of checks with a
//! short detail line; a suite passes when every check does.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::thread;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graded::{numerical_form, Ambient, GeneratedSub, GradedElement, NumericalForm};
use crate::oracle::{census, iso_semidecision, map_preserves, relations_up_to, IsoVerdict};
use crate::semigroup::FiniteSemigroup;
use crate::separating::{check_s1, triple_identity, SeparatingSet, Triple, Verdict};
use crate::witness::{
    build_sm, build_tm, flatten_diagonal, freeness_class, non_group_family,
    pairwise_noniso_certificate, power_linkage_profile, subdirect_family, three_subsets,
    triple_criterion, FamilyMember, Freeness, GeneratorMap,
};

/// Suite names accepted by [`run`].
pub const SUITES: &[&str] = &[
    "separating",
    "lemma21",
    "lemma22",
    "lemma23",
    "lemma24",
    "thmA",
    "thmB",
    "lemma31",
    "thmD",
    "thmE",
    "census",
    "numerical",
];

/// `build_prefix({1,2,4}, 10)`.
pub const PREFIX_124: [u64; 10] = [1, 2, 4, 9, 15, 24, 40, 61, 73, 108];

pub const EXTRACTION_SEED: u64 = 0x5eed_3141;
pub const EXTRACTION_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`; expected one of {list}", list = SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }

    fn error(name: &str, e: impl std::fmt::Display) -> Self {
        Check::new(name, false, format!("error: {e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(name: &str) -> Result<SuiteReport, SuiteError> {
    let checks = match name {
        "separating" => separating_ground_truth(),
        "lemma21" => indecomposable_generators(),
        "lemma22" => freeness(),
        "lemma23" => triple_criterion_cross_check(12),
        "lemma24" => greedy_extension(),
        "thmA" => pairwise_non_isomorphism(6),
        "thmB" => diagonal_lift(),
        "lemma31" => generator_extraction(EXTRACTION_SAMPLES, EXTRACTION_SEED),
        "thmD" => family_witnesses("non-group", non_group_family),
        "thmE" => family_witnesses("subdirect", subdirect_family),
        "census" => census_cross_check(),
        "numerical" => numerical_forms(),
        _ => return Err(SuiteError::UnknownSuite(name.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// Condition (S1) read literally over all pairs of ordered triples.
pub fn literal_s1(set: &[u64]) -> bool {
    let triples: Vec<Triple> = set
        .iter()
        .copied()
        .permutations(3)
        .map(|p| [p[0], p[1], p[2]])
        .collect();
    triples
        .iter()
        .all(|&m| triples.iter().all(|&n| triple_identity(m, n) == (m == n)))
}

/// Condition (S2) read literally over all pairs of ordered pairs.
pub fn literal_s2(set: &[u64]) -> bool {
    let pairs: Vec<(i128, i128)> = set
        .iter()
        .copied()
        .permutations(2)
        .map(|p| (p[0] as i128, p[1] as i128))
        .collect();
    pairs.iter().all(|&m| {
        pairs
            .iter()
            .all(|&n| (m.0 - m.1 + n.1 - n.0 == 0) == (m == n))
    })
}

pub fn literal_strongly_separating(set: &[u64]) -> bool {
    literal_s1(set) && literal_s2(set)
}

pub fn separating_ground_truth() -> Vec<Check> {
    let s123 = check_s1(&[1, 2, 3]);
    let s124 = check_s1(&[1, 2, 4]);
    vec![
        Check::new(
            "{1,2,3} violates (S1)",
            s123 == Ok(Verdict::Violated(([1, 2, 3], [3, 2, 1]))),
            format!("{s123:?}"),
        ),
        Check::new(
            "{1,2,4} satisfies (S1)",
            s124 == Ok(Verdict::Holds),
            format!("{s124:?}"),
        ),
        Check::new(
            "{1,2,4} strongly separating by literal scan",
            literal_strongly_separating(&[1, 2, 4]),
            "",
        ),
    ]
}

pub fn indecomposable_generators() -> Vec<Check> {
    let mut tried = 0;
    let mut bad = Vec::new();
    for size in 3..=4 {
        for m in (1..=10u64).combinations(size) {
            tried += 1;
            let sm = build_sm(&m).unwrap();
            match sm.truncated_closure(8) {
                Ok(t) if t.indecomposables() == sm.generators() => {}
                _ => bad.push(m),
            }
        }
    }
    vec![Check::new(
        "indecomposables of S_M at D = 8 are 1 x M",
        bad.is_empty() && tried == 330,
        format!("{tried} sets, failures {bad:?}"),
    )]
}

pub fn freeness() -> Vec<Check> {
    let small: Vec<Vec<u64>> = (1..=2).flat_map(|k| (1..=10u64).combinations(k)).collect();
    let mut not_free = Vec::new();
    for m in &small {
        let free = freeness_class(m) == Ok(Freeness::Free);
        if !free
            || !relations_up_to(&build_sm(m).unwrap(), 8)
                .map(|t| t.is_empty())
                .unwrap_or(false)
        {
            not_free.push(m.clone());
        }
    }
    let mut missing = Vec::new();
    let mut no_witness = Vec::new();
    for m in three_subsets(&(1..=8).collect::<Vec<_>>()) {
        let sm = build_sm(&m).unwrap();
        let Ok(Freeness::NonFree(w)) = freeness_class(&m) else {
            no_witness.push(m);
            continue;
        };
        if !relations_up_to(&sm, 8)
            .map(|t| !t.is_empty())
            .unwrap_or(false)
        {
            missing.push(m);
        }
        let degree = 8.max(m.iter().sum());
        if !w.holds_in(&sm)
            || !relations_up_to(&sm, degree)
                .map(|t| t.contains(&w))
                .unwrap_or(false)
        {
            no_witness.push(m);
        }
    }
    vec![
        Check::new(
            "no relations up to degree 8 when |M| <= 2, M ⊆ {1..10}",
            not_free.is_empty() && small.len() == 55,
            format!("{} sets, failures {not_free:?}", small.len()),
        ),
        Check::new(
            "relations up to degree 8 exist for every 3-subset of {1..8}",
            missing.is_empty(),
            format!("56 sets, failures {missing:?}"),
        ),
        Check::new(
            "three-term witness found at degree max(8, m1+m2+m3)",
            no_witness.is_empty(),
            format!("56 sets, failures {no_witness:?}"),
        ),
    ]
}

#[derive(Default)]
struct CrossCheck {
    comparisons: u64,
    agreeing_maps: u64,
    disagreements: Vec<(Triple, Triple)>,
    late_violations: Vec<(Triple, Triple)>,
}

fn cross_check_row(m: Triple, all: &[Triple]) -> CrossCheck {
    let mut out = CrossCheck::default();
    let sm = build_sm(&m).unwrap();
    let sum: u64 = m.iter().sum();
    for &n in all {
        let sn = build_sm(&n).unwrap();
        for image in (0..3).permutations(3) {
            let nt = [n[image[0]], n[image[1]], n[image[2]]];
            let map = GeneratorMap::new(sm.clone(), sn.clone(), image).unwrap();
            let criterion = triple_criterion(m, nt).unwrap().holds;
            let preserved = map_preserves(&map, 2 * sum).unwrap().is_preserved();
            out.comparisons += 1;
            if criterion != preserved {
                out.disagreements.push((m, nt));
            } else if preserved {
                out.agreeing_maps += 1;
            } else if map_preserves(&map, sum).unwrap().is_preserved() {
                out.late_violations.push((m, nt));
            }
        }
    }
    out
}

/// For every ordered pair of 3-subsets of `{1..limit}` and each of the six
/// generator bijections, the triple criterion must agree with the relation
/// oracle at degree `2 (m1+m2+m3)`.
pub fn triple_criterion_cross_check(limit: u64) -> Vec<Check> {
    let all = three_subsets(&(1..=limit).collect::<Vec<_>>());
    let workers = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(16);
    let rows: Vec<CrossCheck> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let all = &all;
                scope.spawn(move || {
                    all.iter()
                        .skip(w)
                        .step_by(workers)
                        .map(|&m| cross_check_row(m, all))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut total = CrossCheck::default();
    for r in rows {
        total.comparisons += r.comparisons;
        total.agreeing_maps += r.agreeing_maps;
        total.disagreements.extend(r.disagreements);
        total.late_violations.extend(r.late_violations);
    }
    total.disagreements.sort_unstable();
    total.late_violations.sort_unstable();
    let expected = (all.len() * all.len() * 6) as u64;
    vec![
        Check::new(
            "triple criterion agrees with relation oracle",
            total.disagreements.is_empty() && total.comparisons == expected,
            format!(
                "{} comparisons, {} isomorphic correspondences, disagreements {:?}",
                total.comparisons,
                total.agreeing_maps,
                total.disagreements.iter().take(5).collect::<Vec<_>>()
            ),
        ),
        Check::new(
            "failing correspondences break a relation of degree <= m1+m2+m3",
            total.late_violations.is_empty(),
            format!(
                "late violations {:?}",
                total.late_violations.iter().take(5).collect::<Vec<_>>()
            ),
        ),
    ]
}

pub fn greedy_extension() -> Vec<Check> {
    let mut checks = separating_ground_truth();
    let start = SeparatingSet::strongly_separating(&[1, 2, 4]).unwrap();
    let prefix = match start.build_prefix(10) {
        Ok(p) => p,
        Err(e) => {
            checks.push(Check::error("build_prefix({1,2,4}, 10)", e));
            return checks;
        }
    };
    checks.push(Check::new(
        "build_prefix({1,2,4}, 10) matches recorded prefix",
        prefix.elements() == PREFIX_124,
        format!("{prefix}"),
    ));
    let bad_prefixes: Vec<usize> = (3..=10)
        .filter(|&k| !literal_strongly_separating(&prefix.elements()[..k]))
        .collect();
    checks.push(Check::new(
        "every prefix passes the literal (S1)/(S2) scan",
        bad_prefixes.is_empty(),
        format!("failing prefix lengths {bad_prefixes:?}"),
    ));
    let mut mismatches = Vec::new();
    let mut candidates = 0;
    for k in 3..10 {
        let p = SeparatingSet::new(&prefix.elements()[..k]).unwrap();
        let forbidden = p.forbidden_values().unwrap();
        for x in 1..=10 * p.max() {
            if p.elements().contains(&x) {
                continue;
            }
            candidates += 1;
            let mut with = p.elements().to_vec();
            with.push(x);
            with.sort_unstable();
            if forbidden.contains(&x) == literal_strongly_separating(&with) {
                mismatches.push((k, x));
            }
        }
    }
    checks.push(Check::new(
        "forbidden values agree with per-candidate brute force up to 10 max(M)",
        mismatches.is_empty(),
        format!("{candidates} candidates, mismatches {mismatches:?}"),
    ));
    checks
}

/// All 3-subsets of `build_prefix({1,2,4}, size)` give pairwise
/// non-isomorphic subsemigroups.
pub fn pairwise_non_isomorphism(size: usize) -> Vec<Check> {
    let pool = SeparatingSet::strongly_separating(&[1, 2, 4])
        .unwrap()
        .build_prefix(size)
        .unwrap();
    let subsets = three_subsets(pool.elements());
    let mut failures = Vec::new();
    let mut pairs = 0;
    for (i, &m) in subsets.iter().enumerate() {
        for &n in &subsets[i + 1..] {
            pairs += 1;
            let degree = m.iter().sum::<u64>() + n.iter().sum::<u64>();
            match iso_semidecision(&build_sm(&m).unwrap(), &build_sm(&n).unwrap(), degree) {
                Ok(v) if v.is_non_isomorphic() => {}
                _ => failures.push((m, n)),
            }
        }
    }
    let certs = pairwise_noniso_certificate(&pool, &subsets).unwrap();
    let uncertified: Vec<_> = certs
        .iter()
        .filter(|c| !c.certified)
        .map(|c| (c.m, c.n))
        .collect();
    let sm = build_sm(&subsets[0]).unwrap();
    let self_check = matches!(
        iso_semidecision(&sm, &sm, 8),
        Ok(IsoVerdict::ConsistentUpTo { .. })
    );
    vec![
        Check::new(
            "relation oracle separates every pair",
            failures.is_empty(),
            format!("pool {pool}, {pairs} pairs, failures {failures:?}"),
        ),
        Check::new(
            "criterion certificate covers every pair",
            uncertified.is_empty() && certs.len() == pairs,
            format!("{} certificates, uncertified {uncertified:?}", certs.len()),
        ),
        Check::new("a subsemigroup is consistent with itself", self_check, ""),
    ]
}

/// `(n, ..., n, p) -> (n, p)` is a product-preserving bijection from the
/// truncation of `T_M ≤ N^3` onto that of `S_M` at `D = 10`.
pub fn diagonal_lift() -> Vec<Check> {
    const D: u64 = 10;
    let mut failures = Vec::new();
    let mut sets = 0;
    for size in 0..=2 {
        for rest in (2..=6u64).combinations(size) {
            sets += 1;
            let mut m = vec![1];
            m.extend(rest);
            if !diagonal_lift_holds(&m, D) {
                failures.push(m);
            }
        }
    }
    vec![Check::new(
        "T_M is subdirect and flattens onto S_M at D = 10",
        failures.is_empty(),
        format!("{sets} sets with 1 ∈ M ⊆ {{1..6}}, failures {failures:?}"),
    )]
}

pub fn diagonal_lift_holds(m: &[u64], bound: u64) -> bool {
    let (Ok(tm), Ok(sm)) = (build_tm(m, 3), build_sm(m)) else {
        return false;
    };
    let (Ok(t), Ok(s)) = (tm.truncated_closure(bound), sm.truncated_closure(bound)) else {
        return false;
    };
    let Some(flat): Option<Vec<GradedElement>> =
        t.elements().iter().map(flatten_diagonal).collect()
    else {
        return false;
    };
    let distinct: BTreeSet<&GradedElement> = flat.iter().collect();
    if !tm.is_subdirect() || distinct.len() != flat.len() || distinct.into_iter().ne(s.elements()) {
        return false;
    }
    let (ta, sa) = (tm.ambient(), sm.ambient());
    t.elements().iter().zip(&flat).all(|(a, fa)| {
        t.elements().iter().zip(&flat).all(|(b, fb)| {
            a.grade + b.grade > bound
                || flatten_diagonal(&ta.mul(a, b)).as_ref() == Some(&sa.mul(fa, fb))
        })
    })
}

/// A random subdirect subsemigroup of `N x S`: a grade-1 generator plus up
/// to four more with grades at most 6, resampled until subdirect.
pub fn random_subdirect(s: &Arc<FiniteSemigroup>, rng: &mut impl Rng) -> GeneratedSub {
    let n = s.order();
    loop {
        let extra = rng.gen_range(0..=4);
        let mut gens = vec![GradedElement::element(1, rng.gen_range(0..n))];
        for _ in 0..extra {
            gens.push(GradedElement::element(
                rng.gen_range(1..=6),
                rng.gen_range(0..n),
            ));
        }
        let sub = GeneratedSub::new(Ambient::NxS(s.clone()), gens).expect("generators are valid");
        if sub.is_subdirect() {
            return sub;
        }
    }
}

/// For every order-3 semigroup in which each element has a relative
/// identity, extraction from random subdirect subsemigroups regenerates
/// them at `3 (n0 + m)` and the layers are monotone.
pub fn generator_extraction(samples: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eligible: Vec<Arc<FiniteSemigroup>> = census(3)
        .unwrap()
        .into_iter()
        .filter(|s| s.has_relative_identities())
        .map(Arc::new)
        .collect();
    let mut failures = Vec::new();
    let mut non_monotone = Vec::new();
    let mut runs = 0;
    for (idx, s) in eligible.iter().enumerate() {
        for _ in 0..samples {
            let sub = random_subdirect(s, &mut rng);
            runs += 1;
            match sub.extract_generators() {
                Ok(x) => {
                    if !sub
                        .regenerates(&x.generators, x.check_bound())
                        .unwrap_or(false)
                    {
                        failures.push(format!(
                            "S#{idx} {}",
                            sub.to_text().trim().replace('\n', "; ")
                        ));
                    }
                    if !x.layers.is_monotone() {
                        non_monotone.push(idx);
                    }
                }
                Err(e) => failures.push(format!("S#{idx}: {e}")),
            }
        }
    }
    vec![
        Check::new(
            "order-3 semigroups with relative identities",
            eligible.len() == 16,
            format!("{}", eligible.len()),
        ),
        Check::new(
            "extracted generators regenerate at 3 (n0 + m)",
            failures.is_empty(),
            format!(
                "{runs} subsemigroups, seed {seed:#x}, failures {:?}",
                failures.iter().take(3).collect::<Vec<_>>()
            ),
        ),
        Check::new(
            "layers satisfy S_n ⊆ S_{n+m}",
            non_monotone.is_empty(),
            format!("{non_monotone:?}"),
        ),
    ]
}

/// The parameter sets used for the family checks.
pub const FAMILY_PARAMETERS: [&[u64]; 3] = [&[3], &[5], &[3, 5]];

pub fn family_witnesses(
    family: &str,
    build: fn(Arc<FiniteSemigroup>, &[u64]) -> Result<FamilyMember, crate::witness::WitnessError>,
) -> Vec<Check> {
    let null = Arc::new(
        FiniteSemigroup::null(2)
            .with_labels(vec!["0".into(), "a".into()])
            .unwrap(),
    );
    let mut checks = Vec::new();
    let mut profiles = Vec::new();
    for m in FAMILY_PARAMETERS {
        let w = match build(null.clone(), m) {
            Ok(w) => w,
            Err(e) => {
                checks.push(Check::error(&format!("{family} M = {m:?}"), e));
                continue;
            }
        };
        let d = w.indecomposability_bound();
        let amb = w.sub.ambient();
        let ind = w
            .sub
            .truncated_closure(d)
            .map(|t| t.indecomposables())
            .unwrap_or_default();
        let mut gens = w.sub.generators().to_vec();
        gens.sort();
        checks.push(Check::new(
            &format!("{family} M = {m:?}: generators indecomposable at D = {d}"),
            ind == gens,
            ind.iter().map(|e| amb.format(e)).join(" "),
        ));
        let rel = w.linkage_relations();
        checks.push(Check::new(
            &format!("{family} M = {m:?}: (1,x^k)^(mk) = (m,x)^k"),
            rel.iter().all(|(_, l, r)| l == r),
            rel.iter()
                .map(|(m, l, _)| format!("m={m}: {}", amb.format(l)))
                .join(", "),
        ));
        profiles.push((m, power_linkage_profile(&w.sub, d, 4 * d)));
    }
    let distinct = profiles.iter().all(|(_, p)| p.is_ok())
        && profiles.iter().map(|(_, p)| p.as_ref().ok()).all_unique();
    checks.push(Check::new(
        &format!("{family}: power-linkage profiles differ across M"),
        distinct && profiles.len() == FAMILY_PARAMETERS.len(),
        profiles
            .iter()
            .map(|(m, p)| {
                let pairs = p
                    .iter()
                    .flatten()
                    .map(|l| l.map_or("-".into(), |(p, q)| format!("{p}:{q}")))
                    .join(" ");
                format!("{m:?} [{pairs}]")
            })
            .join("; "),
    ));
    checks
}

/// Semigroups of orders 1 to 4 up to isomorphism.
pub const CENSUS_COUNTS: [usize; 4] = [1, 5, 24, 188];

pub fn census_cross_check() -> Vec<Check> {
    let mut checks = Vec::new();
    for (i, &expected) in CENSUS_COUNTS.iter().enumerate() {
        let n = i + 1;
        match census(n) {
            Ok(c) => {
                let inclusion = c
                    .iter()
                    .all(|s| !s.is_union_of_groups() || s.has_relative_identities());
                checks.push(Check::new(
                    &format!("order {n}: {expected} semigroups, unions of groups have relative identities"),
                    c.len() == expected && inclusion,
                    format!("{} found", c.len()),
                ));
                if n == 3 {
                    let gap: Vec<&FiniteSemigroup> = c
                        .iter()
                        .filter(|s| s.has_relative_identities() && !s.is_union_of_groups())
                        .collect();
                    let monoids = gap.iter().filter(|s| s.is_monoid()).count();
                    checks.push(Check::new(
                        "order 3: inclusion is strict with a monoid in the gap",
                        gap.len() == 3 && monoids == 1,
                        format!("{} in gap, {monoids} monoids", gap.len()),
                    ));
                }
            }
            Err(e) => checks.push(Check::error(&format!("order {n}"), e)),
        }
    }
    checks
}

pub fn numerical_forms() -> Vec<Check> {
    let form = numerical_form(&[3, 5]);
    let expected = NumericalForm {
        sporadic: vec![3, 5, 6],
        step: 1,
        threshold: 8,
    };
    let mut reach = [false; 31];
    for x in 1..=30usize {
        reach[x] = x == 3 || x == 5 || (x > 3 && reach[x - 3]) || (x > 5 && reach[x - 5]);
    }
    let brute: Vec<u64> = (1..=30).filter(|&x| reach[x as usize]).collect();
    let members = form
        .as_ref()
        .map(|f| f.members_up_to(30))
        .unwrap_or_default();
    vec![
        Check::new(
            "<3,5> = ({3,5,6}, 1, 8)",
            form.as_ref() == Ok(&expected),
            format!("{form:?}"),
        ),
        Check::new(
            "agrees with brute-force closure on [1, 30]",
            members == brute,
            format!("{brute:?}"),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_checks_match_known_sets() {
        assert!(!literal_s1(&[1, 2, 3]));
        assert!(literal_strongly_separating(&[1, 2, 4]));
        assert!(!literal_s2(&[1, 2, 4, 5]));
        assert!(literal_strongly_separating(&PREFIX_124[..6]));
        assert!(!literal_s1(&[1, 2, 4, 8]));
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(
            run("nosuch"),
            Err(SuiteError::UnknownSuite("nosuch".into()))
        );
    }

    #[test]
    fn small_suites_pass() {
        for name in ["separating", "lemma21", "thmB", "thmD", "thmE", "numerical"] {
            let r = run(name).unwrap();
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn reduced_cross_check() {
        assert!(triple_criterion_cross_check(6).iter().all(|c| c.passed));
        assert!(generator_extraction(5, 7).iter().all(|c| c.passed));
    }
}
