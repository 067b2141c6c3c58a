//! Finitely generated subsemigroups of `N x N`, `N^k` and `N x S`.
//!
//! Every element carries a grade (its `N` coordinate) and grades add under
//! multiplication, so everything up to a grade bound `D` is computed exactly
//! from products of strictly smaller grades.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("truncation bound {bound} is below the required grade {needed}")]
    BoundTooSmall { bound: u64, needed: u64 },
    #[error("no stable periodic window found below grade {bound}")]
    PeriodNotDetected { bound: u64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("closure exceeds {limit} elements")]
    TooLarge { limit: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The non-`N` part of an element: a vector of positive integers, or an
/// element index of a finite semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Fiber {
    Vector(Vec<u64>),
    Element(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GradedElement {
    pub grade: u64,
    pub fiber: Fiber,
}

impl GradedElement {
    pub fn vector(grade: u64, fiber: Vec<u64>) -> Self {
        GradedElement {
            grade,
            fiber: Fiber::Vector(fiber),
        }
    }

    /// An element of `N x N`.
    pub fn pair(grade: u64, second: u64) -> Self {
        Self::vector(grade, vec![second])
    }

    pub fn element(grade: u64, s: usize) -> Self {
        GradedElement {
            grade,
            fiber: Fiber::Element(s),
        }
    }

    /// All coordinates, grade first; semigroup fibers contribute their index.
    pub fn coordinates(&self) -> Vec<u64> {
        let mut out = vec![self.grade];
        match &self.fiber {
            Fiber::Vector(v) => out.extend_from_slice(v),
            Fiber::Element(s) => out.push(*s as u64),
        }
        out
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.grade)?;
        match &self.fiber {
            Fiber::Vector(v) => {
                for x in v {
                    write!(f, ",{x}")?;
                }
            }
            Fiber::Element(s) => write!(f, ",{s}")?,
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Ambient {
    /// `N x N`.
    NxN,
    /// `N^k`, `k >= 2`; fibers have length `k - 1`.
    NxK(usize),
    /// `N x S` for a finite semigroup `S`.
    NxS(Arc<FiniteSemigroup>),
}

impl Ambient {
    pub fn nxs(s: FiniteSemigroup) -> Self {
        Ambient::NxS(Arc::new(s))
    }

    pub fn fiber_len(&self) -> Option<usize> {
        match self {
            Ambient::NxN => Some(1),
            Ambient::NxK(k) => Some(k - 1),
            Ambient::NxS(_) => None,
        }
    }

    pub fn semigroup(&self) -> Option<&FiniteSemigroup> {
        match self {
            Ambient::NxS(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self {
            Ambient::NxS(s) => {
                let n = s.order();
                (0..n).all(|a| (0..n).all(|b| s.mul(a, b) == s.mul(b, a)))
            }
            _ => true,
        }
    }

    pub fn validate(&self, e: &GradedElement) -> Result<(), GradedError> {
        if e.grade == 0 {
            return Err(GradedError::InvalidElement(format!(
                "{e}: grade must be positive"
            )));
        }
        match (&e.fiber, self) {
            (Fiber::Vector(v), _) if self.fiber_len() == Some(v.len()) => {
                if v.contains(&0) {
                    Err(GradedError::InvalidElement(format!(
                        "{e}: coordinates must be positive"
                    )))
                } else {
                    Ok(())
                }
            }
            (Fiber::Element(s), Ambient::NxS(sg)) if *s < sg.order() => Ok(()),
            _ => Err(GradedError::InvalidElement(format!(
                "{e} does not belong to the ambient"
            ))),
        }
    }

    #[inline]
    pub fn mul(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        let fiber = match (&a.fiber, &b.fiber, self) {
            (Fiber::Vector(x), Fiber::Vector(y), _) => {
                Fiber::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (Fiber::Element(x), Fiber::Element(y), Ambient::NxS(s)) => {
                Fiber::Element(s.mul(*x, *y))
            }
            _ => panic!("mixed fibers in one ambient"),
        };
        GradedElement {
            grade: a.grade + b.grade,
            fiber,
        }
    }

    /// `e^p` for `p >= 1`.
    pub fn pow(&self, e: &GradedElement, p: u64) -> GradedElement {
        let fiber = match (&e.fiber, self) {
            (Fiber::Vector(v), _) => Fiber::Vector(v.iter().map(|x| x * p).collect()),
            (Fiber::Element(s), Ambient::NxS(sg)) => Fiber::Element(sg.pow(*s, p)),
            _ => panic!("mixed fibers in one ambient"),
        };
        GradedElement {
            grade: e.grade * p,
            fiber,
        }
    }

    /// Renders an element, using semigroup labels where available.
    pub fn format(&self, e: &GradedElement) -> String {
        match (&e.fiber, self) {
            (Fiber::Element(s), Ambient::NxS(sg)) => format!("({},{})", e.grade, sg.label(*s)),
            _ => e.to_string(),
        }
    }
}

/// A subsemigroup given by a nonempty finite list of generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratedSub {
    ambient: Ambient,
    generators: Vec<GradedElement>,
}

impl GeneratedSub {
    /// Validates the generators and drops repeats, keeping first occurrences.
    pub fn new(ambient: Ambient, generators: Vec<GradedElement>) -> Result<Self, GradedError> {
        if generators.is_empty() {
            return Err(GradedError::EmptyGenerators);
        }
        let mut seen = HashSet::new();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            ambient.validate(&g)?;
            if seen.insert(g.clone()) {
                gens.push(g);
            }
        }
        Ok(GeneratedSub {
            ambient,
            generators: gens,
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> &[GradedElement] {
        &self.generators
    }

    pub fn max_grade(&self) -> u64 {
        self.generators.iter().map(|g| g.grade).max().unwrap_or(0)
    }

    /// Same ambient, different generators.
    pub fn with_generators(&self, generators: Vec<GradedElement>) -> Result<Self, GradedError> {
        GeneratedSub::new(self.ambient.clone(), generators)
    }

    /// Parses the `grade : fiber` line format. With a semigroup the fiber is
    /// an element index (or label); otherwise a comma-separated vector whose
    /// length fixes the ambient (`N x N` for one coordinate).
    pub fn parse(text: &str, semigroup: Option<Arc<FiniteSemigroup>>) -> Result<Self, GradedError> {
        let mut gens = Vec::new();
        let mut width: Option<usize> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| GradedError::Parse {
                line: lineno + 1,
                msg,
            };
            let (grade, fiber) = line
                .split_once(':')
                .ok_or_else(|| perr(format!("expected `grade : fiber`, found {line:?}")))?;
            let grade: u64 = grade
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad grade {:?}", grade.trim())))?;
            let fiber = fiber.trim();
            let fiber = match &semigroup {
                Some(s) => {
                    let idx = match fiber.parse::<usize>() {
                        Ok(i) => i,
                        Err(_) => s
                            .labels()
                            .and_then(|l| l.iter().position(|x| x == fiber))
                            .ok_or_else(|| perr(format!("unknown element {fiber:?}")))?,
                    };
                    Fiber::Element(idx)
                }
                None => {
                    let v = fiber
                        .split(',')
                        .map(|t| t.trim().parse::<u64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| perr(format!("bad fiber {fiber:?}")))?;
                    match width {
                        None => width = Some(v.len()),
                        Some(w) if w != v.len() => {
                            return Err(perr(format!("fiber length {} differs from {w}", v.len())))
                        }
                        _ => {}
                    }
                    Fiber::Vector(v)
                }
            };
            gens.push(GradedElement { grade, fiber });
        }
        let ambient = match (semigroup, width) {
            (Some(s), _) => Ambient::NxS(s),
            (None, Some(1)) => Ambient::NxN,
            (None, Some(w)) => Ambient::NxK(w + 1),
            (None, None) => return Err(GradedError::EmptyGenerators),
        };
        GeneratedSub::new(ambient, gens)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            let fiber = match &g.fiber {
                Fiber::Vector(v) => v
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                Fiber::Element(s) => s.to_string(),
            };
            out.push_str(&format!("{} : {}\n", g.grade, fiber));
        }
        out
    }

    pub fn truncated_closure(&self, bound: u64) -> Result<Truncation, GradedError> {
        self.truncated_closure_limited(bound, None)
    }

    /// Level-by-level closure up to grade `bound`.
    ///
    /// Level `g` is the set of products `u * h` with `h` a generator and `u`
    /// in level `g - grade(h)`, plus the generators of grade `g`. An element
    /// lies in `SS` exactly when it is such a product, which gives the
    /// decomposability marks.
    pub fn truncated_closure_limited(
        &self,
        bound: u64,
        max_cells: Option<usize>,
    ) -> Result<Truncation, GradedError> {
        let needed = self.max_grade();
        if bound < needed {
            return Err(GradedError::BoundTooSmall { bound, needed });
        }
        let d = bound as usize;
        let mut levels: Vec<Vec<(GradedElement, bool)>> = vec![Vec::new(); d + 1];
        let mut total = 0usize;
        for g in 1..=d {
            let mut products: HashSet<GradedElement> = HashSet::new();
            for h in &self.generators {
                let hg = h.grade as usize;
                if hg < g {
                    for (u, _) in &levels[g - hg] {
                        products.insert(self.ambient.mul(u, h));
                    }
                }
            }
            let mut level: Vec<(GradedElement, bool)> =
                products.iter().map(|e| (e.clone(), true)).collect();
            for h in &self.generators {
                if h.grade as usize == g && !products.contains(h) {
                    level.push((h.clone(), false));
                }
            }
            level.sort();
            total += level.len();
            if let Some(limit) = max_cells {
                if total > limit {
                    return Err(GradedError::TooLarge { limit });
                }
            }
            levels[g] = level;
        }
        let mut elements = Vec::with_capacity(total);
        let mut decomposable = Vec::with_capacity(total);
        let mut offsets = vec![0usize; d + 2];
        for g in 1..=d {
            offsets[g] = elements.len();
            for (e, dec) in levels[g].drain(..) {
                elements.push(e);
                decomposable.push(dec);
            }
        }
        offsets[d + 1] = elements.len();
        offsets[0] = 0;
        Ok(Truncation {
            ambient: self.ambient.clone(),
            bound,
            elements,
            decomposable,
            offsets,
        })
    }

    pub fn membership(&self, e: &GradedElement, bound: u64) -> Result<bool, GradedError> {
        if e.grade > bound {
            return Err(GradedError::BoundTooSmall {
                bound,
                needed: e.grade,
            });
        }
        self.ambient.validate(e)?;
        Ok(self.truncated_closure(bound)?.contains(e))
    }

    /// Whether every projection is surjective. A projection onto `N` is
    /// onto iff some generator has that coordinate equal to 1; onto `S` iff
    /// the generator fibers generate `S`.
    pub fn is_subdirect(&self) -> bool {
        if !self.generators.iter().any(|g| g.grade == 1) {
            return false;
        }
        match &self.ambient {
            Ambient::NxS(s) => {
                let fibers: Vec<usize> = self.fiber_elements();
                s.generated_by(&fibers).iter().all(|&b| b)
            }
            _ => {
                let len = self.ambient.fiber_len().unwrap();
                (0..len).all(|i| {
                    self.generators.iter().any(|g| match &g.fiber {
                        Fiber::Vector(v) => v[i] == 1,
                        Fiber::Element(_) => false,
                    })
                })
            }
        }
    }

    fn fiber_elements(&self) -> Vec<usize> {
        self.generators
            .iter()
            .filter_map(|g| match g.fiber {
                Fiber::Element(s) => Some(s),
                Fiber::Vector(_) => None,
            })
            .collect()
    }

    pub fn layer_sequence(&self, bound: u64) -> Result<LayerSequence, GradedError> {
        self.layer_sequence_with_window(bound, DEFAULT_WINDOW_PERIODS)
    }

    /// Layers `S_n = { s : (n, s) in T }` for `n <= bound`, with the period
    /// and threshold read off them.
    ///
    /// The period is the grade of the least power of the identity when `S`
    /// is a group, and otherwise the lcm of the least grades `m_s` at which
    /// each reachable fiber value appears. The threshold is accepted only if
    /// `S_n = S_{n+m}` is verified on a window of at least
    /// `max(window_periods * m, max generator grade)` consecutive `n`; the
    /// second term makes the periodicity hold for every larger `n` as well
    /// whenever the layers are monotone (`S_n ⊆ S_{n+m}`).
    pub fn layer_sequence_with_window(
        &self,
        bound: u64,
        window_periods: u64,
    ) -> Result<LayerSequence, GradedError> {
        let s = self
            .ambient
            .semigroup()
            .ok_or_else(|| GradedError::NotApplicable("layers need an N x S ambient".into()))?;
        let trunc = self.truncated_closure(bound)?;
        let mut layers = vec![BTreeSet::new(); bound as usize];
        for e in trunc.elements() {
            if let Fiber::Element(x) = e.fiber {
                layers[e.grade as usize - 1].insert(x);
            }
        }
        let reachable = s.generated_by(&self.fiber_elements());
        let mut first_grades = BTreeMap::new();
        for (x, _) in reachable.iter().enumerate().filter(|(_, &r)| r) {
            let n = layers
                .iter()
                .position(|l| l.contains(&x))
                .ok_or(GradedError::PeriodNotDetected { bound })?;
            first_grades.insert(x, n as u64 + 1);
        }
        let period = match s.identity() {
            Some(e) if s.is_group() => first_grades[&e],
            _ => first_grades.values().fold(1u64, |acc, &m| acc.lcm(&m)),
        };
        if period >= bound {
            return Err(GradedError::PeriodNotDetected { bound });
        }
        let last = bound - period;
        let layer = |n: u64| &layers[n as usize - 1];
        let mut threshold = 1;
        for n in (1..=last).rev() {
            if layer(n) != layer(n + period) {
                threshold = n + 1;
                break;
            }
        }
        let window = (window_periods * period).max(self.max_grade());
        if threshold > last || last - threshold + 1 < window {
            return Err(GradedError::PeriodNotDetected { bound });
        }
        Ok(LayerSequence {
            bound,
            layers,
            period,
            threshold,
            first_grades,
        })
    }

    /// Checks that the layer-sequence extraction applies: `S` is a group,
    /// or the subsemigroup is subdirect and every element of `S` has a
    /// relative identity.
    pub fn extraction_applicable(&self) -> Result<(), GradedError> {
        let s = self.ambient.semigroup().ok_or_else(|| {
            GradedError::NotApplicable("extraction needs an N x S ambient".into())
        })?;
        if s.is_group() {
            return Ok(());
        }
        let violators = s.relative_identity_violators();
        if !violators.is_empty() {
            let names: Vec<String> = violators.iter().map(|&x| s.label(x)).collect();
            return Err(GradedError::NotApplicable(format!(
                "no t with ts = s or st = s for s in {{{}}}",
                names.join(", ")
            )));
        }
        if !self.is_subdirect() {
            return Err(GradedError::NotApplicable(
                "subsemigroup is not subdirect and the fiber semigroup is not a group".into(),
            ));
        }
        Ok(())
    }

    /// Finite generating set `X = ⋃_{n < n0 + m} {n} x S_n`, raising the
    /// truncation bound until the layer period is detected.
    pub fn extract_generators(&self) -> Result<Extraction, GradedError> {
        self.extraction_applicable()?;
        let mut bound = (4 * self.max_grade()).max(16);
        loop {
            match self.extract_generators_at(bound) {
                Err(GradedError::PeriodNotDetected { .. }) if bound < MAX_EXTRACTION_BOUND => {
                    bound *= 2;
                }
                other => return other,
            }
        }
    }

    pub fn extract_generators_at(&self, bound: u64) -> Result<Extraction, GradedError> {
        self.extraction_applicable()?;
        let layers = self.layer_sequence(bound)?;
        let mut generators = Vec::new();
        for n in 1..layers.threshold + layers.period {
            for &x in layers.layer(n) {
                generators.push(GradedElement::element(n, x));
            }
        }
        Ok(Extraction { generators, layers })
    }

    /// Whether `⟨X⟩` and this subsemigroup agree up to grade `bound`.
    pub fn regenerates(&self, x: &[GradedElement], bound: u64) -> Result<bool, GradedError> {
        let other = self.with_generators(x.to_vec())?;
        let needed = self.max_grade().max(other.max_grade());
        if bound < needed {
            return Err(GradedError::BoundTooSmall { bound, needed });
        }
        let a = self.truncated_closure(bound)?;
        let b = other.truncated_closure(bound)?;
        Ok(a.elements == b.elements)
    }
}

/// Stable window length for period detection, in multiples of the period.
pub const DEFAULT_WINDOW_PERIODS: u64 = 2;

const MAX_EXTRACTION_BOUND: u64 = 1 << 14;

/// All elements of a generated subsemigroup up to a grade bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    ambient: Ambient,
    bound: u64,
    /// Sorted by grade, then fiber.
    elements: Vec<GradedElement>,
    decomposable: Vec<bool>,
    #[serde(skip)]
    offsets: Vec<usize>,
}

impl Truncation {
    /// A truncation with no elements.
    pub fn empty(ambient: Ambient, bound: u64) -> Self {
        Truncation {
            ambient,
            bound,
            elements: Vec::new(),
            decomposable: Vec::new(),
            offsets: vec![0; bound as usize + 2],
        }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn elements(&self) -> &[GradedElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_decomposable(&self, i: usize) -> bool {
        self.decomposable[i]
    }

    pub fn index_of(&self, e: &GradedElement) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }

    pub fn contains(&self, e: &GradedElement) -> bool {
        self.index_of(e).is_some()
    }

    /// Elements of a single grade.
    pub fn level(&self, grade: u64) -> &[GradedElement] {
        if grade == 0 || grade > self.bound {
            return &[];
        }
        let g = grade as usize;
        &self.elements[self.offsets[g]..self.offsets[g + 1]]
    }

    /// Elements outside `SS`.
    pub fn indecomposables(&self) -> Vec<GradedElement> {
        self.elements
            .iter()
            .zip(&self.decomposable)
            .filter(|(_, &d)| !d)
            .map(|(e, _)| e.clone())
            .collect()
    }
}

/// The sets `S_n` of a subsemigroup of `N x S`, with period `m`, threshold
/// `n0` and least grades `m_s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerSequence {
    pub bound: u64,
    layers: Vec<BTreeSet<usize>>,
    pub period: u64,
    pub threshold: u64,
    pub first_grades: BTreeMap<usize, u64>,
}

impl LayerSequence {
    /// `S_n` for `1 <= n <= bound`.
    pub fn layer(&self, n: u64) -> &BTreeSet<usize> {
        &self.layers[n as usize - 1]
    }

    /// `S_n ⊆ S_{n+m}` for every `n` the truncation covers.
    pub fn is_monotone(&self) -> bool {
        (1..=self.bound.saturating_sub(self.period))
            .all(|n| self.layer(n).is_subset(self.layer(n + self.period)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub generators: Vec<GradedElement>,
    pub layers: LayerSequence,
}

impl Extraction {
    /// The regeneration bound `3 (n0 + m)`.
    pub fn check_bound(&self) -> u64 {
        3 * (self.layers.threshold + self.layers.period)
    }
}

/// A subsemigroup of `N` written as `A ∪ { n d : n >= n0 }` with `A` finite
/// and disjoint from the tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalForm {
    pub sporadic: Vec<u64>,
    pub step: u64,
    pub threshold: u64,
}

impl NumericalForm {
    pub fn contains(&self, x: u64) -> bool {
        self.sporadic.binary_search(&x).is_ok()
            || (x.is_multiple_of(self.step) && x / self.step >= self.threshold)
    }

    /// Members in `[1, upto]`.
    pub fn members_up_to(&self, upto: u64) -> Vec<u64> {
        (1..=upto).filter(|&x| self.contains(x)).collect()
    }
}

/// Canonical form of the subsemigroup of `N` generated by `gens`.
pub fn numerical_form(gens: &[u64]) -> Result<NumericalForm, GradedError> {
    if gens.is_empty() {
        return Err(GradedError::EmptyGenerators);
    }
    if gens.contains(&0) {
        return Err(GradedError::InvalidElement(
            "generators must be positive".into(),
        ));
    }
    let step = gens.iter().fold(0u64, |acc, &g| acc.gcd(&g));
    let reduced: Vec<usize> = gens.iter().map(|&g| (g / step) as usize).collect();
    let smallest = *reduced.iter().min().unwrap();
    // Once `smallest` consecutive values are reachable, everything above is.
    let mut reachable = vec![false; 1];
    let mut run = 0usize;
    let mut last_gap = 0usize;
    let mut x = 0usize;
    while run < smallest {
        x += 1;
        let r = reduced
            .iter()
            .any(|&g| g == x || (g < x && reachable[x - g]));
        reachable.push(r);
        if r {
            run += 1;
        } else {
            run = 0;
            last_gap = x;
        }
    }
    let threshold = last_gap as u64 + 1;
    let sporadic = (1..last_gap)
        .filter(|&v| reachable[v])
        .map(|v| v as u64 * step)
        .collect();
    Ok(NumericalForm {
        sporadic,
        step,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(m: &[u64]) -> GeneratedSub {
        GeneratedSub::new(
            Ambient::NxN,
            m.iter().map(|&x| GradedElement::pair(1, x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn closure_of_s124_at_two() {
        let t = sm(&[1, 2, 4]).truncated_closure(2).unwrap();
        let expected: Vec<GradedElement> = [
            (1, 1),
            (1, 2),
            (1, 4),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (2, 8),
        ]
        .iter()
        .map(|&(g, f)| GradedElement::pair(g, f))
        .collect();
        assert_eq!(t.elements(), expected.as_slice());
        assert_eq!(t.level(2).len(), 6);
    }

    #[test]
    fn diagonal_powers() {
        let t = sm(&[1]).truncated_closure(3).unwrap();
        assert_eq!(
            t.elements(),
            &[
                GradedElement::pair(1, 1),
                GradedElement::pair(2, 2),
                GradedElement::pair(3, 3)
            ]
        );
        assert_eq!(t.indecomposables(), vec![GradedElement::pair(1, 1)]);
    }

    #[test]
    fn idempotent_fiber() {
        let s = FiniteSemigroup::left_zero(2);
        let g = GeneratedSub::new(Ambient::nxs(s), vec![GradedElement::element(2, 0)]).unwrap();
        let t = g.truncated_closure(5).unwrap();
        assert_eq!(
            t.elements(),
            &[GradedElement::element(2, 0), GradedElement::element(4, 0)]
        );
    }

    #[test]
    fn bound_and_validation_errors() {
        let g = GeneratedSub::new(Ambient::NxN, vec![GradedElement::pair(3, 1)]).unwrap();
        assert_eq!(
            g.truncated_closure(2),
            Err(GradedError::BoundTooSmall {
                bound: 2,
                needed: 3
            })
        );
        assert_eq!(
            GeneratedSub::new(Ambient::NxN, vec![]),
            Err(GradedError::EmptyGenerators)
        );
        assert!(GeneratedSub::new(Ambient::NxN, vec![GradedElement::pair(0, 1)]).is_err());
        assert!(
            GeneratedSub::new(Ambient::NxN, vec![GradedElement::vector(1, vec![1, 1])]).is_err()
        );
        assert!(GeneratedSub::new(
            Ambient::nxs(FiniteSemigroup::null(2)),
            vec![GradedElement::element(1, 2)]
        )
        .is_err());
        let dup = GeneratedSub::new(
            Ambient::NxN,
            vec![GradedElement::pair(1, 1), GradedElement::pair(1, 1)],
        )
        .unwrap();
        assert_eq!(dup.generators().len(), 1);
    }

    #[test]
    fn membership_examples() {
        let g = sm(&[1, 2, 4]);
        assert!(g.membership(&GradedElement::pair(2, 3), 4).unwrap());
        assert!(!g.membership(&GradedElement::pair(1, 3), 4).unwrap());
        assert!(g.membership(&GradedElement::pair(3, 12), 3).unwrap());
        assert!(matches!(
            g.membership(&GradedElement::pair(5, 5), 4),
            Err(GradedError::BoundTooSmall { .. })
        ));
    }

    #[test]
    fn subdirectness() {
        assert!(sm(&[1, 2, 4]).is_subdirect());
        assert!(!sm(&[2, 4]).is_subdirect());
        let s = Ambient::nxs(FiniteSemigroup::cyclic_group(2));
        let g = GeneratedSub::new(s.clone(), vec![GradedElement::element(2, 1)]).unwrap();
        assert!(!g.is_subdirect());
        let g = GeneratedSub::new(s, vec![GradedElement::element(1, 1)]).unwrap();
        assert!(g.is_subdirect());
    }

    #[test]
    fn layers_over_z2() {
        let s = Ambient::nxs(FiniteSemigroup::cyclic_group(2));
        let u = GeneratedSub::new(s, vec![GradedElement::element(1, 1)]).unwrap();
        let l = u.layer_sequence(12).unwrap();
        assert_eq!(l.period, 2);
        assert_eq!(l.threshold, 1);
        assert_eq!(l.layer(1), &BTreeSet::from([1]));
        assert_eq!(l.layer(2), &BTreeSet::from([0]));
        assert_eq!(l.layer(3), &BTreeSet::from([1]));
        assert!(l.is_monotone());
        let x = u.extract_generators().unwrap();
        assert_eq!(
            x.generators,
            vec![GradedElement::element(1, 1), GradedElement::element(2, 0)]
        );
        assert!(u.regenerates(&x.generators, x.check_bound()).unwrap());
    }

    #[test]
    fn layers_over_left_zero() {
        let s = Ambient::nxs(FiniteSemigroup::left_zero(2));
        let t = GeneratedSub::new(
            s,
            vec![GradedElement::element(1, 0), GradedElement::element(3, 1)],
        )
        .unwrap();
        let l = t.layer_sequence(12).unwrap();
        assert_eq!(l.first_grades, BTreeMap::from([(0, 1), (1, 3)]));
        assert_eq!(l.period, 3);
        assert_eq!(l.threshold, 3);
        assert_eq!(l.layer(1), &BTreeSet::from([0]));
        assert_eq!(l.layer(2), &BTreeSet::from([0]));
        for n in 3..=12 {
            assert_eq!(l.layer(n), &BTreeSet::from([0, 1]));
        }
        let x = t.extract_generators().unwrap();
        let expected: Vec<GradedElement> = [
            (1, 0),
            (2, 0),
            (3, 0),
            (3, 1),
            (4, 0),
            (4, 1),
            (5, 0),
            (5, 1),
        ]
        .iter()
        .map(|&(g, s)| GradedElement::element(g, s))
        .collect();
        assert_eq!(x.generators, expected);
        assert!(t.regenerates(&x.generators, x.check_bound()).unwrap());
    }

    #[test]
    fn monogenic_identity_layer() {
        let s = Ambient::nxs(FiniteSemigroup::cyclic_group(3));
        let u = GeneratedSub::new(s, vec![GradedElement::element(1, 0)]).unwrap();
        let x = u.extract_generators().unwrap();
        assert_eq!((x.layers.threshold, x.layers.period), (1, 1));
        assert_eq!(x.generators, vec![GradedElement::element(1, 0)]);
    }

    #[test]
    fn period_not_detected_on_short_bound() {
        let s = Ambient::nxs(FiniteSemigroup::left_zero(2));
        let t = GeneratedSub::new(
            s,
            vec![GradedElement::element(1, 0), GradedElement::element(3, 1)],
        )
        .unwrap();
        assert_eq!(
            t.layer_sequence(6),
            Err(GradedError::PeriodNotDetected { bound: 6 })
        );
    }

    #[test]
    fn extraction_not_applicable_over_null() {
        let s = Ambient::nxs(
            FiniteSemigroup::null(2)
                .with_labels(vec!["0".into(), "a".into()])
                .unwrap(),
        );
        let t = GeneratedSub::new(s, vec![GradedElement::element(1, 1)]).unwrap();
        match t.extract_generators() {
            Err(GradedError::NotApplicable(msg)) => assert!(msg.contains('a'), "{msg}"),
            other => panic!("{other:?}"),
        }
        let nn = sm(&[1, 2]);
        assert!(matches!(
            nn.extract_generators(),
            Err(GradedError::NotApplicable(_))
        ));
    }

    #[test]
    fn regenerates_detects_missing_indecomposable() {
        let g = sm(&[1, 2, 4]);
        assert!(g.regenerates(g.generators(), 6).unwrap());
        let dropped = vec![GradedElement::pair(1, 1), GradedElement::pair(1, 2)];
        assert!(!g.regenerates(&dropped, 6).unwrap());
    }

    #[test]
    fn numerical_forms() {
        let f = numerical_form(&[2]).unwrap();
        assert_eq!((f.sporadic.clone(), f.step, f.threshold), (vec![], 2, 1));
        let f = numerical_form(&[2, 3]).unwrap();
        assert_eq!((f.sporadic.clone(), f.step, f.threshold), (vec![], 1, 2));
        let f = numerical_form(&[3, 5]).unwrap();
        assert_eq!(
            (f.sporadic.clone(), f.step, f.threshold),
            (vec![3, 5, 6], 1, 8)
        );
        let f = numerical_form(&[6, 10]).unwrap();
        assert_eq!(
            (f.sporadic.clone(), f.step, f.threshold),
            (vec![6, 10, 12], 2, 8)
        );
        assert!(numerical_form(&[]).is_err());
    }

    #[test]
    fn generator_file_round_trip() {
        let text = "# S_M\n1 : 1\n1 : 2\n1 : 4\n";
        let g = GeneratedSub::parse(text, None).unwrap();
        assert_eq!(g, sm(&[1, 2, 4]));
        assert_eq!(GeneratedSub::parse(&g.to_text(), None).unwrap(), g);
        let k = GeneratedSub::parse("1 : 1,1\n1 : 1,2\n", None).unwrap();
        assert_eq!(k.ambient(), &Ambient::NxK(3));
        assert!(matches!(
            GeneratedSub::parse("1 : 1,1\n1 : 2\n", None),
            Err(GradedError::Parse { line: 2, .. })
        ));
        let s = Arc::new(
            FiniteSemigroup::null(2)
                .with_labels(vec!["z".into(), "a".into()])
                .unwrap(),
        );
        let g = GeneratedSub::parse("1 : a\n3 : 0\n", Some(s)).unwrap();
        assert_eq!(
            g.generators(),
            &[GradedElement::element(1, 1), GradedElement::element(3, 0)]
        );
    }
}
