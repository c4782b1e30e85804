//! Discrete dynamical systems `(X, φ)` with `φ` a proper surjection, and the
//! finite/cofinite subset algebra they act on.
//!
//! `X` is countable and discrete, so `φ` is continuous and every subset is
//! closed. Finite systems carry an explicit table; infinite ones are
//! [`Template`]s on ℤ. The finite/cofinite algebra is closed under images and
//! preimages of any proper surjection with computable fibers.

mod coset;
mod templates;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use coset::{CoSet, Mode, ParseCoSetError};
pub use templates::{Doubling, Shift, ShiftWithFixed, Template, TemplateParams, TemplateRegistry};

pub type Point = i64;

/// Default number of steps a hitting-time computation may take.
pub const DEFAULT_HIT_BUDGET: u64 = 1_000_000;

/// Radius of the window used by [`DynamicalSystem::validate`] on templates.
pub const DEFAULT_VALIDATION_RADIUS: i64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    #[error("point {0} is outside the carrier")]
    OutsideCarrier(Point),
    #[error("missing capability: {0}")]
    Capability(String),
    #[error("orbit of {x} meets the target set infinitely often")]
    InfiniteHitting { x: Point },
    #[error("iteration budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("invalid system: {0}")]
    Invalid(String),
}

impl DynamicsError {
    /// Capability and budget failures, as opposed to malformed input.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            Self::Capability(_) | Self::InfiniteHitting { .. } | Self::BudgetExceeded(_)
        )
    }
}

#[derive(Debug, Clone)]
struct FiniteMap {
    carrier: Vec<Point>,
    index: HashMap<Point, usize>,
    image: Vec<usize>,
    fibers: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
enum Kind {
    Finite(FiniteMap),
    Template(Arc<dyn Template>),
}

/// A discrete dynamical system. Immutable once built.
#[derive(Debug, Clone)]
pub struct DynamicalSystem {
    kind: Kind,
    homeomorphism: bool,
    hit_budget: u64,
}

/// Sort key realizing the canonical point order: declaration order on finite
/// carriers, `0, −1, 1, −2, 2, …` on ℤ. Both are well-orders, so every
/// nonempty set (cofinite ones included) has a canonical minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonKey(u64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub system: String,
    pub checks: Vec<Check>,
}

impl SystemReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl DynamicalSystem {
    /// A finite system from its carrier (in declaration order) and a total map.
    ///
    /// Surjectivity is not enforced here; [`Self::validate`] reports it.
    pub fn finite(carrier: &[Point], map: &[(Point, Point)]) -> Result<Self, DynamicsError> {
        if carrier.is_empty() {
            return Err(DynamicsError::Invalid("empty carrier".into()));
        }
        let mut index = HashMap::with_capacity(carrier.len());
        for (i, &x) in carrier.iter().enumerate() {
            if index.insert(x, i).is_some() {
                return Err(DynamicsError::Invalid(format!("point {x} declared twice")));
            }
        }
        let mut image = vec![usize::MAX; carrier.len()];
        for &(x, y) in map {
            let i = *index.get(&x).ok_or(DynamicsError::OutsideCarrier(x))?;
            let j = *index.get(&y).ok_or(DynamicsError::OutsideCarrier(y))?;
            if image[i] != usize::MAX && image[i] != j {
                return Err(DynamicsError::Invalid(format!("point {x} mapped twice")));
            }
            image[i] = j;
        }
        if let Some(i) = image.iter().position(|&j| j == usize::MAX) {
            return Err(DynamicsError::Invalid(format!("map undefined at {}", carrier[i])));
        }
        let mut fibers = vec![Vec::new(); carrier.len()];
        for (i, &j) in image.iter().enumerate() {
            fibers[j].push(i);
        }
        let homeomorphism = fibers.iter().all(|f| f.len() == 1);
        Ok(Self {
            kind: Kind::Finite(FiniteMap { carrier: carrier.to_vec(), index, image, fibers }),
            homeomorphism,
            hit_budget: DEFAULT_HIT_BUDGET,
        })
    }

    /// The permutation `i ↦ images[i]` on `0..images.len()`.
    pub fn permutation(images: &[usize]) -> Result<Self, DynamicsError> {
        let carrier: Vec<Point> = (0..images.len() as Point).collect();
        let map: Vec<(Point, Point)> =
            images.iter().enumerate().map(|(i, &j)| (i as Point, j as Point)).collect();
        Self::finite(&carrier, &map)
    }

    pub fn template(t: Arc<dyn Template>) -> Self {
        let homeomorphism = t.attested_homeomorphism();
        Self { kind: Kind::Template(t), homeomorphism, hit_budget: DEFAULT_HIT_BUDGET }
    }

    pub fn shift() -> Self {
        Self::template(Arc::new(Shift { step: 1 }))
    }

    pub fn doubling() -> Self {
        Self::template(Arc::new(Doubling { base: 2 }))
    }

    /// Overrides the homeomorphism attestation (checked by [`Self::validate`]).
    pub fn with_homeomorphism_attested(mut self, flag: bool) -> Self {
        self.homeomorphism = flag;
        self
    }

    pub fn with_hit_budget(mut self, budget: u64) -> Self {
        self.hit_budget = budget;
        self
    }

    pub fn hit_budget(&self) -> u64 {
        self.hit_budget
    }

    pub fn is_homeomorphism(&self) -> bool {
        self.homeomorphism
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite(_))
    }

    /// The carrier in declaration order, for finite systems.
    pub fn carrier(&self) -> Option<&[Point]> {
        match &self.kind {
            Kind::Finite(m) => Some(&m.carrier),
            Kind::Template(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Finite(m) => {
                let pairs: Vec<String> = m
                    .carrier
                    .iter()
                    .zip(&m.image)
                    .map(|(x, &j)| format!("{x}->{}", m.carrier[j]))
                    .collect();
                format!("finite[{}]", pairs.join(","))
            }
            Kind::Template(t) => t.label(),
        }
    }

    fn finite_index(m: &FiniteMap, x: Point) -> Result<usize, DynamicsError> {
        m.index.get(&x).copied().ok_or(DynamicsError::OutsideCarrier(x))
    }

    pub fn in_carrier(&self, x: Point) -> bool {
        match &self.kind {
            Kind::Finite(m) => m.index.contains_key(&x),
            Kind::Template(_) => true,
        }
    }

    pub fn apply(&self, x: Point) -> Result<Point, DynamicsError> {
        match &self.kind {
            Kind::Finite(m) => Ok(m.carrier[m.image[Self::finite_index(m, x)?]]),
            Kind::Template(t) => Ok(t.apply(x)),
        }
    }

    /// φⁿ(x).
    pub fn iterate(&self, x: Point, n: usize) -> Result<Point, DynamicsError> {
        (0..n).try_fold(x, |y, _| self.apply(y))
    }

    /// φ⁻¹({x}) in canonical order.
    pub fn fiber(&self, x: Point) -> Result<Vec<Point>, DynamicsError> {
        match &self.kind {
            Kind::Finite(m) => {
                let i = Self::finite_index(m, x)?;
                Ok(m.fibers[i].iter().map(|&j| m.carrier[j]).collect())
            }
            Kind::Template(t) => {
                let mut fib = t
                    .fiber(x)
                    .ok_or_else(|| DynamicsError::Capability(format!("{} has no fiber oracle", t.label())))?;
                fib.sort_by_key(|&y| self.canonical_key(y));
                Ok(fib)
            }
        }
    }

    /// φ⁻¹(x) for homeomorphisms.
    pub fn inverse(&self, x: Point) -> Result<Point, DynamicsError> {
        if !self.homeomorphism {
            return Err(DynamicsError::Capability(format!("{} is not a homeomorphism", self.label())));
        }
        match &self.kind {
            Kind::Finite(m) => {
                let i = Self::finite_index(m, x)?;
                Ok(m.carrier[m.fibers[i][0]])
            }
            Kind::Template(t) => t
                .inverse(x)
                .ok_or_else(|| DynamicsError::Capability(format!("{} has no inverse oracle", t.label()))),
        }
    }

    /// `{k ≥ n_min : φᵏ(x) ∈ w}` in ascending order.
    ///
    /// Fails rather than truncating when the set is infinite or the iteration
    /// budget runs out.
    pub fn hitting_times(&self, x: Point, w: &BTreeSet<Point>, n_min: usize) -> Result<Vec<usize>, DynamicsError> {
        match &self.kind {
            Kind::Finite(m) => {
                Self::finite_index(m, x)?;
                if w.is_empty() {
                    return Ok(Vec::new());
                }
                self.finite_hits(m, x, w, n_min)
            }
            Kind::Template(t) => {
                if w.is_empty() {
                    return Ok(Vec::new());
                }
                t.forward_hits(x, w, n_min, self.hit_budget).unwrap_or_else(|| {
                    Err(DynamicsError::Capability(format!("{} has no hitting oracle", t.label())))
                })
            }
        }
    }

    pub fn has_hitting_oracle(&self) -> bool {
        match &self.kind {
            Kind::Finite(_) => true,
            Kind::Template(t) => t.forward_hits(0, &BTreeSet::from([0]), 0, 1).is_some(),
        }
    }

    fn finite_hits(&self, m: &FiniteMap, x: Point, w: &BTreeSet<Point>, n_min: usize) -> Result<Vec<usize>, DynamicsError> {
        // Walk the orbit until it repeats; the part from the first repeated
        // point on is the cycle.
        let mut first_seen: HashMap<usize, usize> = HashMap::new();
        let mut orbit = Vec::new();
        let mut cur = Self::finite_index(m, x)?;
        while !first_seen.contains_key(&cur) {
            if orbit.len() as u64 > self.hit_budget {
                return Err(DynamicsError::BudgetExceeded(self.hit_budget));
            }
            first_seen.insert(cur, orbit.len());
            orbit.push(cur);
            cur = m.image[cur];
        }
        let cycle_start = first_seen[&cur];
        if orbit[cycle_start..].iter().any(|&i| w.contains(&m.carrier[i])) {
            return Err(DynamicsError::InfiniteHitting { x });
        }
        Ok(orbit[..cycle_start]
            .iter()
            .enumerate()
            .filter(|&(k, &i)| k >= n_min && w.contains(&m.carrier[i]))
            .map(|(k, _)| k)
            .collect())
    }

    pub fn canonical_key(&self, x: Point) -> CanonKey {
        match &self.kind {
            Kind::Finite(m) => CanonKey(m.index.get(&x).map_or(u64::MAX, |&i| i as u64), x),
            Kind::Template(_) => CanonKey(x.unsigned_abs(), x),
        }
    }

    /// All points in canonical order (infinite for templates).
    pub fn canonical_points(&self) -> Box<dyn Iterator<Item = Point> + '_> {
        match &self.kind {
            Kind::Finite(m) => Box::new(m.carrier.iter().copied()),
            Kind::Template(_) => Box::new((0i64..).flat_map(|r| if r == 0 { vec![0] } else { vec![-r, r] })),
        }
    }

    /// The canonical exhaustion window of the given radius: `[−r, r]` on ℤ,
    /// the first `r + 1` declared points on finite carriers.
    pub fn window(&self, radius: usize) -> Vec<Point> {
        match &self.kind {
            Kind::Finite(m) => m.carrier.iter().take(radius + 1).copied().collect(),
            Kind::Template(_) => self.canonical_points().take(2 * radius + 1).collect(),
        }
    }

    pub fn sort_canonical(&self, points: &mut [Point]) {
        points.sort_by_key(|&x| self.canonical_key(x));
    }

    // ---- set algebra -------------------------------------------------------

    /// Brings a set into canonical form: on finite carriers every set is
    /// finite mode.
    pub fn normalize(&self, s: CoSet) -> CoSet {
        match (&self.kind, s.is_cofinite()) {
            (Kind::Finite(m), true) => {
                CoSet::finite(m.carrier.iter().copied().filter(|x| !s.exceptional().contains(x)))
            }
            _ => s,
        }
    }

    pub fn full_set(&self) -> CoSet {
        self.normalize(CoSet::full())
    }

    pub fn complement(&self, s: &CoSet) -> CoSet {
        self.normalize(s.complement())
    }

    pub fn union(&self, s: &CoSet, t: &CoSet) -> CoSet {
        self.normalize(s.union(t))
    }

    pub fn intersect(&self, s: &CoSet, t: &CoSet) -> CoSet {
        self.normalize(s.intersect(t))
    }

    pub fn difference(&self, s: &CoSet, t: &CoSet) -> CoSet {
        self.normalize(s.difference(t))
    }

    pub fn is_subset(&self, s: &CoSet, t: &CoSet) -> bool {
        self.difference(s, t).is_empty()
    }

    pub fn set_eq(&self, s: &CoSet, t: &CoSet) -> bool {
        self.normalize(s.clone()) == self.normalize(t.clone())
    }

    pub fn is_empty_set(&self, s: &CoSet) -> bool {
        self.normalize(s.clone()).is_empty()
    }

    pub fn is_full_set(&self, s: &CoSet) -> bool {
        self.complement(s).is_empty()
    }

    pub fn member(&self, s: &CoSet, x: Point) -> bool {
        self.in_carrier(x) && s.contains(x)
    }

    /// φ(s). For a cofinite `X∖F` the image is `X∖{y : φ⁻¹(y) ⊆ F}`, and only
    /// `y ∈ φ(F)` can qualify.
    pub fn image_set(&self, s: &CoSet) -> Result<CoSet, DynamicsError> {
        let s = self.normalize(s.clone());
        if !s.is_cofinite() {
            let pts = s.exceptional().iter().map(|&x| self.apply(x)).collect::<Result<Vec<_>, _>>()?;
            return Ok(self.normalize(CoSet::finite(pts)));
        }
        let mut missed = BTreeSet::new();
        for &x in s.exceptional() {
            let y = self.apply(x)?;
            if missed.contains(&y) {
                continue;
            }
            if self.fiber(y)?.iter().all(|z| s.exceptional().contains(z)) {
                missed.insert(y);
            }
        }
        Ok(self.normalize(CoSet::cofinite(missed)))
    }

    /// φ⁻¹(s). Uses `φ⁻¹(X∖F) = X∖φ⁻¹(F)` for cofinite sets.
    pub fn preimage_set(&self, s: &CoSet) -> Result<CoSet, DynamicsError> {
        let s = self.normalize(s.clone());
        let mut pre = BTreeSet::new();
        for &y in s.exceptional() {
            pre.extend(self.fiber(y)?);
        }
        Ok(self.normalize(if s.is_cofinite() { CoSet::cofinite(pre) } else { CoSet::finite(pre) }))
    }

    /// φⁿ(s).
    pub fn image_set_iter(&self, s: &CoSet, n: usize) -> Result<CoSet, DynamicsError> {
        (0..n).try_fold(self.normalize(s.clone()), |acc, _| self.image_set(&acc))
    }

    /// φ⁻ⁿ(s).
    pub fn preimage_set_iter(&self, s: &CoSet, n: usize) -> Result<CoSet, DynamicsError> {
        (0..n).try_fold(self.normalize(s.clone()), |acc, _| self.preimage_set(&acc))
    }

    /// Smallest member in canonical order.
    pub fn canonical_min(&self, s: &CoSet) -> Option<Point> {
        let s = self.normalize(s.clone());
        if s.is_cofinite() {
            self.canonical_points().find(|x| !s.exceptional().contains(x))
        } else {
            s.exceptional().iter().copied().min_by_key(|&x| self.canonical_key(x))
        }
    }

    // ---- validation --------------------------------------------------------

    /// Exact checks on finite systems; window spot-checks on templates.
    pub fn validate(&self, radius: i64) -> SystemReport {
        let mut checks = Vec::new();
        match &self.kind {
            Kind::Finite(m) => {
                let missed: Vec<Point> =
                    m.fibers.iter().enumerate().filter(|(_, f)| f.is_empty()).map(|(i, _)| m.carrier[i]).collect();
                checks.push(Check::new(
                    "surjective",
                    missed.is_empty(),
                    if missed.is_empty() { "every point has a preimage".into() } else { format!("not surjective: no preimage for {missed:?}") },
                ));
                checks.push(Check::new("proper", true, "finite carrier"));
                if self.homeomorphism {
                    let bad = m.fibers.iter().position(|f| f.len() != 1);
                    checks.push(Check::new(
                        "homeomorphism",
                        bad.is_none(),
                        match bad {
                            None => "map is a bijection".to_string(),
                            Some(i) => format!("fiber({}) has {} elements", m.carrier[i], m.fibers[i].len()),
                        },
                    ));
                }
            }
            Kind::Template(t) => {
                let window: Vec<Point> = (-radius..=radius).collect();
                let mut fibers = HashMap::new();
                let mut first_error = None;
                for &x in &window {
                    match t.fiber(x) {
                        Some(f) => {
                            fibers.insert(x, f);
                        }
                        None => {
                            first_error.get_or_insert(x);
                        }
                    }
                }
                checks.push(Check::new(
                    "fiber-oracle",
                    first_error.is_none(),
                    match first_error {
                        None => format!("fibers available on [-{radius}, {radius}]"),
                        Some(x) => format!("no fiber for {x}"),
                    },
                ));
                let empty = window.iter().find(|x| fibers.get(x).is_some_and(|f| f.is_empty()));
                checks.push(Check::new(
                    "surjective-window",
                    empty.is_none(),
                    match empty {
                        None => format!("every point of [-{radius}, {radius}] has a preimage"),
                        Some(x) => format!("not surjective: fiber({x}) is empty"),
                    },
                ));
                // Fibers must be exactly the preimages: each listed point maps
                // back, and every window point appears in the fiber of its image.
                let wrong = window.iter().find_map(|&x| {
                    fibers.get(&x).and_then(|f| f.iter().find(|&&y| t.apply(y) != x).map(|&y| (x, y)))
                });
                let missing = window.iter().find_map(|&y| {
                    let x = t.apply(y);
                    match t.fiber(x) {
                        Some(f) if !f.contains(&y) => Some((x, y)),
                        _ => None,
                    }
                });
                checks.push(Check::new(
                    "proper-window",
                    wrong.is_none() && missing.is_none(),
                    match (wrong, missing) {
                        (None, None) => "fibers are finite and exact on the window".to_string(),
                        (Some((x, y)), _) => format!("fiber({x}) lists {y}, which maps elsewhere"),
                        (None, Some((x, y))) => format!("fiber({x}) omits {y}"),
                    },
                ));
                if self.homeomorphism {
                    let multi = window.iter().find(|x| fibers.get(x).is_some_and(|f| f.len() != 1));
                    let inverse_bad =
                        window.iter().find(|&&x| t.inverse(x).map(|y| t.apply(y)) != Some(x) || t.inverse(t.apply(x)) != Some(x));
                    checks.push(Check::new(
                        "homeomorphism",
                        multi.is_none() && inverse_bad.is_none(),
                        match (multi, inverse_bad) {
                            (None, None) => "fibers are singletons and the inverse is consistent".to_string(),
                            (Some(x), _) => format!("fiber({x}) has {} elements", fibers[x].len()),
                            (None, Some(x)) => format!("inverse inconsistent at {x}"),
                        },
                    ));
                }
            }
        }
        SystemReport { system: self.label(), checks }
    }
}

impl fmt::Display for DynamicalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
