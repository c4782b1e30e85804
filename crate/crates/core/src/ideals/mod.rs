//! Ideals `I ~ {X_n}` of the semicrossed product and the decision procedures
//! for left, right and two-sided approximate units.
//!
//! An ideal is described by closed sets with `X_{n+1} ∪ φ(X_{n+1}) ⊆ X_n`; it
//! consists of the elements whose `n`th Fourier coefficient vanishes on `X_n`.
//! Two descriptions are supported: an eventually constant list of
//! finite/cofinite sets, and the `(S, W)` form `X_n = S ∪ ⋃_{k≥n} φ⁻ᵏ(W)` for
//! homeomorphisms, whose sets are usually neither finite nor cofinite and are
//! only ever queried pointwise.

mod decide;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Series;
use crate::dynamics::{Check, CoSet, DynamicalSystem, DynamicsError, Point};

pub use decide::{Cond2Report, Decision, Evidence, Rule, Verdict};

/// Default bound on `|k|` for the spot checks of `φᵏ(W) ∩ S = ∅`.
pub const DEFAULT_K_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("invalid ideal spec: {0}")]
    InvalidSpec(String),
    #[error("zero ideal: every X_n equals X")]
    ZeroIdeal,
    #[error("carrier not compact")]
    NotCompact,
    #[error("system is not a homeomorphism")]
    NotHomeomorphism,
    #[error("ideal has no left approximate unit")]
    NoLeftUnit,
    #[error("W = X_0 \\ X_1 is not finite")]
    InfiniteW,
    #[error("{0}")]
    Precondition(String),
}

impl IdealError {
    /// Failures caused by missing capabilities or budgets rather than bad input.
    pub fn is_capability(&self) -> bool {
        match self {
            Self::Dynamics(e) => e.is_capability(),
            Self::NotCompact => true,
            _ => false,
        }
    }
}

/// A deliberately corrupted decision clause, used to check that the
/// cross-validation harness notices wrong answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Condition (3) equalities checked only as `image ⊇ target`.
    Cond3Covering,
    /// Condition (3) equalities checked only as `image ⊆ target`. For a
    /// surjective `φ` this is equivalent to equality, so the harness cannot
    /// and should not detect it.
    Cond3Forward,
    /// Witnesses use `n₀ + 1` instead of the minimal `n₀`.
    NonMinimalN0,
    /// The `X₀ ⊊ X` clause of the left decision is skipped.
    DropX0Proper,
}

impl Mutation {
    pub const ALL: [Mutation; 5] =
        [Self::None, Self::Cond3Covering, Self::Cond3Forward, Self::NonMinimalN0, Self::DropX0Proper];

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Cond3Covering => "cond3-covering",
            Self::Cond3Forward => "cond3-forward",
            Self::NonMinimalN0 => "non-minimal-n0",
            Self::DropX0Proper => "drop-x0-proper",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown mutation {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecForm {
    /// `X_0, …, X_m`, with `X_n = X_m` for `n ≥ m`.
    Stable { sets: Vec<CoSet> },
    /// `X_n = S ∪ ⋃_{k≥n} φ⁻ᵏ(W)`.
    Sw { s: CoSet, w: BTreeSet<Point>, k_budget: usize },
}

#[derive(Debug, Clone)]
pub struct IdealSpec {
    system: Arc<DynamicalSystem>,
    form: SpecForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecReport {
    pub spec: String,
    pub checks: Vec<Check>,
}

impl SpecReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

impl IdealSpec {
    /// An eventually constant sequence; the last set repeats forever.
    pub fn stable(system: Arc<DynamicalSystem>, sets: Vec<CoSet>) -> Result<Self, IdealError> {
        if sets.is_empty() {
            return Err(IdealError::InvalidSpec("a stable spec needs at least one set".into()));
        }
        let sets = sets.into_iter().map(|s| system.normalize(s)).collect();
        Ok(Self { system, form: SpecForm::Stable { sets } })
    }

    /// Like [`Self::stable`], with the index from which the sequence is
    /// constant given explicitly. Sets listed past that index must repeat it.
    pub fn stable_from(system: Arc<DynamicalSystem>, sets: Vec<CoSet>, stable_from: usize) -> Result<Self, IdealError> {
        if stable_from >= sets.len() {
            return Err(IdealError::InvalidSpec(format!(
                "stable_from = {stable_from} but only {} sets are listed",
                sets.len()
            )));
        }
        let spec = Self::stable(system, sets)?;
        let SpecForm::Stable { sets } = &spec.form else { unreachable!() };
        if let Some(j) = (stable_from + 1..sets.len()).find(|&j| sets[j] != sets[stable_from]) {
            return Err(IdealError::InvalidSpec(format!("X_{j} differs from X_{stable_from} past stable_from")));
        }
        let mut sets = sets.clone();
        sets.truncate(stable_from + 1);
        Ok(Self { system: spec.system, form: SpecForm::Stable { sets } })
    }

    /// An `(S, W)` spec without checking its invariants; see [`Self::validate_star`]
    /// and [`build_from_sw`].
    pub fn sw_unchecked(system: Arc<DynamicalSystem>, s: CoSet, w: impl IntoIterator<Item = Point>, k_budget: usize) -> Self {
        let s = system.normalize(s);
        Self { system, form: SpecForm::Sw { s, w: w.into_iter().collect(), k_budget } }
    }

    pub fn system(&self) -> &DynamicalSystem {
        &self.system
    }

    pub fn system_arc(&self) -> &Arc<DynamicalSystem> {
        &self.system
    }

    pub fn form(&self) -> &SpecForm {
        &self.form
    }

    /// The index `m` after which a stable sequence is constant.
    pub fn stable_index(&self) -> Option<usize> {
        match &self.form {
            SpecForm::Stable { sets } => Some(sets.len() - 1),
            SpecForm::Sw { .. } => None,
        }
    }

    /// `X_n` as a set, for stable specs.
    pub fn x_n(&self, n: usize) -> Option<&CoSet> {
        match &self.form {
            SpecForm::Stable { sets } => Some(&sets[n.min(sets.len() - 1)]),
            SpecForm::Sw { .. } => None,
        }
    }

    /// A bound past which the behaviour of the sequence repeats: `m` for stable
    /// specs, `1` for `(S, W)` specs.
    pub fn horizon(&self) -> usize {
        self.stable_index().unwrap_or(1)
    }

    pub fn member_x_n(&self, n: usize, x: Point) -> Result<bool, IdealError> {
        if !self.system.in_carrier(x) {
            return Err(DynamicsError::OutsideCarrier(x).into());
        }
        match &self.form {
            SpecForm::Stable { .. } => Ok(self.x_n(n).expect("stable").contains(x)),
            SpecForm::Sw { s, w, .. } => Ok(s.contains(x) || !self.system.hitting_times(x, w, n)?.is_empty()),
        }
    }

    pub fn is_zero_ideal(&self) -> bool {
        match &self.form {
            SpecForm::Stable { sets } => sets.iter().all(|s| self.system.is_full_set(s)),
            SpecForm::Sw { s, .. } => self.system.is_full_set(s),
        }
    }

    /// Whether `Eₙ(A)` vanishes on `X_n` for every `n`.
    pub fn contains(&self, a: &Series) -> Result<bool, IdealError> {
        for (n, f) in a.terms() {
            for x in f.support() {
                if self.member_x_n(n, x)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks `(*)` for stable specs, and the `(S, W)` invariants (which imply
    /// `(*)`) for the other form.
    pub fn validate_star(&self) -> Result<SpecReport, IdealError> {
        let sys = &*self.system;
        let mut checks = Vec::new();
        match &self.form {
            SpecForm::Stable { sets } => {
                let outside: Vec<Point> = sets
                    .iter()
                    .filter(|s| !s.is_cofinite())
                    .flat_map(|s| s.exceptional().iter().copied())
                    .filter(|&x| !sys.in_carrier(x))
                    .collect();
                checks.push(Check::new(
                    "carrier",
                    outside.is_empty(),
                    if outside.is_empty() { "all sets lie in X".to_string() } else { format!("points outside X: {outside:?}") },
                ));
                if outside.is_empty() {
                    let m = sets.len() - 1;
                    for n in 0..=m {
                        let next = &sets[(n + 1).min(m)];
                        let lhs = sys.union(next, &sys.image_set(next)?);
                        let ok = sys.is_subset(&lhs, &sets[n]);
                        checks.push(Check::new(
                            format!("star.n={n}"),
                            ok,
                            if ok {
                                format!("X_{} ∪ φ(X_{}) ⊆ X_{n}", n + 1, n + 1)
                            } else {
                                format!("X_{} ∪ φ(X_{}) = {lhs} ⊄ X_{n} = {}", n + 1, n + 1, sets[n])
                            },
                        ));
                    }
                }
            }
            SpecForm::Sw { s, w, k_budget } => {
                checks.push(Check::new(
                    "homeomorphism",
                    sys.is_homeomorphism(),
                    if sys.is_homeomorphism() { "φ is a homeomorphism" } else { "the (S, W) form needs a homeomorphism" },
                ));
                checks.push(Check::new(
                    "hitting-oracle",
                    sys.has_hitting_oracle(),
                    if sys.has_hitting_oracle() { "forward hitting times available" } else { "no hitting oracle" },
                ));
                if !(sys.is_homeomorphism() && sys.has_hitting_oracle()) {
                    return Ok(SpecReport { spec: self.to_string(), checks });
                }
                let outside: Vec<Point> = w.iter().copied().filter(|&x| !sys.in_carrier(x)).collect();
                checks.push(Check::new(
                    "carrier",
                    outside.is_empty(),
                    if outside.is_empty() { "W lies in X".to_string() } else { format!("points of W outside X: {outside:?}") },
                ));
                if !outside.is_empty() {
                    return Ok(SpecReport { spec: self.to_string(), checks });
                }
                let image = sys.image_set(s)?;
                let invariant = sys.set_eq(&image, s);
                checks.push(Check::new(
                    "sw.invariant-core",
                    invariant,
                    if invariant { "φ(S) = S".to_string() } else { format!("φ(S) = {image} ≠ S = {s}") },
                ));
                checks.push(self.sw_disjoint_check(w)?);
                checks.push(self.sw_core_avoid_check(s, w, *k_budget)?);
            }
        }
        Ok(SpecReport { spec: self.to_string(), checks })
    }

    /// `φ⁻ʲ(W)`, `j ≥ 0`, pairwise disjoint. For a bijection this reduces to
    /// `φᵏ(w) ∉ W` for `w ∈ W`, `k ≥ 1`, which the hitting oracle decides.
    fn sw_disjoint_check(&self, w: &BTreeSet<Point>) -> Result<Check, IdealError> {
        for &x in w {
            match self.system.hitting_times(x, w, 1) {
                Ok(hits) => {
                    if let Some(&k) = hits.first() {
                        let y = self.system.iterate(x, k)?;
                        return Ok(Check::new(
                            "sw.disjoint",
                            false,
                            format!("φ^-{k}(W) meets W at {x} (φ^{k}({x}) = {y}), j = {k}"),
                        ));
                    }
                }
                Err(DynamicsError::InfiniteHitting { .. }) => {
                    return Ok(Check::new("sw.disjoint", false, format!("the orbit of {x} ∈ W returns to W infinitely often")));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Check::new("sw.disjoint", true, "φ^-j(W), j ≥ 0, are pairwise disjoint"))
    }

    /// `φᵏ(W) ∩ S = ∅` for all `k ∈ ℤ`. Given `φ(S) = S` this is exactly
    /// `W ∩ S = ∅`; the orbit is also walked for `|k| ≤ k_budget`.
    fn sw_core_avoid_check(&self, s: &CoSet, w: &BTreeSet<Point>, k_budget: usize) -> Result<Check, IdealError> {
        let sys = &*self.system;
        for &x in w {
            let (mut fwd, mut back) = (x, x);
            for k in 0..=k_budget {
                if s.contains(fwd) {
                    return Ok(Check::new("sw.core-avoid", false, format!("φ^{k}({x}) = {fwd} lies in S")));
                }
                if s.contains(back) {
                    return Ok(Check::new("sw.core-avoid", false, format!("φ^-{k}({x}) = {back} lies in S")));
                }
                fwd = sys.apply(fwd)?;
                back = sys.inverse(back)?;
            }
        }
        Ok(Check::new("sw.core-avoid", true, format!("W ∩ S = ∅; orbits checked for |k| ≤ {k_budget}")))
    }

    fn require_valid(&self) -> Result<(), IdealError> {
        let report = self.validate_star()?;
        if let Some(c) = report.first_failure() {
            return Err(IdealError::InvalidSpec(format!("{}: {}", c.name, c.detail)));
        }
        Ok(())
    }

    /// Validity plus the non-zero hypothesis every decision needs.
    pub fn require_decidable(&self) -> Result<(), IdealError> {
        self.require_valid()?;
        if self.is_zero_ideal() {
            return Err(IdealError::ZeroIdeal);
        }
        Ok(())
    }

    /// `(S, W)` with `S = ⋂ X_n` and `W = X_0 ∖ X_1`, for ideals with a left
    /// approximate unit over a homeomorphism.
    pub fn decompose_sw(&self) -> Result<(CoSet, BTreeSet<Point>), IdealError> {
        if !self.system.is_homeomorphism() {
            return Err(IdealError::NotHomeomorphism);
        }
        if let SpecForm::Sw { s, w, .. } = &self.form {
            self.require_valid()?;
            return Ok((s.clone(), w.clone()));
        }
        if self.decide_left_au()?.verdict != Verdict::Yes {
            return Err(IdealError::NoLeftUnit);
        }
        let m = self.stable_index().expect("stable");
        let s = self.x_n(m).expect("stable").clone();
        let w = self.system.difference(self.x_n(0).expect("stable"), self.x_n(1).expect("stable"));
        match w.as_finite() {
            Some(w) => Ok((s, w.clone())),
            None => Err(IdealError::InfiniteW),
        }
    }
}

/// The `(S, W)` spec, refusing inputs that violate its invariants.
pub fn build_from_sw(
    system: Arc<DynamicalSystem>,
    s: CoSet,
    w: impl IntoIterator<Item = Point>,
    k_budget: usize,
) -> Result<IdealSpec, IdealError> {
    let spec = IdealSpec::sw_unchecked(system, s, w, k_budget);
    let report = spec.validate_star()?;
    if let Some(c) = report.first_failure() {
        return Err(IdealError::Precondition(format!("{}: {}", c.name, c.detail)));
    }
    Ok(spec)
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            SpecForm::Stable { sets } => {
                let parts: Vec<String> = sets.iter().map(ToString::to_string).collect();
                write!(f, "stable[{}]", parts.join(","))
            }
            SpecForm::Sw { s, w, .. } => {
                let pts: Vec<String> = w.iter().map(ToString::to_string).collect();
                write!(f, "sw[S={s},W={{{}}}]", pts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests;
