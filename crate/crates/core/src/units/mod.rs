//! Approximate units `U⁰u_F` and obstruction witnesses for ideals `I ~ {X_n}`.
//!
//! On a discrete carrier the functions `u_F` are indicators of `F ∖ X₀`, and
//! for a finitely supported `A` the residuals `‖AU⁰u_F − A‖₁`, `‖U⁰u_F A − A‖₁`
//! are exactly zero as soon as `F` covers a finite window read off from `A`.
//! Residuals are measured in ℓ¹, which dominates the operator norm; lower
//! bounds go through a single Fourier coefficient, which the operator norm
//! dominates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{modulus, Func, Series, Surd};
use crate::dynamics::{Check, CoSet, Point};
use crate::ideals::{IdealError, IdealSpec, Mutation, SpecForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Left => "left",
            Self::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "left" => Ok(Self::Left),
            "right" => Ok(Self::Right),
            _ => Err(format!("side must be left or right, got {s:?}")),
        }
    }
}

mod as_string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element `A ∈ I` with `‖AV − A‖ ≥ 1` (right) or `‖VA − A‖ ≥ 1` (left)
/// for every `V ∈ I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub side: Side,
    pub n0: usize,
    pub x0: Point,
    #[serde(with = "as_string")]
    pub a: Series,
    #[serde(with = "as_string")]
    pub bound: BigRational,
    /// Left side with `X₀ = X`: `E₀` vanishes on the whole ideal.
    #[serde(default)]
    pub degenerate: bool,
}

impl Witness {
    fn new(side: Side, n0: usize, x0: Point, degenerate: bool) -> Self {
        let degree = match side {
            Side::Right => n0 + 1,
            Side::Left => n0,
        };
        Self { side, n0, x0, a: Series::monomial(degree, Func::delta(x0)), bound: BigRational::one(), degenerate }
    }

    /// The degree at which the obstruction is read off.
    pub fn degree(&self) -> usize {
        match self.side {
            Side::Right => self.n0 + 1,
            Side::Left => self.n0,
        }
    }
}

/// `U⁰ 1_{F∖X₀}`.
pub fn unit_element(spec: &IdealSpec, window: &[Point]) -> Result<Series, IdealError> {
    let mut pts = Vec::new();
    for &x in window {
        if !spec.member_x_n(0, x)? {
            pts.push(x);
        }
    }
    Ok(Series::constant(Func::indicator(pts)))
}

/// The net `F ↦ U⁰ 1_{F∖X₀}` along the canonical window exhaustion.
#[derive(Debug, Clone, Copy)]
pub struct UnitNet<'a> {
    spec: &'a IdealSpec,
}

impl<'a> UnitNet<'a> {
    pub fn new(spec: &'a IdealSpec) -> Self {
        Self { spec }
    }

    pub fn window(&self, radius: usize) -> Vec<Point> {
        self.spec.system().window(radius)
    }

    pub fn element(&self, radius: usize) -> Result<Series, IdealError> {
        unit_element(self.spec, &self.window(radius))
    }
}

fn require_member(spec: &IdealSpec, a: &Series, what: &str) -> Result<(), IdealError> {
    if !spec.contains(a)? {
        return Err(IdealError::Precondition(format!("{what} is not in the ideal")));
    }
    Ok(())
}

/// `‖A·U⁰u_F − A‖₁`.
pub fn residual_right(spec: &IdealSpec, a: &Series, window: &[Point]) -> Result<Surd, IdealError> {
    require_member(spec, a, "A")?;
    let u = unit_element(spec, window)?;
    Ok(Series::multiply(spec.system(), a, &u)?.sub(a).l1_norm())
}

/// `‖U⁰u_F·A − A‖₁`.
pub fn residual_left(spec: &IdealSpec, a: &Series, window: &[Point]) -> Result<Surd, IdealError> {
    require_member(spec, a, "A")?;
    let u = unit_element(spec, window)?;
    Ok(Series::multiply(spec.system(), &u, a)?.sub(a).l1_norm())
}

pub fn residual(spec: &IdealSpec, side: Side, a: &Series, window: &[Point]) -> Result<Surd, IdealError> {
    match side {
        Side::Right => residual_right(spec, a, window),
        Side::Left => residual_left(spec, a, window),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExactWindow {
    /// Residual is exactly zero for every window containing these points.
    Window { points: Vec<Point> },
    /// The unit would have to be 1 at `point ∈ X₀`, reached from `source` in
    /// the degree-`degree` coefficient.
    NoFiniteWindow { degree: usize, source: Point, point: Point },
}

/// The points at which `u_F` must equal 1 for the residual of `A` to vanish:
/// the supports of `Eₙ(A)` (right) or their images `φⁿ(supp Eₙ(A))` (left).
pub fn min_exact_window(spec: &IdealSpec, a: &Series, side: Side) -> Result<ExactWindow, IdealError> {
    require_member(spec, a, "A")?;
    let sys = spec.system();
    let mut points = BTreeSet::new();
    for (n, f) in a.terms() {
        for x in f.support() {
            let y = match side {
                Side::Right => x,
                Side::Left => sys.iterate(x, n)?,
            };
            if spec.member_x_n(0, y)? {
                return Ok(ExactWindow::NoFiniteWindow { degree: n, source: x, point: y });
            }
            points.insert(y);
        }
    }
    let mut points: Vec<Point> = points.into_iter().collect();
    sys.sort_canonical(&mut points);
    Ok(ExactWindow::Window { points })
}

fn canonical_min_or(spec: &IdealSpec, set: &CoSet) -> Option<Point> {
    spec.system().canonical_min(set)
}

/// `(n₀, x₀, U^{n₀+1}δ_{x₀})` with `n₀` the first strict drop `X_{n₀+1} ⊊ X_{n₀}`
/// and `x₀` the canonically smallest point of `X_{n₀} ∖ X_{n₀+1}`.
pub fn witness_no_right_au(spec: &IdealSpec) -> Result<Witness, IdealError> {
    witness_no_right_au_with(spec, Mutation::None)
}

pub fn witness_no_right_au_with(spec: &IdealSpec, mutation: Mutation) -> Result<Witness, IdealError> {
    let sys = spec.system();
    let (n0, drop_at): (usize, Box<dyn Fn(usize) -> Result<CoSet, IdealError>>) = match spec.form() {
        SpecForm::Stable { sets } => {
            let Some(n0) = sets.windows(2).position(|p| p[0] != p[1]) else {
                return Err(IdealError::Precondition("all X_n are equal: a right approximate unit exists".into()));
            };
            (n0, Box::new(|n| Ok(sys.difference(spec.x_n(n).expect("stable"), spec.x_n(n + 1).expect("stable")))))
        }
        // X_n ∖ X_{n+1} = φ⁻ⁿ(W) given the (S, W) invariants.
        SpecForm::Sw { w, .. } => {
            if w.is_empty() {
                return Err(IdealError::Precondition("W is empty: a right approximate unit exists".into()));
            }
            let w = CoSet::finite(w.iter().copied());
            (0, Box::new(move |n| Ok(sys.preimage_set_iter(&w, n)?)))
        }
    };
    let x0 = canonical_min_or(spec, &drop_at(n0)?).expect("strict drop has a point");
    if mutation == Mutation::NonMinimalN0 {
        let x1 = canonical_min_or(spec, &drop_at(n0 + 1)?).unwrap_or(x0);
        return Ok(Witness::new(Side::Right, n0 + 1, x1, false));
    }
    Ok(Witness::new(Side::Right, n0, x0, false))
}

/// Points `x ∉ X_n` with `φⁿ(x) ∈ X₀`.
fn left_obstructions(spec: &IdealSpec, n: usize) -> Result<CoSet, IdealError> {
    let sys = spec.system();
    let x = |k: usize| spec.x_n(k).expect("stable");
    Ok(sys.intersect(&sys.preimage_set_iter(x(0), n)?, &sys.complement(x(n))))
}

/// `(n₀, x₀, U^{n₀}δ_{x₀})` with `n₀ = min{n : φⁿ(X∖Xₙ) ⊄ X∖X₀}` and `x₀` the
/// canonically smallest `x ∉ X_{n₀}` with `φ^{n₀}(x) ∈ X₀`.
///
/// When `X₀ = X` the witness is flagged degenerate: every element of the
/// ideal is obstructed, and `n₀` is the first `n` with `X_n ≠ X`.
pub fn witness_no_left_au(spec: &IdealSpec) -> Result<Witness, IdealError> {
    witness_no_left_au_with(spec, Mutation::None)
}

pub fn witness_no_left_au_with(spec: &IdealSpec, mutation: Mutation) -> Result<Witness, IdealError> {
    let Some(m) = spec.stable_index() else {
        return Err(IdealError::Precondition("(S, W) specs always have a left approximate unit".into()));
    };
    let sys = spec.system();
    let degenerate = mutation != Mutation::DropX0Proper && sys.is_full_set(spec.x_n(0).expect("stable"));
    // If nothing is obstructed up to m + 1, φ maps X ∖ X_m into itself and
    // nothing is obstructed later either.
    for n in 0..=m + 2 {
        let t = left_obstructions(spec, n)?;
        if let Some(x0) = canonical_min_or(spec, &t) {
            if mutation == Mutation::NonMinimalN0 {
                let x1 = canonical_min_or(spec, &left_obstructions(spec, n + 1)?).unwrap_or(x0);
                return Ok(Witness::new(Side::Left, n + 1, x1, degenerate));
            }
            return Ok(Witness::new(Side::Left, n, x0, degenerate));
        }
    }
    Err(IdealError::Precondition("condition (2) holds: a left approximate unit exists".into()))
}

/// The exact values behind an obstruction certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// `|E_{n₀+1}(AV − A)(x₀)|` (right) or `|E_{n₀}(VA − A)(x₀)|` (left).
    pub coefficient: Surd,
    /// `‖AV − A‖₁` or `‖VA − A‖₁`.
    pub residual: Surd,
}

pub fn certify_obstruction(spec: &IdealSpec, w: &Witness, v: &Series) -> Result<Certificate, IdealError> {
    require_member(spec, v, "V")?;
    let sys = spec.system();
    let product = match w.side {
        Side::Right => Series::multiply(sys, &w.a, v)?,
        Side::Left => Series::multiply(sys, v, &w.a)?,
    };
    let diff = product.sub(&w.a);
    Ok(Certificate { coefficient: modulus(&diff.fourier(w.degree()).get(w.x0)), residual: diff.l1_norm() })
}

/// Re-checks every defining property of a witness, then certifies it against
/// each of the given ideal elements.
pub fn verify_witness(spec: &IdealSpec, w: &Witness, samples: &[Series]) -> Result<Vec<Check>, IdealError> {
    let sys = spec.system();
    let mut checks = Vec::new();
    let expected = Series::monomial(w.degree(), Func::delta(w.x0));
    checks.push(Check::new("shape", w.a == expected, format!("A = U^{}δ_{}", w.degree(), w.x0)));
    checks.push(Check::new("bound", w.bound.is_one(), format!("bound = {}", w.bound)));
    checks.push(Check::new("norm", w.a.l1_norm() == Surd::one(), format!("‖A‖₁ = {}", w.a.l1_norm())));
    checks.push(Check::new("in-ideal", spec.contains(&w.a)?, "E_n(A) vanishes on X_n"));
    match (w.side, spec.form()) {
        (Side::Right, form) => {
            let at = spec.member_x_n(w.n0, w.x0)? && !spec.member_x_n(w.n0 + 1, w.x0)?;
            checks.push(Check::new("x0-level", at, format!("x0 ∈ X_{} \\ X_{}", w.n0, w.n0 + 1)));
            let (minimal, first) = match form {
                SpecForm::Stable { sets } => {
                    let first = sets.windows(2).position(|p| p[0] != p[1]);
                    let min = first.and_then(|n| canonical_min_or(spec, &sys.difference(&sets[n], &sets[n + 1])));
                    (first == Some(w.n0), min)
                }
                SpecForm::Sw { w: seed, .. } => {
                    (w.n0 == 0 && !seed.is_empty(), canonical_min_or(spec, &CoSet::finite(seed.iter().copied())))
                }
            };
            checks.push(Check::new("minimal-n0", minimal, "n0 is the first strict drop"));
            checks.push(Check::new("canonical-x0", first == Some(w.x0), format!("smallest candidate {first:?}")));
            checks.push(Check::new("degenerate", !w.degenerate, "right witnesses are never degenerate"));
        }
        (Side::Left, SpecForm::Stable { .. }) => {
            let at = !spec.member_x_n(w.n0, w.x0)? && spec.member_x_n(0, sys.iterate(w.x0, w.n0)?)?;
            checks.push(Check::new("x0-level", at, format!("x0 ∉ X_{} and φ^{}(x0) ∈ X_0", w.n0, w.n0)));
            let mut minimal = true;
            for n in 0..w.n0 {
                minimal &= left_obstructions(spec, n)?.is_empty();
            }
            checks.push(Check::new("minimal-n0", minimal, "no obstruction at smaller n"));
            let first = canonical_min_or(spec, &left_obstructions(spec, w.n0)?);
            checks.push(Check::new("canonical-x0", first == Some(w.x0), format!("smallest candidate {first:?}")));
            let full = sys.is_full_set(spec.x_n(0).expect("stable"));
            checks.push(Check::new("degenerate", w.degenerate == full, format!("X_0 = X: {full}")));
        }
        (Side::Left, SpecForm::Sw { .. }) => {
            checks.push(Check::new("x0-level", false, "(S, W) specs have no left obstruction"));
        }
    }
    for (i, v) in samples.iter().enumerate() {
        let cert = certify_obstruction(spec, w, v)?;
        let ok = cert.coefficient == Surd::one() && cert.residual >= Surd::one();
        checks.push(Check::new(
            format!("certify[{i}]"),
            ok,
            format!("coefficient {} residual {}", cert.coefficient, cert.residual),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests;
