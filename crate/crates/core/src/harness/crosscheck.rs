use rayon::prelude::*;
use serde::Serialize;

use super::{case_rng, enum_finite_systems, enum_stable_specs, random_series_with, sample_points, template_suite, Case, CaseSpec, EnumBudget};
use crate::algebra::{Series, Surd};
use crate::dynamics::{Check, Point};
use crate::ideals::{build_from_sw, Decision, IdealError, IdealSpec, Mutation, Rule, SpecForm, Verdict, DEFAULT_K_BUDGET};
use crate::units::{certify_obstruction, min_exact_window, residual, unit_element, verify_witness, ExactWindow, Side, Witness};

pub const REPORT_SCHEMA: &str = "semicrossed.crosscheck/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub side: Side,
    pub n0: usize,
    pub x0: Point,
    pub a: String,
    pub degenerate: bool,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        Self { side: w.side, n0: w.n0, x0: w.x0, a: w.a.to_string(), degenerate: w.degenerate }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub system: String,
    pub spec: String,
    pub checks: Vec<Check>,
    pub witnesses: Vec<WitnessRecord>,
}

impl CaseReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub checks: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub schema: &'static str,
    pub mutation: Mutation,
    pub budget: EnumBudget,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.summary.disagreements == 0
    }
}

/// Minimal monomial obstructions found by scanning `U^p δ_x ∈ I`.
///
/// `U^p δ_x` lies in `I` iff `x ∉ X_p`. For `V ∈ I` the degree-`p` coefficient
/// of `U^pδ_x·V − U^pδ_x` at `x` is `E₀(V)(x) − 1`, and that of
/// `V·U^pδ_x − U^pδ_x` is `E₀(V)(φ^p(x)) − 1`; `E₀(V)` vanishes on `X₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    /// `(p − 1, x)` for the least `p ≥ 1` with some `x ∈ X₀ ∖ X_p`.
    pub right: Option<(usize, Point)>,
    /// `(p, x)` for the least `p` with some `x ∉ X_p`, `φ^p(x) ∈ X₀`.
    pub left: Option<(usize, Point)>,
    /// Every scanned point lies in `X₀`.
    pub x0_full: bool,
}

/// Scans degrees `0..=max_degree` over `points`, which must be in canonical
/// order so the first hit is the canonical minimum.
pub fn brute_force(spec: &IdealSpec, points: &[Point], max_degree: usize) -> Result<BruteForce, IdealError> {
    let sys = spec.system();
    let mut right = None;
    let mut left = None;
    let mut x0_full = true;
    for &x in points {
        x0_full &= spec.member_x_n(0, x)?;
    }
    for p in 0..=max_degree {
        for &x in points {
            if spec.member_x_n(p, x)? {
                continue;
            }
            if right.is_none() && p >= 1 && spec.member_x_n(0, x)? {
                right = Some((p - 1, x));
            }
            if left.is_none() && spec.member_x_n(0, sys.iterate(x, p)?)? {
                left = Some((p, x));
            }
        }
        if right.is_some() && left.is_some() {
            break;
        }
    }
    Ok(BruteForce { right, left, x0_full })
}

fn canonical_points(spec: &IdealSpec, b: &EnumBudget) -> Vec<Point> {
    let mut pts = sample_points(spec.system(), b);
    spec.system().sort_canonical(&mut pts);
    pts
}

fn unit_samples(spec: &IdealSpec, b: &EnumBudget) -> Result<Vec<Series>, IdealError> {
    (0..=b.template_window).map(|r| unit_element(spec, &spec.system().window(r))).collect()
}

struct Ctx<'a> {
    spec: &'a IdealSpec,
    samples: Vec<Series>,
    vs: Vec<Series>,
    checks: Vec<Check>,
    witnesses: Vec<WitnessRecord>,
}

impl Ctx<'_> {
    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    /// Verdict against brute force, then residuals (yes) or witness (no).
    fn side(&mut self, prefix: &str, side: Side, d: &Decision, brute: Option<(usize, Point)>) -> Result<(), IdealError> {
        let found = d.witness().map(|w| (w.n0, w.x0));
        let agree = match d.verdict {
            Verdict::Yes => brute.is_none(),
            Verdict::No => brute.is_some() && found == brute,
        };
        self.check(
            &format!("{prefix}.vs-brute-force"),
            agree,
            format!("decision {:?} {found:?}, brute force {brute:?}", d.verdict),
        );
        match d.verdict {
            Verdict::Yes => {
                let mut bad = None;
                for (i, a) in self.samples.iter().enumerate() {
                    let r = match min_exact_window(self.spec, a, side)? {
                        ExactWindow::Window { points } => residual(self.spec, side, a, &points)?,
                        ExactWindow::NoFiniteWindow { point, .. } => {
                            bad = Some(format!("sample {i} needs the unit at {point} ∈ X_0"));
                            break;
                        }
                    };
                    if r != Surd::zero() {
                        bad = Some(format!("sample {i} has residual {r}"));
                        break;
                    }
                }
                let n = self.samples.len();
                self.check(
                    &format!("{prefix}.residuals"),
                    bad.is_none(),
                    bad.unwrap_or_else(|| format!("{n} samples exact at their minimal windows")),
                );
            }
            Verdict::No => {
                let w = d.witness().expect("no-verdict carries a witness");
                let checks = verify_witness(self.spec, w, &self.vs)?;
                let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                self.check(
                    &format!("{prefix}.witness"),
                    failed.is_empty(),
                    if failed.is_empty() {
                        format!("certified at 1 against {} elements", self.vs.len())
                    } else {
                        format!("failed: {}", failed.join(", "))
                    },
                );
                self.witnesses.push(w.into());
            }
        }
        Ok(())
    }
}

fn run_case(spec: &IdealSpec, index: u64, b: &EnumBudget, mutation: Mutation, ctx_out: &mut (Vec<Check>, Vec<WitnessRecord>)) -> Result<(), IdealError> {
    let sys = spec.system();
    let star = spec.validate_star()?;
    let valid = star.passed();
    ctx_out.0.push(Check::new(
        "valid",
        valid,
        star.first_failure().map_or("spec invariants hold".to_string(), |c| format!("{}: {}", c.name, c.detail)),
    ));
    if !valid {
        return Ok(());
    }
    if spec.is_zero_ideal() {
        ctx_out.0.push(Check::new("nonzero", false, "zero ideal in the corpus"));
        return Ok(());
    }
    let mut rng = case_rng(b.seed, index);
    let samples = (0..b.sample_count).map(|_| random_series_with(sys, Some(spec), b, &mut rng)).collect::<Result<Vec<_>, _>>()?;
    let mut vs = unit_samples(spec, b)?;
    vs.extend(samples.iter().cloned());
    let mut ctx = Ctx { spec, samples, vs, checks: Vec::new(), witnesses: Vec::new() };

    let points = canonical_points(spec, b);
    let m = spec.horizon();
    let depth = b.cond2_horizon.max(2 * m + 4);
    let brute = brute_force(spec, &points, depth)?;

    let right = spec.decide_right_au_with(mutation)?;
    ctx.side("rau", Side::Right, &right, brute.right)?;

    let left = spec.decide_left_au_with(mutation)?;
    ctx.side("lau", Side::Left, &left, brute.left)?;
    if left.verdict == Verdict::No {
        let cites = left.rule == Rule::LauX0Proper;
        ctx.check(
            "lau.clause",
            cites == brute.x0_full,
            format!("rule {} with X_0 = X: {}", left.rule.name(), brute.x0_full),
        );
    }

    if let SpecForm::Stable { sets } = spec.form() {
        let cond2 = spec.check_lau_cond2(depth)?;
        ctx.check(
            "lau.cond2-vs-cond3",
            cond2.passed() == (left.verdict == Verdict::Yes),
            format!("condition (2) to n = {depth}: {}, condition (3): {:?}", cond2.passed(), left.verdict),
        );
        if left.verdict == Verdict::Yes {
            let constant = sets.windows(2).all(|p| p[0] == p[1]);
            let x0 = &sets[0];
            let outside = sys.complement(x0);
            let rigid = constant
                && sys.set_eq(&sys.image_set(x0)?, x0)
                && sys.set_eq(&sys.image_set(&outside)?, &outside);
            ctx.check("lau2.rigidity", rigid, "constant, with X_0 and its complement φ-invariant");
        }
    }

    if sys.is_finite() && left.verdict == Verdict::Yes {
        ctx.check("finite.left-implies-right", right.verdict == Verdict::Yes, format!("right: {:?}", right.verdict));
    }

    let au = spec.decide_au_with(mutation)?;
    let both = right.verdict == Verdict::Yes && left.verdict == Verdict::Yes;
    ctx.check("au.conjunction", (au.verdict == Verdict::Yes) == both, format!("two-sided {:?}", au.verdict));
    let direct_ok = au.checks.iter().all(|c| c.pass);
    ctx.check(
        "au.direct",
        direct_ok,
        au.checks.first().map_or(String::new(), |c| c.detail.clone()),
    );

    match spec.decide_m_ideal_with(mutation) {
        Ok(d) => ctx.check("m-ideal", sys.is_finite() && d.verdict == au.verdict, format!("{:?}", d.verdict)),
        Err(IdealError::NotCompact) => ctx.check("m-ideal", !sys.is_finite(), "carrier not compact"),
        Err(e) => return Err(e),
    }

    if sys.is_homeomorphism() && left.verdict == Verdict::Yes {
        let (s, w) = spec.decompose_sw()?;
        let rebuilt = build_from_sw(spec.system_arc().clone(), s, w.iter().copied(), DEFAULT_K_BUDGET)?;
        let mut mismatch = None;
        'scan: for n in 0..=2 * m + 4 {
            for &x in &points {
                if spec.member_x_n(n, x)? != rebuilt.member_x_n(n, x)? {
                    mismatch = Some((n, x));
                    break 'scan;
                }
            }
        }
        ctx.check(
            "sw.round-trip",
            mismatch.is_none(),
            mismatch.map_or(format!("rebuilt as {rebuilt}"), |(n, x)| format!("membership of {x} in X_{n} differs")),
        );
    }

    ctx_out.0.append(&mut ctx.checks);
    ctx_out.1.append(&mut ctx.witnesses);
    Ok(())
}

fn check_case(case: &Case, index: u64, b: &EnumBudget, mutation: Mutation) -> CaseReport {
    let spec = case.spec();
    let mut out = (Vec::new(), Vec::new());
    match &case.spec {
        CaseSpec::ExpectInvalid { reason, .. } => match spec.validate_star() {
            Ok(r) => {
                let hit = r.first_failure().filter(|c| c.detail.contains(reason.as_str()));
                out.0.push(Check::new(
                    "rejected",
                    hit.is_some(),
                    hit.map_or("spec was not rejected as expected".to_string(), |c| format!("{}: {}", c.name, c.detail)),
                ));
            }
            Err(e) => out.0.push(Check::new("rejected", false, e.to_string())),
        },
        CaseSpec::Valid(_) => {
            if let Err(e) = run_case(spec, index, b, mutation, &mut out) {
                out.0.push(Check::new("error", false, e.to_string()));
            }
        }
    }
    CaseReport { system: case.system.label(), spec: spec.to_string(), checks: out.0, witnesses: out.1 }
}

/// The finite corpus of the budget followed by the template suite.
pub fn all_cases(b: &EnumBudget) -> Vec<Case> {
    let mut cases: Vec<Case> = enum_finite_systems(b)
        .iter()
        .flat_map(|fs| enum_stable_specs(&fs.system, b))
        .map(Case::valid)
        .collect();
    cases.extend(template_suite());
    cases
}

/// Runs every check on the given cases; report order follows case order.
pub fn crosscheck_cases(cases: &[Case], b: &EnumBudget, mutation: Mutation) -> CrosscheckReport {
    let reports: Vec<CaseReport> =
        cases.par_iter().enumerate().map(|(i, c)| check_case(c, i as u64, b, mutation)).collect();
    let summary = Summary {
        cases: reports.len(),
        checks: reports.iter().map(|r| r.checks.len()).sum(),
        disagreements: reports.iter().map(|r| r.disagreements().count()).sum(),
    };
    CrosscheckReport { schema: REPORT_SCHEMA, mutation, budget: b.clone(), cases: reports, summary }
}

/// Enumerated finite cases plus the template suite.
pub fn crosscheck(b: &EnumBudget, mutation: Mutation) -> CrosscheckReport {
    crosscheck_cases(&all_cases(b), b, mutation)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionSweep {
    pub witnesses: usize,
    pub certifications: usize,
    pub failures: Vec<String>,
}

/// Certifies every witness produced on the cases against
/// `obstruction_samples` ideal elements, the unit elements up to radius
/// `template_window` among them.
pub fn obstruction_sweep(cases: &[Case], b: &EnumBudget) -> ObstructionSweep {
    let per_case: Vec<Result<(usize, usize, Vec<String>), String>> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| match &c.spec {
            CaseSpec::Valid(spec) if !spec.is_zero_ideal() => Some((i, spec)),
            _ => None,
        })
        .map(|(i, spec)| {
            let run = || -> Result<(usize, usize, Vec<String>), IdealError> {
                let mut witnesses = Vec::new();
                if let Some(w) = spec.decide_right_au()?.witness() {
                    witnesses.push(w.clone());
                }
                if let Some(w) = spec.decide_left_au()?.witness() {
                    witnesses.push(w.clone());
                }
                if witnesses.is_empty() {
                    return Ok((0, 0, Vec::new()));
                }
                let mut vs = unit_samples(spec, b)?;
                let mut rng = case_rng(b.seed ^ 0x5EED, i as u64);
                while vs.len() < b.obstruction_samples {
                    vs.push(random_series_with(spec.system(), Some(spec), b, &mut rng)?);
                }
                let mut certs = 0;
                let mut failures = Vec::new();
                for w in &witnesses {
                    for v in &vs {
                        let c = certify_obstruction(spec, w, v)?;
                        certs += 1;
                        if c.coefficient != Surd::one() || c.residual < Surd::one() {
                            failures.push(format!(
                                "{} {}: {} witness against {v}: coefficient {}, residual {}",
                                spec.system().label(),
                                spec,
                                w.side,
                                c.coefficient,
                                c.residual
                            ));
                        }
                    }
                }
                Ok((witnesses.len(), certs, failures))
            };
            run().map_err(|e| format!("{} {spec}: {e}", spec.system().label()))
        })
        .collect();
    let mut sweep = ObstructionSweep { witnesses: 0, certifications: 0, failures: Vec::new() };
    for r in per_case {
        match r {
            Ok((w, c, f)) => {
                sweep.witnesses += w;
                sweep.certifications += c;
                sweep.failures.extend(f);
            }
            Err(e) => sweep.failures.push(e),
        }
    }
    sweep
}
