//! The seven acceptance criteria, each timed and reported on one line.
//!
//! Run with `cargo test -p semicrossed --test acceptance -- --nocapture` to
//! see the report.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use semicrossed::algebra::{opnorm_lower, Series, Surd, TruncationParams};
use semicrossed::dynamics::{CoSet, DynamicalSystem, Point};
use semicrossed::harness::{
    all_cases, case_rng, crosscheck, enum_finite_systems, obstruction_sweep, random_series_with,
    EnumBudget,
};
use semicrossed::ideals::{IdealSpec, Mutation, Verdict, DEFAULT_K_BUDGET};
use semicrossed::units::{certify_obstruction, min_exact_window, residual_left, unit_element, ExactWindow, Side};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Finite permutations on up to five points, the shift and the doubling map.
fn algebra_systems() -> Vec<Arc<DynamicalSystem>> {
    let b = EnumBudget { max_carrier: 5, ..EnumBudget::default() };
    let mut out: Vec<_> = enum_finite_systems(&b).into_iter().map(|f| f.system).collect();
    out.push(Arc::new(DynamicalSystem::shift()));
    out.push(Arc::new(DynamicalSystem::doubling()));
    out
}

/// Degrees ≤ 6, points in [−8, 8] on ℤ.
fn algebra_budget(seed: u64) -> EnumBudget {
    EnumBudget { max_stable_len: 3, template_window: 8, seed, ..EnumBudget::default() }
}

/// `Σ_{n,m} U^{n+m} (fₙ∘φ^m)·g_m`, pulling `fₙ` back through fibers.
fn naive_product(sys: &DynamicalSystem, a: &Series, b: &Series) -> Series {
    let mut coeffs = Vec::new();
    for (n, f) in a.terms() {
        for (m, g) in b.terms() {
            coeffs.push((n + m, f.pullback(sys, m).unwrap().mul(g)));
        }
    }
    Series::from_coeffs(coeffs)
}

fn criterion_algebra() -> Outcome {
    let systems = algebra_systems();
    let b = algebra_budget(1);
    let mut rng = case_rng(b.seed, 1);
    let mut failures = Vec::new();
    let triples = 1000;
    for t in 0..triples {
        let sys = &*systems[t % systems.len()];
        let mut draw = || random_series_with(sys, None, &b, &mut rng).unwrap();
        let (a, bb, c) = (draw(), draw(), draw());
        let mul = |x: &Series, y: &Series| Series::multiply(sys, x, y).unwrap();
        let ab = mul(&a, &bb);
        if mul(&ab, &c) != mul(&a, &mul(&bb, &c)) {
            failures.push(format!("associativity #{t}"));
        }
        let k = Complex::new(BigRational::new(BigInt::from(-2), BigInt::from(3)), BigRational::from_integer(1.into()));
        let lin = bb.add(&c.scale(&k));
        if mul(&a, &lin) != mul(&a, &bb).add(&mul(&a, &c).scale(&k)) {
            failures.push(format!("right linearity #{t}"));
        }
        if mul(&a.add(&c.scale(&k)), &bb) != ab.add(&mul(&c, &bb).scale(&k)) {
            failures.push(format!("left linearity #{t}"));
        }
        if ab != naive_product(sys, &a, &bb) {
            failures.push(format!("convolution #{t}"));
        }
        if ab.l1_norm() > &a.l1_norm() * &bb.l1_norm() {
            failures.push(format!("submultiplicativity #{t}"));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{triples} triples over {} systems exact", systems.len())
        } else {
            format!("{} failures, first {}", failures.len(), failures[0])
        },
    )
}

fn criterion_cesaro() -> Outcome {
    let systems = algebra_systems();
    let b = algebra_budget(2);
    let mut rng = case_rng(b.seed, 2);
    let mut failures = Vec::new();
    for t in 0..200 {
        let sys = &*systems[t % systems.len()];
        let a = random_series_with(sys, None, &b, &mut rng).unwrap();
        let mut prev: Option<Surd> = None;
        for k in 0..=20usize {
            let mean = a.cesaro(k);
            let by_definition = (0..=k).fold(Series::zero(), |acc, l| acc.add(&a.partial_sum(l)));
            let scale = Complex::new(BigRational::new(1.into(), BigInt::from(k + 1)), BigRational::from_integer(0.into()));
            if by_definition.scale(&scale) != mean {
                failures.push(format!("closed form #{t} k={k}"));
            }
            let err = a.sub(&mean).l1_norm();
            let formula: Surd = a
                .terms()
                .map(|(n, f)| &f.sup_norm() * &BigRational::new(BigInt::from(n.min(k + 1)), BigInt::from(k + 1)))
                .sum();
            if err != formula {
                failures.push(format!("error formula #{t} k={k}"));
            }
            if prev.as_ref().is_some_and(|p| err > *p) {
                failures.push(format!("monotonicity #{t} k={k}"));
            }
            prev = Some(err);
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "200 series, k = 0..20, exact".to_string()
        } else {
            format!("{} failures, first {}", failures.len(), failures[0])
        },
    )
}

/// Supports plus their preimages up to the given depth.
fn iterated_supports(sys: &DynamicalSystem, a: &Series, depth: usize) -> Vec<Point> {
    let mut pts: Vec<Point> = a.support_points().into_iter().collect();
    let mut layer = pts.clone();
    for _ in 0..depth {
        layer = layer.iter().flat_map(|&y| sys.fiber(y).unwrap()).collect();
        pts.extend(&layer);
    }
    pts
}

fn criterion_sandwich() -> Outcome {
    let systems = algebra_systems();
    let b = EnumBudget { max_stable_len: 2, ..algebra_budget(3) };
    let mut rng = case_rng(b.seed, 3);
    let mut failures = Vec::new();
    for t in 0..100 {
        let sys = &*systems[t % systems.len()];
        let a = random_series_with(sys, None, &b, &mut rng).unwrap();
        let deg = a.degree().unwrap_or(0);
        let base = iterated_supports(sys, &a, 1);
        let schedule: Vec<TruncationParams> = (0..4)
            .map(|i| {
                let mut w = base.clone();
                if sys.is_finite() || i > 0 {
                    w.extend(sys.window(2 * i));
                }
                TruncationParams::new(w, deg + i)
            })
            .collect();
        let lows: Vec<f64> = schedule.iter().map(|p| opnorm_lower(sys, &a, p).unwrap()).collect();
        let (sup, l1) = (a.sup_coeff_norm().to_f64(), a.l1_norm().to_f64());
        if lows[0] < sup - 1e-9 || lows.iter().any(|&v| v > l1 + 1e-9) {
            failures.push(format!("sandwich #{t}: {sup} <= {lows:?} <= {l1}"));
        }
        if lows.windows(2).any(|w| w[1] < w[0] - 1e-9) {
            failures.push(format!("refinement #{t}: {lows:?}"));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "100 series, 4-step schedule".to_string()
        } else {
            format!("{} failures, first {}", failures.len(), failures[0])
        },
    )
}

fn criterion_crosscheck() -> Outcome {
    let b = EnumBudget::default();
    let report = crosscheck(&b, Mutation::None);
    let first = report
        .cases
        .iter()
        .find_map(|c| c.disagreements().next().map(|d| format!("{} {}: {} {}", c.system, c.spec, d.name, d.detail)));
    outcome(
        report.passed(),
        format!(
            "{} cases, {} checks, {} disagreements{}",
            report.summary.cases,
            report.summary.checks,
            report.summary.disagreements,
            first.map_or(String::new(), |f| format!("; first: {f}"))
        ),
    )
}

fn criterion_obstructions() -> Outcome {
    let b = EnumBudget::default();
    let sweep = obstruction_sweep(&all_cases(&b), &b);
    outcome(
        sweep.failures.is_empty() && sweep.certifications > 0,
        format!(
            "{} witnesses, {} certifications, {} failures{}",
            sweep.witnesses,
            sweep.certifications,
            sweep.failures.len(),
            sweep.failures.first().map_or(String::new(), |f| format!("; first: {f}"))
        ),
    )
}

fn criterion_one_sided() -> Outcome {
    let shift = Arc::new(DynamicalSystem::shift());
    let spec = IdealSpec::sw_unchecked(shift.clone(), CoSet::empty(), [0], DEFAULT_K_BUDGET);
    let b = EnumBudget::default();
    let mut rng = case_rng(6, 0);
    let left = spec.decide_left_au().unwrap();
    let right = spec.decide_right_au().unwrap();
    let mut exact = 0;
    for _ in 0..25 {
        let a = random_series_with(&shift, Some(&spec), &b, &mut rng).unwrap();
        if let ExactWindow::Window { points } = min_exact_window(&spec, &a, Side::Left).unwrap() {
            if residual_left(&spec, &a, &points).unwrap() == Surd::zero() {
                exact += 1;
            }
        }
    }
    let mut certified = 0;
    let mut tried = 0;
    if let Some(w) = right.witness() {
        let mut vs: Vec<Series> = (0..=8).map(|r| unit_element(&spec, &shift.window(r)).unwrap()).collect();
        while vs.len() < 50 {
            vs.push(random_series_with(&shift, Some(&spec), &b, &mut rng).unwrap());
        }
        for v in &vs {
            tried += 1;
            let c = certify_obstruction(&spec, w, v).unwrap();
            if c.coefficient == Surd::one() && c.residual >= Surd::one() {
                certified += 1;
            }
        }
    }
    let pass = left.verdict == Verdict::Yes && exact == 25 && right.verdict == Verdict::No && certified == tried && tried > 0;
    outcome(
        pass,
        format!(
            "left {:?} ({exact}/25 exact), right {:?} (witness {:?} certified {certified}/{tried})",
            left.verdict,
            right.verdict,
            right.witness().map(|w| (w.n0, w.x0))
        ),
    )
}

fn criterion_mutations() -> Outcome {
    let b = EnumBudget::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for m in [Mutation::Cond3Covering, Mutation::NonMinimalN0, Mutation::DropX0Proper] {
        let r = crosscheck(&b, m);
        pass &= r.summary.disagreements >= 1;
        parts.push(format!("{m}: {}", r.summary.disagreements));
    }
    outcome(pass, format!("disagreements {}", parts.join(", ")))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("1 algebraic-core", Duration::from_secs(30), criterion_algebra),
        ("2 cesaro-formula", Duration::from_secs(5), criterion_cesaro),
        ("3 representation-sandwich", Duration::from_secs(60), criterion_sandwich),
        ("4 decision-crosscheck", Duration::from_secs(300), criterion_crosscheck),
        ("5 obstruction-exactness", Duration::from_secs(60), criterion_obstructions),
        ("6 one-sidedness", Duration::from_secs(10), criterion_one_sided),
        ("7 mutation-sanity", Duration::from_secs(300), criterion_mutations),
    ];
    let mut failed = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= limit;
        println!(
            "criterion {name}: {} in {:.2}s (limit {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
        if !pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
