//! Exhaustive and seeded cross-validation of the decision procedures.
//!
//! Finite systems are enumerated up to conjugacy, stable specs exhaustively;
//! infinite systems are covered by a fixed template suite. Every decision is
//! compared against a brute-force scan over monomials `U^p δ_x`, against the
//! residuals of the constructed units on random ideal elements, and against the
//! other characterizations.

mod crosscheck;
mod suite;

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Func, Scalar, Series};
use crate::dynamics::{CoSet, DynamicalSystem, Point};
use crate::ideals::{IdealError, IdealSpec};

pub use crosscheck::{
    all_cases, brute_force, crosscheck, crosscheck_cases, obstruction_sweep, BruteForce, CaseReport, CrosscheckReport,
    ObstructionSweep, Summary, WitnessRecord, REPORT_SCHEMA,
};
pub use suite::{template_suite, Case, CaseSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumBudget {
    /// Finite systems on up to this many points.
    pub max_carrier: usize,
    /// Longest stable sequence `X_0, …, X_m` (so `m < max_stable_len`).
    pub max_stable_len: usize,
    /// Radius of the point window on infinite carriers, and of the largest
    /// unit window tried against witnesses.
    pub template_window: usize,
    pub seed: u64,
    /// Random ideal elements per behavioral check.
    pub sample_count: usize,
    /// Depth of the bounded condition-(2) check (raised to `2m + 4` for
    /// longer sequences).
    pub cond2_horizon: usize,
    /// Ideal elements `V` each witness is certified against in the
    /// obstruction sweep, unit elements included.
    pub obstruction_samples: usize,
}

impl Default for EnumBudget {
    fn default() -> Self {
        Self {
            max_carrier: 4,
            max_stable_len: 3,
            template_window: 8,
            seed: 0,
            sample_count: 25,
            cond2_horizon: 10,
            obstruction_samples: 50,
        }
    }
}

/// Partitions of `n` (parts in decreasing order), sorted by largest part and
/// then by the ascending parts lexicographically.
pub fn cycle_types(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort_by_key(|p| {
        let mut asc = p.clone();
        asc.reverse();
        (p[0], asc)
    });
    out
}

/// The permutation of `0..n` with the given cycle type, cycles laid out on
/// consecutive labels.
pub fn permutation_of_type(parts: &[usize]) -> Arc<DynamicalSystem> {
    let mut images = Vec::new();
    let mut start = 0;
    for &p in parts {
        images.extend((0..p).map(|i| start + (i + 1) % p));
        start += p;
    }
    Arc::new(DynamicalSystem::permutation(&images).expect("permutation"))
}

#[derive(Debug, Clone)]
pub struct FiniteSystem {
    pub cycle_type: Vec<usize>,
    pub system: Arc<DynamicalSystem>,
}

/// One permutation per cycle type on `1..=max_carrier` points. Finite
/// surjections are exactly the permutations.
pub fn enum_finite_systems(b: &EnumBudget) -> Vec<FiniteSystem> {
    (1..=b.max_carrier)
        .flat_map(cycle_types)
        .map(|parts| FiniteSystem { system: permutation_of_type(&parts), cycle_type: parts })
        .collect()
}

/// Every stable spec `X_0, …, X_{l−1}` (`l ≤ max_stable_len`) on a finite
/// system that satisfies `(*)`, is written in shortest form (`X_{l−2} ≠ X_{l−1}`)
/// and is not the zero ideal.
pub fn enum_stable_specs(sys: &Arc<DynamicalSystem>, b: &EnumBudget) -> Vec<IdealSpec> {
    let carrier = sys.carrier().expect("finite system").to_vec();
    let n = carrier.len();
    assert!(n < 16, "carrier too large to enumerate");
    let full: u32 = (1 << n) - 1;
    let image: Vec<usize> = carrier
        .iter()
        .map(|&x| {
            let y = sys.apply(x).expect("carrier point");
            carrier.iter().position(|&z| z == y).expect("closed map")
        })
        .collect();
    let phi = |mask: u32| (0..n).filter(|i| mask >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << image[i]);
    let to_set = |mask: u32| CoSet::finite((0..n).filter(|i| mask >> i & 1 == 1).map(|i| carrier[i]));

    let mut out = Vec::new();
    for len in 1..=b.max_stable_len {
        let total = (full as u64 + 1).pow(len as u32);
        for code in 0..total {
            // First set is the most significant digit.
            let mut seq = vec![0u32; len];
            let mut c = code;
            for slot in seq.iter_mut().rev() {
                *slot = (c % (full as u64 + 1)) as u32;
                c /= full as u64 + 1;
            }
            let last = seq[len - 1];
            if phi(last) & !last != 0 {
                continue;
            }
            if (0..len - 1).any(|i| (seq[i + 1] | phi(seq[i + 1])) & !seq[i] != 0) {
                continue;
            }
            if len >= 2 && seq[len - 2] == last {
                continue;
            }
            if len == 1 && last == full {
                continue;
            }
            let sets = seq.iter().map(|&m| to_set(m)).collect();
            out.push(IdealSpec::stable(sys.clone(), sets).expect("nonempty"));
        }
    }
    out
}

/// The points random elements are supported on: the carrier of a finite
/// system, `[−r, r]` otherwise.
pub fn sample_points(sys: &DynamicalSystem, b: &EnumBudget) -> Vec<Point> {
    match sys.carrier() {
        Some(c) => c.to_vec(),
        None => sys.window(b.template_window),
    }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    fn q(rng: &mut ChaCha8Rng) -> BigRational {
        let num = rng.random_range(-3i64..=3);
        let den = rng.random_range(1i64..=3);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    let re = q(rng);
    let im = if rng.random_bool(0.5) { q(rng) } else { BigRational::from_integer(0.into()) };
    Complex::new(re, im)
}

/// A random element of degree at most `2·max_stable_len`, supported on
/// [`sample_points`], with small complex-rational values. With a spec, the
/// coefficients are masked so the result lies in the ideal.
pub fn random_series_with(
    sys: &DynamicalSystem,
    spec: Option<&IdealSpec>,
    b: &EnumBudget,
    rng: &mut ChaCha8Rng,
) -> Result<Series, IdealError> {
    let points = sample_points(sys, b);
    let max_degree = 2 * b.max_stable_len;
    let terms = rng.random_range(1..=4usize);
    let mut coeffs = Vec::new();
    for _ in 0..terms {
        let n = rng.random_range(0..=max_degree);
        let k = rng.random_range(1..=3usize);
        let mut values = Vec::new();
        for _ in 0..k {
            let x = points[rng.random_range(0..points.len())];
            if let Some(spec) = spec {
                if spec.member_x_n(n, x)? {
                    continue;
                }
            }
            values.push((x, random_scalar(rng)));
        }
        coeffs.push((n, Func::from_values(values)));
    }
    Ok(Series::from_coeffs(coeffs))
}

/// [`random_series_with`] seeded from the budget alone.
pub fn random_series(sys: &DynamicalSystem, spec: Option<&IdealSpec>, b: &EnumBudget) -> Result<Series, IdealError> {
    random_series_with(sys, spec, b, &mut ChaCha8Rng::seed_from_u64(b.seed))
}

/// An RNG for the `index`th case of a run, independent of evaluation order.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index))
}
