//! Compressions of the regular representation `π` on `ℓ²(X) ⊗ ℓ²(ℤ₊)`.
//!
//! `π(Uⁿf)(δ_x ⊗ e_k) = f(φᵏ(x)) δ_x ⊗ e_{k+n}`, so `π(A)` never mixes points:
//! it is block diagonal with one lower-triangular Toeplitz-like block per `x`.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};

use super::{Scalar, Series, Surd};
use crate::dynamics::{DynamicalSystem, DynamicsError, Point};

/// Compression onto `span{δ_x ⊗ e_k : x ∈ window, k ≤ levels}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationParams {
    window: Vec<Point>,
    levels: usize,
}

impl TruncationParams {
    /// Duplicate window points are dropped (first occurrence kept).
    pub fn new(window: impl IntoIterator<Item = Point>, levels: usize) -> Self {
        let mut seen = BTreeSet::new();
        let window = window.into_iter().filter(|x| seen.insert(*x)).collect();
        Self { window, levels }
    }

    pub fn window(&self) -> &[Point] {
        &self.window
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// A truncation that captures every Fourier coefficient of `a` at level 0:
    /// the window holds the support of `a` plus `extra`, and `levels ≥ deg a`.
    pub fn adequate_for(a: &Series, extra: impl IntoIterator<Item = Point>, extra_levels: usize) -> Self {
        let mut pts: Vec<Point> = a.support_points().into_iter().collect();
        pts.extend(extra);
        Self::new(pts, a.degree().unwrap_or(0) + extra_levels)
    }
}

/// Sparse matrix of a compression of `π(A)`, rows and columns indexed by `(x, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    index: Vec<(Point, usize)>,
    levels: usize,
    /// `(row, col) → value`, zeros omitted.
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl RepMatrix {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// The `(x, k)` label of a row or column.
    pub fn label(&self, i: usize) -> (Point, usize) {
        self.index[i]
    }

    pub fn position(&self, x: Point, k: usize) -> Option<usize> {
        if k > self.levels {
            return None;
        }
        self.index.iter().position(|&(y, j)| y == x && j == k)
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = ((usize, usize), &Scalar)> {
        self.entries.iter().map(|(&rc, v)| (rc, v))
    }

    fn block_size(&self) -> usize {
        self.levels + 1
    }

    /// Largest singular value, computed blockwise in floating point.
    pub fn largest_singular_value(&self) -> f64 {
        let b = self.block_size();
        let mut blocks: BTreeMap<usize, DMatrix<Complex<f64>>> = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            let blk = r / b;
            debug_assert_eq!(blk, c / b, "compression mixes points");
            let m = blocks.entry(blk).or_insert_with(|| DMatrix::zeros(b, b));
            m[(r % b, c % b)] = Complex::new(v.re.to_f64().unwrap_or(f64::NAN), v.im.to_f64().unwrap_or(f64::NAN));
        }
        blocks
            .into_values()
            .map(|m| m.singular_values().iter().copied().fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// The compression `P π(A) P` for the given truncation.
pub fn rep_matrix(sys: &DynamicalSystem, a: &Series, p: &TruncationParams) -> Result<RepMatrix, DynamicsError> {
    let levels = p.levels;
    let b = levels + 1;
    let index: Vec<(Point, usize)> = p.window.iter().flat_map(|&x| (0..b).map(move |k| (x, k))).collect();
    let mut entries = BTreeMap::new();
    for (i, &x) in p.window.iter().enumerate() {
        let mut orbit_point = x;
        for k in 0..b {
            if k > 0 {
                orbit_point = sys.apply(orbit_point)?;
            }
            for (n, f) in a.terms() {
                if k + n > levels {
                    break;
                }
                if let Some(v) = f.value(orbit_point) {
                    entries.insert((i * b + k + n, i * b + k), v.clone());
                }
            }
        }
    }
    Ok(RepMatrix { index, levels, entries })
}

/// Norm of a compression of `π(A)`: a lower bound for the operator norm.
pub fn opnorm_lower(sys: &DynamicalSystem, a: &Series, p: &TruncationParams) -> Result<f64, DynamicsError> {
    Ok(rep_matrix(sys, a, p)?.largest_singular_value())
}

/// Two-sided estimate of the operator norm of `π(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormBracket {
    /// Best compression norm along the schedule.
    pub lower: f64,
    /// `‖A‖₁`; `π` is contractive for the ℓ¹ norm.
    pub upper: Surd,
    /// Compression norm at each schedule step.
    pub steps: Vec<f64>,
}

pub fn opnorm_bracket(sys: &DynamicalSystem, a: &Series, schedule: &[TruncationParams]) -> Result<NormBracket, DynamicsError> {
    let steps = schedule.iter().map(|p| opnorm_lower(sys, a, p)).collect::<Result<Vec<_>, _>>()?;
    Ok(NormBracket { lower: steps.iter().copied().fold(0.0, f64::max), upper: a.l1_norm(), steps })
}
