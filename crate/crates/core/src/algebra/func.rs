use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Surd;
use crate::dynamics::{DynamicalSystem, DynamicsError, Point};

/// Exact complex rational.
pub type Scalar = Complex<BigRational>;

pub fn scalar(re: i64, im: i64) -> Scalar {
    Complex::new(BigRational::from_integer(BigInt::from(re)), BigRational::from_integer(BigInt::from(im)))
}

pub fn real(q: BigRational) -> Scalar {
    Complex::new(q, BigRational::zero())
}

/// `|z|` exactly.
pub fn modulus(z: &Scalar) -> Surd {
    Surd::sqrt(&z.norm_sqr())
}

/// A finitely supported function `X → ℂ`, stored without explicit zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Func {
    values: BTreeMap<Point, Scalar>,
}

impl Func {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The indicator `δ_x`.
    pub fn delta(x: Point) -> Self {
        Self::from_values([(x, Scalar::one())])
    }

    pub fn indicator(points: impl IntoIterator<Item = Point>) -> Self {
        Self::from_values(points.into_iter().map(|x| (x, Scalar::one())))
    }

    /// Later entries for the same point are added to earlier ones.
    pub fn from_values(values: impl IntoIterator<Item = (Point, Scalar)>) -> Self {
        let mut f = Self::zero();
        for (x, v) in values {
            f.add_at(x, v);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: Point) -> Scalar {
        self.values.get(&x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn value(&self, x: Point) -> Option<&Scalar> {
        self.values.get(&x)
    }

    pub fn add_at(&mut self, x: Point, v: Scalar) {
        if v.is_zero() {
            return;
        }
        let slot = self.values.entry(x).or_insert_with(Scalar::zero);
        *slot += v;
        if slot.is_zero() {
            self.values.remove(&x);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, &Scalar)> {
        self.values.iter().map(|(&x, v)| (x, v))
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.values.keys().copied()
    }

    pub fn support_set(&self) -> BTreeSet<Point> {
        self.values.keys().copied().collect()
    }

    /// `max |f(x)|²`.
    pub fn sup_norm_sqr(&self) -> BigRational {
        self.values.values().map(|v| v.norm_sqr()).max().unwrap_or_else(BigRational::zero)
    }

    pub fn sup_norm(&self) -> Surd {
        Surd::sqrt(&self.sup_norm_sqr())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { values: self.values.iter().map(|(&x, v)| (x, v * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, v) in other.iter() {
            out.add_at(x, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        let (small, large) = if self.values.len() <= other.values.len() { (self, other) } else { (other, self) };
        Self::from_values(small.iter().filter_map(|(x, v)| large.value(x).map(|w| (x, v * w))))
    }

    /// Keeps only the values at points satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(Point) -> bool) -> Self {
        Self { values: self.values.iter().filter(|(&x, _)| keep(x)).map(|(&x, v)| (x, v.clone())).collect() }
    }

    /// `α^m(f) = f ∘ φ^m`, supported on `φ^{-m}(supp f)`.
    pub fn pullback(&self, sys: &DynamicalSystem, m: usize) -> Result<Self, DynamicsError> {
        let mut current: Vec<(Point, Scalar)> = self.values.iter().map(|(&x, v)| (x, v.clone())).collect();
        for _ in 0..m {
            let mut next = Vec::new();
            for (y, v) in current {
                for x in sys.fiber(y)? {
                    next.push((x, v.clone()));
                }
            }
            current = next;
        }
        Ok(Self::from_values(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pullback_examples() {
        let shift = DynamicalSystem::shift();
        let f = Func::from_values([(0, scalar(2, 1)), (4, scalar(-1, 0))]);
        assert_eq!(f.pullback(&shift, 0).unwrap(), f);
        assert_eq!(Func::delta(0).pullback(&shift, 1).unwrap(), Func::delta(-1));
        let dbl = DynamicalSystem::doubling();
        assert_eq!(Func::delta(3).pullback(&dbl, 1).unwrap(), Func::indicator([6, 7]));
    }

    #[test]
    fn no_stored_zeros() {
        let mut f = Func::delta(2);
        f.add_at(2, scalar(-1, 0));
        assert!(f.is_zero());
        assert_eq!(Func::delta(1).scale(&scalar(0, 0)), Func::zero());
        assert!(Func::delta(1).sub(&Func::delta(1)).is_zero());
    }

    #[test]
    fn sup_norm_uses_modulus() {
        let f = Func::from_values([(0, scalar(3, 4)), (1, scalar(-2, 0))]);
        assert_eq!(f.sup_norm(), Surd::from_integer(5));
        assert_eq!(Func::zero().sup_norm(), Surd::zero());
        assert_eq!(Func::delta(1).add(&Func::delta(1)).mul(&Func::delta(1)).get(1), scalar(2, 0));
    }
}
