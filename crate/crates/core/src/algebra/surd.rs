//! Exact sums of square roots of rationals.
//!
//! Moduli of complex-rational values are square roots of rationals, so sup
//! norms and ℓ¹ norms live in the additive group generated by such roots.
//! Terms are kept with pairwise rationally independent radicands (no ratio of
//! two radicands is a rational square), which makes zero-testing exact; signs
//! are then decided by interval refinement.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, Default)]
pub struct Surd {
    /// `(coefficient, radicand)`; radicands are positive integers, coefficients nonzero.
    terms: Vec<(BigRational, BigInt)>,
}

const SMALL_PRIMES: [u32; 25] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Writes `n = s²·d`, pulling out small square factors and perfect squares.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if let Some(r) = exact_sqrt(n) {
        return (r, BigInt::one());
    }
    let mut s = BigInt::one();
    let mut d = n.clone();
    for &p in &SMALL_PRIMES {
        let p2 = BigInt::from(p * p);
        while (&d % &p2).is_zero() {
            d /= &p2;
            s *= p;
        }
    }
    if let Some(r) = exact_sqrt(&d) {
        return (s * r, BigInt::one());
    }
    (s, d)
}

impl Surd {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut s = Self::zero();
        s.push_term(q, BigInt::one());
        s
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `√q` for `q ≥ 0`.
    pub fn sqrt(q: &BigRational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Self::zero();
        }
        // √(p/q) = √(p·q) / q
        let (s, d) = split_square(&(q.numer() * q.denom()));
        let coef = BigRational::new(s, q.denom().clone());
        let mut out = Self::zero();
        out.push_term(coef, d);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(c, d)] if d.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn push_term(&mut self, coef: BigRational, radicand: BigInt) {
        if coef.is_zero() {
            return;
        }
        for (c, d) in self.terms.iter_mut() {
            // √r = √(r/d)·√d whenever r/d is a rational square, i.e. r·d is a square.
            if let Some(root) = exact_sqrt(&(&radicand * &*d)) {
                *c += coef * BigRational::new(root, d.clone());
                self.terms.retain(|(c, _)| !c.is_zero());
                return;
            }
        }
        self.terms.push((coef, radicand));
    }

    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut bits = 32u32;
        loop {
            let scale = BigInt::one() << bits;
            let scale2 = BigInt::one() << (2 * bits);
            let mut lo = BigRational::zero();
            let mut hi = BigRational::zero();
            for (c, d) in &self.terms {
                let r = (d * &scale2).sqrt();
                let low = BigRational::new(r.clone(), scale.clone());
                let high = BigRational::new(r + 1, scale.clone());
                if c.is_positive() {
                    lo += c * &low;
                    hi += c * &high;
                } else {
                    lo += c * &high;
                    hi += c * &low;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .fold(0.0, |acc, (c, d)| acc + c.to_f64().unwrap_or(f64::NAN) * d.to_f64().unwrap_or(f64::NAN).sqrt())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (c, d) in &rhs.terms {
            out.push_term(c.clone(), d.clone());
        }
        out
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        &self + &rhs
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { terms: self.terms.iter().map(|(c, d)| (-c, d.clone())).collect() }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        &self - &rhs
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (c1, d1) in &self.terms {
            for (c2, d2) in &rhs.terms {
                let (s, d) = split_square(&(d1 * d2));
                out.push_term(c1 * c2 * BigRational::from_integer(s), d);
            }
        }
        out
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl Mul<&BigRational> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &BigRational) -> Surd {
        &Surd::from_rational(rhs.clone()) * self
    }
}

impl std::iter::Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        iter.fold(Surd::zero(), |acc, x| &acc + &x)
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Surd {}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        for (i, (c, d)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let a = c.abs();
            if d.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "sqrt({d})")?;
            } else {
                write!(f, "{a}*sqrt({d})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_of_squares_is_rational() {
        assert_eq!(Surd::sqrt(&q(9, 4)).as_rational(), Some(q(3, 2)));
        assert_eq!(Surd::sqrt(&q(0, 1)), Surd::zero());
        assert_eq!(Surd::sqrt(&q(8, 1)).to_string(), "2*sqrt(2)");
    }

    #[test]
    fn dependent_radicands_merge() {
        // √8 − 2√2 = 0, √(1/2) = √2 / 2
        let s = &Surd::sqrt(&q(8, 1)) - &(&Surd::sqrt(&q(2, 1)) * &q(2, 1));
        assert!(s.is_zero());
        let half = Surd::sqrt(&q(1, 2));
        assert_eq!(&half + &half, Surd::sqrt(&q(2, 1)));
    }

    #[test]
    fn close_values_are_ordered() {
        // √2 + √3 vs √10: 3.1462… vs 3.1622…
        let lhs = &Surd::sqrt(&q(2, 1)) + &Surd::sqrt(&q(3, 1));
        let rhs = Surd::sqrt(&q(10, 1));
        assert!(lhs < rhs);
        // √1000001 − 1000 is tiny but positive.
        let tiny = &Surd::sqrt(&q(1_000_001, 1)) - &Surd::from_integer(1000);
        assert_eq!(tiny.signum(), Ordering::Greater);
    }

    #[test]
    fn products_of_roots() {
        let r2 = Surd::sqrt(&q(2, 1));
        let r3 = Surd::sqrt(&q(3, 1));
        assert_eq!(&r2 * &r2, Surd::from_integer(2));
        assert_eq!(&r2 * &r3, Surd::sqrt(&q(6, 1)));
        assert_eq!(Surd::sqrt(&q(1000, 1)).to_string(), "10*sqrt(10)");
    }

    proptest! {
        #[test]
        fn order_agrees_with_floats_when_well_separated(
            a in proptest::collection::vec((-5i64..5, 1i64..30), 1..5),
            b in proptest::collection::vec((-5i64..5, 1i64..30), 1..5),
        ) {
            let build = |v: &[(i64, i64)]| v.iter().map(|&(c, r)| &Surd::sqrt(&q(r, 1)) * &q(c, 1)).sum::<Surd>();
            let (x, y) = (build(&a), build(&b));
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
            }
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!(&x * &y, &y * &x);
        }
    }
}
