use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Func, Scalar, Surd};
use crate::dynamics::{DynamicalSystem, DynamicsError, Point};

/// A finitely supported element `A = Σ Uⁿ fₙ` of `ℓ¹(ℤ₊, C₀(X))`.
///
/// No zero coefficients are stored, so structural equality is equality of
/// elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Series {
    coeffs: BTreeMap<usize, Func>,
}

impl Series {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Uⁿ f`.
    pub fn monomial(n: usize, f: Func) -> Self {
        let mut s = Self::zero();
        s.set_coeff(n, f);
        s
    }

    /// `U⁰ f`.
    pub fn constant(f: Func) -> Self {
        Self::monomial(0, f)
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (usize, Func)>) -> Self {
        let mut s = Self::zero();
        for (n, f) in coeffs {
            let sum = s.fourier(n).add(&f);
            s.set_coeff(n, sum);
        }
        s
    }

    fn set_coeff(&mut self, n: usize, f: Func) {
        if f.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, f);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest stored degree; `None` for the zero element.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// The Fourier coefficient `Eₙ(A)`.
    pub fn fourier(&self, n: usize) -> Func {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, n: usize) -> Option<&Func> {
        self.coeffs.get(&n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Func)> {
        self.coeffs.iter().map(|(&n, f)| (n, f))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, g) in other.terms() {
            let sum = out.fourier(n).add(g);
            out.set_coeff(n, sum);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_coeffs(self.terms().map(|(n, f)| (n, f.scale(c))))
    }

    /// Applies `map` to every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, mut map: impl FnMut(usize, &Func) -> Func) -> Self {
        Self::from_coeffs(self.terms().map(|(n, f)| (n, map(n, f))))
    }

    /// The product under `(Uⁿf)(U^m g) = U^{n+m}((f∘φ^m) g)`.
    ///
    /// Evaluates `f∘φ^m` only on the support of `g`, so no fibers are needed.
    pub fn multiply(sys: &DynamicalSystem, a: &Self, b: &Self) -> Result<Self, DynamicsError> {
        let mut acc: BTreeMap<usize, Func> = BTreeMap::new();
        for (m, g) in b.terms() {
            for (x, gx) in g.iter() {
                let y = sys.iterate(x, m)?;
                for (n, f) in a.terms() {
                    if let Some(fy) = f.value(y) {
                        acc.entry(n + m).or_default().add_at(x, fy * gx);
                    }
                }
            }
        }
        Ok(Self::from_coeffs(acc))
    }

    /// `S_l(A)`: the terms of degree at most `l`.
    pub fn partial_sum(&self, l: usize) -> Self {
        Self { coeffs: self.coeffs.range(..=l).map(|(&n, f)| (n, f.clone())).collect() }
    }

    /// The arithmetic mean `Ā_k = (S₀ + … + S_k)/(k+1)`, computed from its
    /// closed form `Eₙ(Ā_k) = (k+1−n)/(k+1) · fₙ` for `n ≤ k`.
    pub fn cesaro(&self, k: usize) -> Self {
        let denom = BigInt::from(k + 1);
        Self::from_coeffs(self.coeffs.range(..=k).map(|(&n, f)| {
            let w = BigRational::new(BigInt::from(k + 1 - n), denom.clone());
            (n, f.scale(&Complex::new(w, BigRational::zero())))
        }))
    }

    /// `‖A‖₁ = Σ ‖fₙ‖_∞`.
    pub fn l1_norm(&self) -> Surd {
        self.coeffs.values().map(Func::sup_norm).sum()
    }

    /// `maxₙ ‖fₙ‖_∞`, a lower bound for the operator norm.
    pub fn sup_coeff_norm(&self) -> Surd {
        let sq = self.coeffs.values().map(Func::sup_norm_sqr).max().unwrap_or_else(BigRational::zero);
        Surd::sqrt(&sq)
    }

    /// Every point carrying a nonzero coefficient value.
    pub fn support_points(&self) -> std::collections::BTreeSet<Point> {
        self.coeffs.values().flat_map(Func::support).collect()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Series literal: `[(n, [(x, re, im), ...]), ...]` with exact rationals
/// written as integers or `p/q`.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (n, func)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({n}, [")?;
            for (j, (x, v)) in func.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "({x}, {}, {})", fmt_rational(&v.re), fmt_rational(&v.im))?;
            }
            f.write_str("])")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed series literal at byte {pos}: {msg}")]
pub struct ParseSeriesError {
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseSeriesError {
        ParseSeriesError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseSeriesError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn atom(&mut self) -> Result<&'a str, ParseSeriesError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_digit() || c == '-' || c == '+' || c == '/' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn rational(&mut self) -> Result<BigRational, ParseSeriesError> {
        let start = self.pos;
        let tok = self.atom()?;
        tok.parse::<BigRational>()
            .map_err(|_| ParseSeriesError { pos: start, msg: format!("bad rational `{tok}`") })
    }

    /// Parses `item (, item)*` up to the closing bracket.
    fn list<T>(&mut self, close: char, mut item: impl FnMut(&mut Self) -> Result<T, ParseSeriesError>) -> Result<Vec<T>, ParseSeriesError> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err(format!("expected `,` or `{close}`"))),
            }
        }
    }
}

impl FromStr for Series {
    type Err = ParseSeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { src: s, pos: 0 };
        cur.expect('[')?;
        let records = cur.list(']', |c| {
            c.expect('(')?;
            let at = c.pos;
            let n: usize = c.atom()?.parse().map_err(|_| ParseSeriesError { pos: at, msg: "bad degree".into() })?;
            c.expect(',')?;
            c.expect('[')?;
            let values = c.list(']', |c| {
                c.expect('(')?;
                let at = c.pos;
                let x: Point = c.atom()?.parse().map_err(|_| ParseSeriesError { pos: at, msg: "bad point".into() })?;
                c.expect(',')?;
                let re = c.rational()?;
                c.expect(',')?;
                let im = c.rational()?;
                c.expect(')')?;
                Ok((x, Complex::new(re, im)))
            })?;
            c.expect(')')?;
            Ok((n, Func::from_values(values)))
        })?;
        if cur.peek().is_some() {
            return Err(cur.err("trailing input"));
        }
        Ok(Series::from_coeffs(records))
    }
}
