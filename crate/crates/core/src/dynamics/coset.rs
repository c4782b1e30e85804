use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::Point;

/// A finite or cofinite subset of the carrier.
///
/// `exceptional` lists the members of a finite set, or the non-members of a
/// cofinite one. The raw Boolean operations here are exact for the algebra of
/// finite/cofinite subsets of any carrier; normalization of cofinite sets on
/// finite carriers happens in [`super::DynamicalSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoSet {
    cofinite: bool,
    exceptional: BTreeSet<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Finite,
    Cofinite,
}

impl CoSet {
    pub fn empty() -> Self {
        Self::finite(std::iter::empty())
    }

    /// The whole carrier (cofinite with no exceptions).
    pub fn full() -> Self {
        Self::cofinite(std::iter::empty())
    }

    pub fn finite(points: impl IntoIterator<Item = Point>) -> Self {
        Self { cofinite: false, exceptional: points.into_iter().collect() }
    }

    pub fn cofinite(missing: impl IntoIterator<Item = Point>) -> Self {
        Self { cofinite: true, exceptional: missing.into_iter().collect() }
    }

    pub fn mode(&self) -> Mode {
        if self.cofinite {
            Mode::Cofinite
        } else {
            Mode::Finite
        }
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    pub fn exceptional(&self) -> &BTreeSet<Point> {
        &self.exceptional
    }

    /// Members when finite.
    pub fn as_finite(&self) -> Option<&BTreeSet<Point>> {
        (!self.cofinite).then_some(&self.exceptional)
    }

    pub fn contains(&self, x: Point) -> bool {
        self.exceptional.contains(&x) != self.cofinite
    }

    /// Empty as a raw set. On finite carriers, normalize first.
    pub fn is_empty(&self) -> bool {
        !self.cofinite && self.exceptional.is_empty()
    }

    pub fn complement(&self) -> Self {
        Self { cofinite: !self.cofinite, exceptional: self.exceptional.clone() }
    }

    pub fn union(&self, other: &Self) -> Self {
        match (self.cofinite, other.cofinite) {
            (false, false) => Self::finite(self.exceptional.union(&other.exceptional).copied()),
            (false, true) => Self::cofinite(other.exceptional.difference(&self.exceptional).copied()),
            (true, false) => Self::cofinite(self.exceptional.difference(&other.exceptional).copied()),
            (true, true) => Self::cofinite(self.exceptional.intersection(&other.exceptional).copied()),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }
}

impl fmt::Display for CoSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cofinite {
            f.write_str("~")?;
        }
        f.write_str("{")?;
        for (i, x) in self.exceptional.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed set literal `{0}`: expected {{a,b,...}} or ~{{a,b,...}}")]
pub struct ParseCoSetError(pub String);

impl FromStr for CoSet {
    type Err = ParseCoSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCoSetError(s.to_string());
        let t = s.trim();
        let (cofinite, rest) = match t.strip_prefix('~') {
            Some(r) => (true, r.trim_start()),
            None => (false, t),
        };
        let body = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(err)?;
        let mut points = BTreeSet::new();
        for item in body.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            points.insert(item.parse::<Point>().map_err(|_| err())?);
        }
        Ok(Self { cofinite, exceptional: points })
    }
}
