//! Built-in infinite systems on ℤ and the registry that names them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{DynamicsError, Point};

/// Parameters of a template, as read from a system description.
pub type TemplateParams = BTreeMap<String, i64>;

/// An infinite system on ℤ described by closed-form rules.
///
/// Surjectivity and properness are attested by the implementor and only
/// spot-checked on windows by [`super::DynamicalSystem::validate`].
pub trait Template: Send + Sync + fmt::Debug {
    /// Name including parameters, e.g. `shift(step=1)`.
    fn label(&self) -> String;

    fn apply(&self, x: Point) -> Point;

    /// φ⁻¹({x}) sorted ascending, or `None` when the template cannot compute fibers.
    fn fiber(&self, x: Point) -> Option<Vec<Point>>;

    fn attested_homeomorphism(&self) -> bool;

    fn inverse(&self, _x: Point) -> Option<Point> {
        None
    }

    /// `{k ≥ n_min : φᵏ(x) ∈ w}` in ascending order. `None` when the template
    /// has no forward-hitting oracle.
    fn forward_hits(
        &self,
        _x: Point,
        _w: &BTreeSet<Point>,
        _n_min: usize,
        _budget: u64,
    ) -> Option<Result<Vec<usize>, DynamicsError>> {
        None
    }
}

/// Translation `x ↦ x + step` on ℤ. A homeomorphism without periodic points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shift {
    pub step: i64,
}

impl Template for Shift {
    fn label(&self) -> String {
        format!("shift(step={})", self.step)
    }

    fn apply(&self, x: Point) -> Point {
        x + self.step
    }

    fn fiber(&self, x: Point) -> Option<Vec<Point>> {
        Some(vec![x - self.step])
    }

    fn attested_homeomorphism(&self) -> bool {
        true
    }

    fn inverse(&self, x: Point) -> Option<Point> {
        Some(x - self.step)
    }

    fn forward_hits(
        &self,
        x: Point,
        w: &BTreeSet<Point>,
        n_min: usize,
        _budget: u64,
    ) -> Option<Result<Vec<usize>, DynamicsError>> {
        let mut hits: Vec<usize> = w
            .iter()
            .filter_map(|&target| {
                let d = target - x;
                if d % self.step != 0 {
                    return None;
                }
                let k = d / self.step;
                (k >= 0 && k as usize >= n_min).then_some(k as usize)
            })
            .collect();
        hits.sort_unstable();
        Some(Ok(hits))
    }
}

/// `x ↦ ⌊x / base⌋` on ℤ. Proper and surjective with fibers of size `base`;
/// fixed points 0 and −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Doubling {
    pub base: i64,
}

impl Template for Doubling {
    fn label(&self) -> String {
        format!("doubling(base={})", self.base)
    }

    fn apply(&self, x: Point) -> Point {
        x.div_euclid(self.base)
    }

    fn fiber(&self, x: Point) -> Option<Vec<Point>> {
        Some((self.base * x..self.base * x + self.base).collect())
    }

    fn attested_homeomorphism(&self) -> bool {
        false
    }

    fn forward_hits(
        &self,
        x: Point,
        w: &BTreeSet<Point>,
        n_min: usize,
        budget: u64,
    ) -> Option<Result<Vec<usize>, DynamicsError>> {
        let mut hits = Vec::new();
        let mut cur = x;
        let mut k = 0usize;
        loop {
            if k as u64 > budget {
                return Some(Err(DynamicsError::BudgetExceeded(budget)));
            }
            let next = self.apply(cur);
            if next == cur {
                // Orbit has reached a fixed point and stays there forever.
                if w.contains(&cur) {
                    return Some(Err(DynamicsError::InfiniteHitting { x }));
                }
                return Some(Ok(hits));
            }
            if k >= n_min && w.contains(&cur) {
                hits.push(k);
            }
            cur = next;
            k += 1;
        }
    }
}

/// ℤ with the points `0..fixed` held fixed and the remaining points shifted
/// forward along a single ℤ-orbit (−1 jumps to `fixed`).
///
/// A homeomorphism whose invariant sets include finite and cofinite ones,
/// which the plain shift lacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftWithFixed {
    pub fixed: i64,
}

impl ShiftWithFixed {
    fn is_fixed(&self, x: Point) -> bool {
        (0..self.fixed).contains(&x)
    }

    fn position(&self, x: Point) -> i64 {
        if x < 0 {
            x
        } else {
            x - self.fixed
        }
    }

    fn point_at(&self, p: i64) -> Point {
        if p < 0 {
            p
        } else {
            p + self.fixed
        }
    }
}

impl Template for ShiftWithFixed {
    fn label(&self) -> String {
        format!("shift-fixed(fixed={})", self.fixed)
    }

    fn apply(&self, x: Point) -> Point {
        if self.is_fixed(x) {
            x
        } else {
            self.point_at(self.position(x) + 1)
        }
    }

    fn fiber(&self, x: Point) -> Option<Vec<Point>> {
        self.inverse(x).map(|y| vec![y])
    }

    fn attested_homeomorphism(&self) -> bool {
        true
    }

    fn inverse(&self, x: Point) -> Option<Point> {
        Some(if self.is_fixed(x) {
            x
        } else {
            self.point_at(self.position(x) - 1)
        })
    }

    fn forward_hits(
        &self,
        x: Point,
        w: &BTreeSet<Point>,
        n_min: usize,
        _budget: u64,
    ) -> Option<Result<Vec<usize>, DynamicsError>> {
        if self.is_fixed(x) {
            return Some(if w.contains(&x) {
                Err(DynamicsError::InfiniteHitting { x })
            } else {
                Ok(Vec::new())
            });
        }
        let mut hits: Vec<usize> = w
            .iter()
            .filter(|&&t| !self.is_fixed(t))
            .filter_map(|&t| {
                let k = self.position(t) - self.position(x);
                (k >= 0 && k as usize >= n_min).then_some(k as usize)
            })
            .collect();
        hits.sort_unstable();
        Some(Ok(hits))
    }
}

type Constructor = Box<dyn Fn(&TemplateParams) -> Result<Arc<dyn Template>, DynamicsError> + Send + Sync>;

/// Maps template names to constructors. Holds `shift`, `doubling` and
/// `shift-fixed` out of the box; callers may register more.
pub struct TemplateRegistry {
    entries: BTreeMap<String, Constructor>,
}

impl fmt::Debug for TemplateRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

fn param(params: &TemplateParams, key: &str, default: i64) -> i64 {
    params.get(key).copied().unwrap_or(default)
}

fn reject_unknown(params: &TemplateParams, allowed: &[&str]) -> Result<(), DynamicsError> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(DynamicsError::Invalid(format!("unknown template parameter `{k}`"))),
        None => Ok(()),
    }
}

impl TemplateRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("shift", |p| {
            reject_unknown(p, &["step"])?;
            let step = param(p, "step", 1);
            if step == 0 {
                return Err(DynamicsError::Invalid("shift step must be nonzero".into()));
            }
            Ok(Arc::new(Shift { step }))
        });
        reg.register("doubling", |p| {
            reject_unknown(p, &["base"])?;
            let base = param(p, "base", 2);
            if base < 2 {
                return Err(DynamicsError::Invalid("doubling base must be at least 2".into()));
            }
            Ok(Arc::new(Doubling { base }))
        });
        reg.register("shift-fixed", |p| {
            reject_unknown(p, &["fixed"])?;
            let fixed = param(p, "fixed", 1);
            if fixed < 0 {
                return Err(DynamicsError::Invalid("fixed-point count must be nonnegative".into()));
            }
            Ok(Arc::new(ShiftWithFixed { fixed }))
        });
        reg
    }

    pub fn register<F>(&mut self, name: &str, ctor: F)
    where
        F: Fn(&TemplateParams) -> Result<Arc<dyn Template>, DynamicsError> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Box::new(ctor));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, params: &TemplateParams) -> Result<Arc<dyn Template>, DynamicsError> {
        let ctor = self
            .entries
            .get(name)
            .ok_or_else(|| DynamicsError::Invalid(format!("unknown template `{name}`")))?;
        ctor(params)
    }
}

impl Default for TemplateRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[Point]) -> BTreeSet<Point> {
        xs.iter().copied().collect()
    }

    #[test]
    fn shift_fixed_orbit_skips_the_block() {
        let t = ShiftWithFixed { fixed: 2 };
        assert_eq!(t.apply(-1), 2);
        assert_eq!(t.apply(0), 0);
        assert_eq!(t.apply(1), 1);
        assert_eq!(t.apply(2), 3);
        assert_eq!(t.inverse(2), Some(-1));
        for x in -10..10 {
            assert_eq!(t.inverse(t.apply(x)), Some(x));
        }
    }

    #[test]
    fn shift_fixed_hits() {
        let t = ShiftWithFixed { fixed: 2 };
        let hits = t.forward_hits(-2, &set(&[3, 0]), 0, 100).unwrap().unwrap();
        // -2 → -1 → 2 → 3
        assert_eq!(hits, vec![3]);
        assert!(matches!(
            t.forward_hits(1, &set(&[1]), 0, 100),
            Some(Err(DynamicsError::InfiniteHitting { .. }))
        ));
    }

    #[test]
    fn doubling_hits_reaching_fixed_point_in_target_are_infinite() {
        let t = Doubling { base: 2 };
        assert!(matches!(
            t.forward_hits(13, &set(&[0]), 0, 100),
            Some(Err(DynamicsError::InfiniteHitting { x: 13 }))
        ));
        // 13 → 6 → 3 → 1 → 0
        assert_eq!(t.forward_hits(13, &set(&[3, 6]), 0, 100).unwrap().unwrap(), vec![1, 2]);
        assert!(matches!(
            t.forward_hits(1 << 40, &set(&[5]), 0, 10),
            Some(Err(DynamicsError::BudgetExceeded(10)))
        ));
    }

    #[test]
    fn registry_rejects_unknown_names_and_params() {
        let reg = TemplateRegistry::builtin();
        assert!(reg.build("tent", &TemplateParams::new()).is_err());
        let mut p = TemplateParams::new();
        p.insert("stride".into(), 2);
        assert!(reg.build("shift", &p).is_err());
        p.clear();
        p.insert("step".into(), 0);
        assert!(reg.build("shift", &p).is_err());
        assert_eq!(reg.names().collect::<Vec<_>>(), vec!["doubling", "shift", "shift-fixed"]);
    }
}
