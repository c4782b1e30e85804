use std::sync::Arc;

use crate::dynamics::{CoSet, DynamicalSystem, Point, ShiftWithFixed};
use crate::ideals::{IdealSpec, DEFAULT_K_BUDGET};

#[derive(Debug, Clone)]
pub enum CaseSpec {
    Valid(IdealSpec),
    /// A spec that validation must reject, with a fragment the reason must contain.
    ExpectInvalid { spec: IdealSpec, reason: String },
}

#[derive(Debug, Clone)]
pub struct Case {
    pub system: Arc<DynamicalSystem>,
    pub spec: CaseSpec,
}

impl Case {
    pub fn valid(spec: IdealSpec) -> Self {
        Self { system: spec.system_arc().clone(), spec: CaseSpec::Valid(spec) }
    }

    pub fn spec(&self) -> &IdealSpec {
        match &self.spec {
            CaseSpec::Valid(s) | CaseSpec::ExpectInvalid { spec: s, .. } => s,
        }
    }
}

fn fin(xs: &[Point]) -> CoSet {
    CoSet::finite(xs.iter().copied())
}

fn co(xs: &[Point]) -> CoSet {
    CoSet::cofinite(xs.iter().copied())
}

fn stable(sys: &Arc<DynamicalSystem>, sets: Vec<CoSet>) -> Case {
    Case::valid(IdealSpec::stable(sys.clone(), sets).expect("nonempty"))
}

/// `X_0 = … = X_{10} = X`, then `tail`.
fn late_drop(sys: &Arc<DynamicalSystem>, tail: CoSet) -> Case {
    let mut sets = vec![CoSet::full(); 11];
    sets.push(tail);
    stable(sys, sets)
}

fn sw(sys: &Arc<DynamicalSystem>, s: CoSet, w: &[Point]) -> Case {
    Case::valid(IdealSpec::sw_unchecked(sys.clone(), s, w.iter().copied(), DEFAULT_K_BUDGET))
}

/// Hand-picked specs on the shift, the doubling map and a shift with two
/// fixed points, covering constant, dropping, late-dropping, cofinite and
/// `(S, W)` sequences.
pub fn template_suite() -> Vec<Case> {
    let shift = Arc::new(DynamicalSystem::shift());
    let doubling = Arc::new(DynamicalSystem::doubling());
    let fixed = Arc::new(DynamicalSystem::template(Arc::new(ShiftWithFixed { fixed: 2 })));
    let mut cases = vec![
        stable(&shift, vec![fin(&[])]),
        stable(&shift, vec![fin(&[0]), fin(&[])]),
        stable(&shift, vec![co(&[0]), fin(&[])]),
        stable(&shift, vec![CoSet::full(), fin(&[])]),
        stable(&shift, vec![fin(&[0, 1]), fin(&[0]), fin(&[])]),
        late_drop(&shift, fin(&[])),
        sw(&shift, fin(&[]), &[]),
        sw(&shift, fin(&[]), &[0]),
        sw(&shift, fin(&[]), &[5]),
        stable(&doubling, vec![fin(&[0])]),
        stable(&doubling, vec![fin(&[0, 1])]),
        stable(&doubling, vec![fin(&[-1, 0])]),
        stable(&doubling, vec![fin(&[])]),
        stable(&doubling, vec![co(&[3]), fin(&[])]),
        stable(&doubling, vec![fin(&[0, 1, 2]), fin(&[0])]),
        stable(&doubling, vec![CoSet::full(), fin(&[0])]),
        late_drop(&doubling, fin(&[0])),
        sw(&fixed, fin(&[0, 1]), &[5]),
        sw(&fixed, fin(&[0]), &[5]),
        sw(&fixed, fin(&[0, 1]), &[]),
        sw(&fixed, co(&[0, 1]), &[]),
        sw(&fixed, fin(&[]), &[-3]),
        stable(&fixed, vec![fin(&[0])]),
        stable(&fixed, vec![fin(&[0, 1])]),
        stable(&fixed, vec![co(&[0, 1])]),
        stable(&fixed, vec![fin(&[0, 1, 7]), fin(&[0, 1])]),
    ];
    // φ⁻⁵({5}) = {0}: the wandering sets are not disjoint.
    cases.push(Case {
        system: shift.clone(),
        spec: CaseSpec::ExpectInvalid {
            spec: IdealSpec::sw_unchecked(shift, fin(&[]), [0, 5], DEFAULT_K_BUDGET),
            reason: "j = 5".into(),
        },
    });
    cases
}
