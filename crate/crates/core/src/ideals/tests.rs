use std::sync::Arc;

use super::*;
use crate::algebra::{Func, Series};
use crate::units::Side;

const A: Point = 0;
const B: Point = 1;

fn two_cycle() -> Arc<DynamicalSystem> {
    Arc::new(DynamicalSystem::permutation(&[1, 0]).unwrap())
}

fn two_two_cycles() -> Arc<DynamicalSystem> {
    Arc::new(DynamicalSystem::permutation(&[1, 0, 3, 2]).unwrap())
}

fn set(xs: &[Point]) -> CoSet {
    CoSet::finite(xs.iter().copied())
}

fn stable(sys: &Arc<DynamicalSystem>, sets: &[&[Point]]) -> IdealSpec {
    IdealSpec::stable(sys.clone(), sets.iter().map(|s| set(s)).collect()).unwrap()
}

fn shift_sw(w: &[Point]) -> IdealSpec {
    IdealSpec::sw_unchecked(Arc::new(DynamicalSystem::shift()), CoSet::empty(), w.iter().copied(), DEFAULT_K_BUDGET)
}

#[test]
fn member_x_n_examples() {
    let sw = shift_sw(&[0]);
    assert!(sw.member_x_n(2, -5).unwrap());
    assert!(!sw.member_x_n(2, -1).unwrap());
    assert!(stable(&two_cycle(), &[&[A], &[]]).member_x_n(0, A).unwrap());
}

#[test]
fn validate_star_examples() {
    let bad = stable(&two_cycle(), &[&[A], &[A, B]]).validate_star().unwrap();
    assert_eq!(bad.first_failure().unwrap().name, "star.n=0");
    assert!(stable(&two_cycle(), &[&[A], &[]]).validate_star().unwrap().passed());
    assert!(shift_sw(&[0]).validate_star().unwrap().passed());
}

#[test]
fn tail_of_stable_sequence_must_be_forward_invariant() {
    // φ({a}) = {b} ⊄ {a}
    let r = stable(&two_cycle(), &[&[A]]).validate_star().unwrap();
    assert!(!r.passed());
}

#[test]
fn zero_ideal_examples() {
    let sys = two_cycle();
    assert!(stable(&sys, &[&[A, B]]).is_zero_ideal());
    assert!(!stable(&sys, &[&[A, B], &[]]).is_zero_ideal());
    assert!(!shift_sw(&[0]).is_zero_ideal());
    assert_eq!(stable(&sys, &[&[A, B]]).decide_right_au(), Err(IdealError::ZeroIdeal));
}

#[test]
fn contains_examples() {
    let sys = two_two_cycles();
    let spec = stable(&sys, &[&[0, 1]]);
    let a = Series::from_coeffs([(0, Func::delta(2)), (3, Func::delta(2))]);
    assert!(spec.contains(&a).unwrap());
    assert!(!spec.contains(&Series::constant(Func::delta(0))).unwrap());
    assert!(!shift_sw(&[0]).contains(&Series::monomial(1, Func::delta(-3))).unwrap());
}

#[test]
fn right_decision_examples() {
    let sys = two_two_cycles();
    let d = stable(&sys, &[&[0, 1]]).decide_right_au().unwrap();
    assert_eq!((d.verdict, d.rule), (Verdict::Yes, Rule::RauConstant));

    let d = stable(&two_cycle(), &[&[A], &[]]).decide_right_au().unwrap();
    assert_eq!(d.verdict, Verdict::No);
    let w = d.witness().unwrap();
    assert_eq!((w.side, w.n0, w.x0), (Side::Right, 0, A));
    assert_eq!(w.a, Series::monomial(1, Func::delta(A)));

    let d = shift_sw(&[0]).decide_right_au().unwrap();
    assert_eq!(d.verdict, Verdict::No);
    assert_eq!((d.witness().unwrap().n0, d.witness().unwrap().x0), (0, 0));
}

#[test]
fn left_decision_examples() {
    let d = stable(&two_cycle(), &[&[A], &[]]).decide_left_au().unwrap();
    assert_eq!((d.verdict, d.rule), (Verdict::No, Rule::LauCond3Fails));
    let w = d.witness().unwrap();
    assert_eq!((w.n0, w.x0), (1, B));

    let d = shift_sw(&[0]).decide_left_au().unwrap();
    assert_eq!((d.verdict, d.rule), (Verdict::Yes, Rule::LauSwInvariants));

    let d = stable(&two_two_cycles(), &[&[0, 1]]).decide_left_au().unwrap();
    assert_eq!((d.verdict, d.rule), (Verdict::Yes, Rule::LauCond3));
}

#[test]
fn left_decision_with_full_x0_cites_the_properness_clause() {
    let d = stable(&two_cycle(), &[&[A, B], &[]]).decide_left_au().unwrap();
    assert_eq!((d.verdict, d.rule), (Verdict::No, Rule::LauX0Proper));
    let w = d.witness().unwrap();
    assert!(w.degenerate);
    assert_eq!((w.n0, w.x0), (1, A));
}

#[test]
fn cond2_examples() {
    let sys = two_cycle();
    let full = stable(&sys, &[&[A, B], &[]]).check_lau_cond2(5).unwrap();
    assert!(!full.x0_proper && !full.passed());
    // X_n ≡ {a} on the 2-cycle: not even (*) holds, and φ({b}) = {a} ≠ {b}.
    let r = stable(&sys, &[&[A]]).check_lau_cond2(3).unwrap();
    assert_eq!(r.first_failure, Some(1));
    assert!(stable(&two_two_cycles(), &[&[0, 1]]).check_lau_cond2(6).unwrap().passed());
}

#[test]
fn constant_non_invariant_sequence_on_two_cycle_is_not_a_valid_spec() {
    // The example X_n ≡ {a} on a single 2-cycle violates (*) since φ(a) = b.
    let spec = stable(&two_cycle(), &[&[A]]);
    assert!(matches!(spec.decide_left_au(), Err(IdealError::InvalidSpec(_))));
}

#[test]
fn two_sided_and_m_ideal_examples() {
    let spec = stable(&two_two_cycles(), &[&[0, 1]]);
    let au = spec.decide_au().unwrap();
    assert_eq!((au.verdict, au.rule), (Verdict::Yes, Rule::AuBothSides));
    assert!(au.checks.iter().all(|c| c.pass));
    assert_eq!(spec.decide_m_ideal().unwrap().verdict, Verdict::Yes);

    let au = stable(&two_cycle(), &[&[A], &[]]).decide_au().unwrap();
    assert_eq!((au.verdict, au.rule), (Verdict::No, Rule::AuRightFails));

    assert_eq!(shift_sw(&[0]).decide_m_ideal(), Err(IdealError::NotCompact));
    assert!(IdealError::NotCompact.is_capability());
}

#[test]
fn decompose_examples() {
    assert_eq!(shift_sw(&[0]).decompose_sw().unwrap(), (CoSet::empty(), BTreeSet::from([0])));
    let sys = two_two_cycles();
    assert_eq!(stable(&sys, &[&[0, 1]]).decompose_sw().unwrap(), (set(&[0, 1]), BTreeSet::new()));
    assert_eq!(stable(&sys, &[&[]]).decompose_sw().unwrap(), (set(&[]), BTreeSet::new()));
    let dbl = IdealSpec::stable(Arc::new(DynamicalSystem::doubling()), vec![CoSet::finite([0])]).unwrap();
    assert_eq!(dbl.decompose_sw(), Err(IdealError::NotHomeomorphism));
}

#[test]
fn build_from_sw_examples() {
    let shift = Arc::new(DynamicalSystem::shift());
    let spec = build_from_sw(shift.clone(), CoSet::empty(), [0], DEFAULT_K_BUDGET).unwrap();
    for x in -6..=6 {
        for n in 0..5usize {
            assert_eq!(spec.member_x_n(n, x).unwrap(), x <= -(n as Point), "x={x} n={n}");
        }
    }
    let err = build_from_sw(shift.clone(), CoSet::empty(), [0, -1], DEFAULT_K_BUDGET).unwrap_err();
    assert!(err.to_string().contains("j = 1"), "{err}");
    let err = build_from_sw(shift.clone(), CoSet::empty(), [0, 5], DEFAULT_K_BUDGET).unwrap_err();
    assert!(err.to_string().contains("j = 5"), "{err}");

    let zero = build_from_sw(shift, CoSet::full(), [], DEFAULT_K_BUDGET).unwrap();
    assert!(zero.is_zero_ideal());
}

#[test]
fn sw_rejects_non_invariant_core_and_core_hits() {
    let fixed = Arc::new(DynamicalSystem::template(Arc::new(crate::dynamics::ShiftWithFixed { fixed: 2 })));
    assert!(build_from_sw(fixed.clone(), CoSet::finite([0, 1]), [5], DEFAULT_K_BUDGET).is_ok());
    let err = build_from_sw(fixed.clone(), CoSet::finite([0, 1, 5]), [5], DEFAULT_K_BUDGET).unwrap_err();
    assert!(err.to_string().contains("sw.invariant-core"), "{err}");
    let err = build_from_sw(fixed, CoSet::finite([0, 1]), [1], DEFAULT_K_BUDGET).unwrap_err();
    assert!(err.to_string().contains("sw.disjoint"), "{err}");
}

#[test]
fn cond3_forward_inclusion_agrees_with_equality() {
    let sys = two_cycle();
    for spec in [stable(&sys, &[&[A], &[]]), stable(&sys, &[&[A, B], &[A, B], &[]]), stable(&sys, &[&[]])] {
        assert_eq!(
            spec.decide_left_au().unwrap().verdict,
            spec.decide_left_au_with(Mutation::Cond3Forward).unwrap().verdict
        );
    }
}

#[test]
fn cond3_covering_mutation_accepts_doubling_core() {
    let dbl = Arc::new(DynamicalSystem::doubling());
    let spec = IdealSpec::stable(dbl, vec![CoSet::finite([0])]).unwrap();
    assert_eq!(spec.decide_left_au().unwrap().verdict, Verdict::No);
    assert_eq!(spec.decide_left_au_with(Mutation::Cond3Covering).unwrap().verdict, Verdict::Yes);
}

#[test]
fn stable_from_truncates_repeated_tail() {
    let sys = two_cycle();
    let spec = IdealSpec::stable_from(sys.clone(), vec![set(&[A, B]), set(&[]), set(&[])], 1).unwrap();
    assert_eq!(spec.stable_index(), Some(1));
    assert!(IdealSpec::stable_from(sys.clone(), vec![set(&[]), set(&[A])], 0).is_err());
    assert!(IdealSpec::stable_from(sys, vec![set(&[])], 1).is_err());
}

#[test]
fn mutation_names_round_trip() {
    for m in Mutation::ALL {
        assert_eq!(m.name().parse::<Mutation>().unwrap(), m);
    }
}
