use std::sync::Arc;

use super::*;
use crate::algebra::scalar;
use crate::dynamics::DynamicalSystem;
use crate::ideals::DEFAULT_K_BUDGET;

const A: Point = 0;
const B: Point = 1;

fn stable(images: &[usize], sets: &[&[Point]]) -> IdealSpec {
    let sys = Arc::new(DynamicalSystem::permutation(images).unwrap());
    IdealSpec::stable(sys, sets.iter().map(|s| CoSet::finite(s.iter().copied())).collect()).unwrap()
}

fn shift_sw() -> IdealSpec {
    IdealSpec::sw_unchecked(Arc::new(DynamicalSystem::shift()), CoSet::empty(), [0], DEFAULT_K_BUDGET)
}

fn window(points: &[Point]) -> ExactWindow {
    ExactWindow::Window { points: points.to_vec() }
}

#[test]
fn unit_element_examples() {
    let spec = stable(&[1, 0], &[&[A], &[]]);
    assert_eq!(unit_element(&spec, &[A, B]).unwrap(), Series::constant(Func::delta(B)));
    assert_eq!(unit_element(&shift_sw(), &[-2, -1, 0, 1]).unwrap(), Series::constant(Func::delta(1)));
    assert_eq!(unit_element(&spec, &[]).unwrap(), Series::zero());
}

#[test]
fn unit_net_is_contractive_and_in_the_ideal() {
    let spec = shift_sw();
    let net = UnitNet::new(&spec);
    for r in 0..6 {
        let u = net.element(r).unwrap();
        assert!(u.l1_norm() <= Surd::one());
        assert!(spec.contains(&u).unwrap());
    }
}

#[test]
fn residual_examples() {
    // Two 2-cycles with X_n ≡ {0, 1}; 2 lies outside X_0.
    let spec = stable(&[1, 0, 3, 2], &[&[0, 1]]);
    let a = Series::constant(Func::delta(2));
    assert_eq!(residual_right(&spec, &a, &[0, 1, 2, 3]).unwrap(), Surd::zero());

    let sw = shift_sw();
    let a = Series::monomial(1, Func::delta(1));
    assert_eq!(residual_left(&sw, &a, &[2]).unwrap(), Surd::zero());
    assert_eq!(residual_left(&sw, &a, &[1]).unwrap(), Surd::one());
    assert_eq!(residual_right(&sw, &Series::zero(), &[]).unwrap(), Surd::zero());
}

#[test]
fn residual_rejects_elements_outside_the_ideal() {
    let sw = shift_sw();
    assert!(residual_left(&sw, &Series::constant(Func::delta(0)), &[0]).is_err());
}

#[test]
fn min_exact_window_examples() {
    let spec = stable(&[1, 0, 3, 2], &[&[0, 1]]);
    let a = Series::from_coeffs([(0, Func::delta(2)), (3, Func::delta(2))]);
    assert_eq!(min_exact_window(&spec, &a, Side::Right).unwrap(), window(&[2]));

    let spec = stable(&[1, 0], &[&[A], &[]]);
    let a = Series::monomial(1, Func::delta(B));
    assert_eq!(
        min_exact_window(&spec, &a, Side::Left).unwrap(),
        ExactWindow::NoFiniteWindow { degree: 1, source: B, point: A }
    );
    assert_eq!(min_exact_window(&spec, &Series::zero(), Side::Left).unwrap(), window(&[]));
}

#[test]
fn right_witness_examples() {
    let w = witness_no_right_au(&stable(&[1, 0], &[&[A], &[]])).unwrap();
    assert_eq!((w.side, w.n0, w.x0), (Side::Right, 0, A));
    assert_eq!(w.a, Series::monomial(1, Func::delta(A)));
    let w = witness_no_right_au(&shift_sw()).unwrap();
    assert_eq!((w.n0, w.x0), (0, 0));
    assert!(witness_no_right_au(&stable(&[1, 0], &[&[]])).is_err());
}

#[test]
fn left_witness_examples() {
    let w = witness_no_left_au(&stable(&[1, 0], &[&[A], &[]])).unwrap();
    assert_eq!((w.n0, w.x0, w.degenerate), (1, B, false));
    assert_eq!(w.a, Series::monomial(1, Func::delta(B)));

    // X_n ≡ {0} on two 2-cycles {0,1}, {2,3}: φ(X ∖ X_0) ∋ 0.
    let w = witness_no_left_au(&stable(&[1, 0, 3, 2], &[&[0]])).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!((w.n0, w.x0), (1, 1));

    let w = witness_no_left_au(&stable(&[1, 0], &[&[A, B], &[]])).unwrap();
    assert!(w.degenerate);
    assert_eq!((w.n0, w.x0), (1, A));
    assert!(witness_no_left_au(&shift_sw()).is_err());
}

#[test]
fn certify_examples() {
    let spec = stable(&[1, 0], &[&[A], &[]]);
    let right = witness_no_right_au(&spec).unwrap();
    let v = Series::constant(Func::delta(B));
    assert_eq!(certify_obstruction(&spec, &right, &v).unwrap().coefficient, Surd::one());

    let left = witness_no_left_au(&spec).unwrap();
    assert_eq!(certify_obstruction(&spec, &left, &v).unwrap().coefficient, Surd::one());
    let cert = certify_obstruction(&spec, &left, &Series::zero()).unwrap();
    assert_eq!((cert.coefficient, cert.residual), (Surd::one(), Surd::one()));

    assert!(certify_obstruction(&spec, &left, &Series::constant(Func::delta(A))).is_err());
}

#[test]
fn verify_witness_accepts_generated_and_rejects_tampered() {
    let spec = stable(&[1, 0], &[&[A], &[]]);
    let samples = [Series::zero(), Series::constant(Func::delta(B)), Series::monomial(2, Func::from_values([(A, scalar(3, -1))]))];
    for w in [witness_no_right_au(&spec).unwrap(), witness_no_left_au(&spec).unwrap()] {
        let checks = verify_witness(&spec, &w, &samples).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        let mut bad = w.clone();
        bad.n0 += 1;
        assert!(verify_witness(&spec, &bad, &samples).unwrap().iter().any(|c| !c.pass));
    }
}

#[test]
fn witness_json_round_trip() {
    let w = witness_no_right_au(&shift_sw()).unwrap();
    let json = serde_json::to_string(&w).unwrap();
    assert!(json.contains(r#""a":"[(1, [(0, 1, 0)])]""#), "{json}");
    assert_eq!(serde_json::from_str::<Witness>(&json).unwrap(), w);
}

#[test]
fn whole_algebra_unit_is_two_sided() {
    let spec = IdealSpec::stable(Arc::new(DynamicalSystem::doubling()), vec![CoSet::empty()]).unwrap();
    let a = Series::from_coeffs([(0, Func::delta(3)), (2, Func::from_values([(-4, scalar(1, 1)), (5, scalar(2, 0))]))]);
    for side in [Side::Left, Side::Right] {
        let ExactWindow::Window { points } = min_exact_window(&spec, &a, side).unwrap() else { panic!() };
        assert_eq!(residual(&spec, side, &a, &points).unwrap(), Surd::zero());
    }
}
