use std::f64::consts::PI;

use nonlocal_core::{
    canonical_observables, invariance_defect, random_rotation, rotation_operator, rotation_overlap,
    rotation_stream, singlet, tensor, Complex64, ComplexMatrix, RotationSpec, Spin, StateVector,
    CANONICAL_LABELS, TOLERANCE,
};
use proptest::prelude::*;

const SPINS: [Spin; 3] = [Spin::HALF, Spin::ONE, Spin::THREE_HALVES];

#[test]
fn random_rotations_are_unitary_with_unit_determinant_modulus() {
    for spin in SPINS {
        for spec in rotation_stream(100).take(100) {
            let r = rotation_operator(&spec, spin).unwrap();
            assert!(r.unitarity_defect() <= TOLERANCE);
            assert!((r.determinant().norm() - 1.0).abs() <= TOLERANCE);
        }
    }
}

#[test]
fn double_cover() {
    for spin in [Spin::HALF, Spin::ONE, Spin::THREE_HALVES, Spin::from_twice(4)] {
        for spec in rotation_stream(5).take(10) {
            let full = RotationSpec::new(spec.axis, 2.0 * PI).unwrap();
            let r = rotation_operator(&full, spin).unwrap();
            let sign = if spin.is_half_integer() { -1.0 } else { 1.0 };
            let expected = ComplexMatrix::identity(spin.dim()).scale(Complex64::new(sign, 0.0));
            assert!(r.approx_eq(&expected, TOLERANCE), "spin {spin}");
        }
    }
}

#[test]
fn singlet_invariance_sweep() {
    for spin in SPINS {
        let psi = singlet(spin).unwrap();
        for spec in rotation_stream(2024).take(200) {
            let r = rotation_operator(&spec, spin).unwrap();
            assert!(invariance_defect(&psi, &r).unwrap().abs() <= TOLERANCE);
            let overlap = rotation_overlap(&psi, &r).unwrap();
            assert!((overlap - Complex64::new(1.0, 0.0)).norm() <= TOLERANCE);
        }
    }
}

#[test]
fn product_state_is_not_invariant() {
    let spin = Spin::THREE_HALVES;
    let state = StateVector::product_basis(spin, 0, 3);
    let r = rotation_operator(&RotationSpec::new([1.0, 0.0, 0.0], PI / 2.0).unwrap(), spin).unwrap();
    let defect = invariance_defect(&state, &r).unwrap();

    // Independent route: rotate the ket explicitly and take the overlap.
    let rr = tensor(&r, &r);
    let rotated: Vec<Complex64> = (0..16).map(|row| rr[(row, 3)]).collect();
    let oracle = 1.0 - rotated[3].norm();
    assert!((defect - oracle).abs() <= TOLERANCE);
    assert!(defect > 0.1, "defect {defect}");
}

#[test]
fn sampler_axis_mean_is_centered() {
    let specs: Vec<RotationSpec> = (0..1000).map(random_rotation).collect();
    for k in 0..3 {
        let mean = specs.iter().map(|s| s.axis[k]).sum::<f64>() / specs.len() as f64;
        assert!(mean.abs() < 0.1, "axis component {k} mean {mean}");
    }
    let mean_angle = specs.iter().map(|s| s.angle).sum::<f64>() / specs.len() as f64;
    assert!((mean_angle - 2.0 * PI).abs() < 0.3);
}

fn axis_strategy() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0f64..1.0).prop_filter("nonzero", |v| {
        v.iter().map(|x| x * x).sum::<f64>() > 1e-3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn same_axis_composition(axis in axis_strategy(), a in -6.0f64..6.0, b in -6.0f64..6.0, twice in 1u32..=3) {
        let spin = Spin::from_twice(twice);
        let ra = rotation_operator(&RotationSpec::normalized(axis, a).unwrap(), spin).unwrap();
        let rb = rotation_operator(&RotationSpec::normalized(axis, b).unwrap(), spin).unwrap();
        let rab = rotation_operator(&RotationSpec::normalized(axis, a + b).unwrap(), spin).unwrap();
        prop_assert!((&ra * &rb).max_abs_diff(&rab).unwrap() <= TOLERANCE);
    }

    #[test]
    fn conjugation_preserves_involutions(axis in axis_strategy(), angle in 0.0f64..4.0 * PI) {
        let r = rotation_operator(&RotationSpec::normalized(axis, angle).unwrap(), Spin::THREE_HALVES).unwrap();
        let obs = canonical_observables();
        for label in CANONICAL_LABELS {
            let o = obs.get(label).unwrap().matrix();
            let rotated = &(&r * o) * &r.adjoint();
            prop_assert!(rotated.is_hermitian(TOLERANCE));
            prop_assert!((&rotated * &rotated).approx_eq(&ComplexMatrix::identity(4), TOLERANCE));
        }
    }
}
