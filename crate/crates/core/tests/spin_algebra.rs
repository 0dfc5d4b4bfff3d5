use nalgebra::{Complex, DMatrix};
use nonlocal_core::eigen::jacobi_eigen;
use nonlocal_core::{
    hermitian_eigensystem, matrix_exponential_skew_hermitian, spin_operators, tensor, Complex64,
    ComplexMatrix, Spin, TOLERANCE,
};
use proptest::prelude::*;

fn i() -> Complex64 {
    Complex64::i()
}

fn random_hermitian(dim: usize, raw: &[(f64, f64)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    let mut k = 0;
    for r in 0..dim {
        for c in r..dim {
            let (re, im) = raw[k % raw.len()];
            k += 1;
            if r == c {
                m[(r, c)] = Complex64::new(re, 0.0);
            } else {
                m[(r, c)] = Complex64::new(re, im);
                m[(c, r)] = Complex64::new(re, -im);
            }
        }
    }
    m
}

#[test]
fn commutation_relations_and_casimir() {
    for twice in 1..=7 {
        let spin = Spin::from_twice(twice);
        let t = spin_operators(spin);
        let check = |a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix| {
            let lhs = a.commutator(b).unwrap();
            let rhs = c.scale(i());
            assert!(lhs.max_abs_diff(&rhs).unwrap() <= TOLERANCE, "spin {spin}");
        };
        check(&t.sx, &t.sy, &t.sz);
        check(&t.sy, &t.sz, &t.sx);
        check(&t.sz, &t.sx, &t.sy);

        let s = spin.value();
        let expected = ComplexMatrix::identity(spin.dim()).scale(Complex64::new(s * (s + 1.0), 0.0));
        assert!(t.casimir().max_abs_diff(&expected).unwrap() <= TOLERANCE);
    }
}

#[test]
fn tensor_associativity_is_exact() {
    let t = spin_operators(Spin::HALF);
    let a = &t.sx + &t.sz;
    let b = t.sy.clone();
    let c = &t.sx - &t.sy;
    assert_eq!(tensor(&tensor(&a, &b), &c), tensor(&a, &tensor(&b, &c)));
}

#[test]
fn permutation_involution_spectrum() {
    let u = ComplexMatrix::from_real_rows([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]);
    let sys = hermitian_eigensystem(&u).unwrap();
    let summary: Vec<(f64, usize)> = sys.iter().map(|c| (c.eigenvalue, c.rank())).collect();
    assert_eq!(summary.len(), 2);
    assert!((summary[0].0 + 1.0).abs() <= TOLERANCE && summary[0].1 == 2);
    assert!((summary[1].0 - 1.0).abs() <= TOLERANCE && summary[1].1 == 2);
}

#[test]
fn eigenvalues_agree_with_nalgebra() {
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for dim in [2, 3, 4, 7, 16] {
        let raw: Vec<(f64, f64)> = (0..dim * dim).map(|_| (next(), next())).collect();
        let m = random_hermitian(dim, &raw);
        let (ours, _) = jacobi_eigen(&m).unwrap();

        let na = DMatrix::from_fn(dim, dim, |r, c| Complex::new(m[(r, c)].re, m[(r, c)].im));
        let mut theirs: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10, "dim {dim}: {ours:?} vs {theirs:?}");
        }
    }
}

fn check_spectral_invariants(m: &ComplexMatrix) {
    let sys = hermitian_eigensystem(m).unwrap();
    let n = m.dim();
    let mut recon = ComplexMatrix::zeros(n);
    let mut sum = ComplexMatrix::zeros(n);
    for (k, a) in sys.iter().enumerate() {
        if k > 0 {
            assert!(sys[k - 1].eigenvalue < a.eigenvalue);
        }
        assert!(a.projector.is_hermitian(TOLERANCE));
        recon = &recon + &a.projector.scale(Complex64::new(a.eigenvalue, 0.0));
        sum = &sum + &a.projector;
        for (l, b) in sys.iter().enumerate() {
            let prod = &a.projector * &b.projector;
            let expected = if k == l { a.projector.clone() } else { ComplexMatrix::zeros(n) };
            assert!(prod.max_abs_diff(&expected).unwrap() <= TOLERANCE);
        }
    }
    let scale = m.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
    assert!(recon.max_abs_diff(m).unwrap() <= TOLERANCE * scale);
    assert!(sum.max_abs_diff(&ComplexMatrix::identity(n)).unwrap() <= TOLERANCE);
}

#[test]
fn spectral_invariants_on_spin_generators() {
    for twice in 1..=3 {
        let t = spin_operators(Spin::from_twice(twice));
        for m in [&t.sx, &t.sy, &t.sz, &t.casimir()] {
            check_spectral_invariants(m);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_invariants_random(
        dim in 1usize..=6,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36),
    ) {
        check_spectral_invariants(&random_hermitian(dim, &raw));
    }

    #[test]
    fn exponential_is_unitary(
        dim in 1usize..=6,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36),
        t in -10.0f64..10.0,
    ) {
        let e = matrix_exponential_skew_hermitian(&random_hermitian(dim, &raw), t).unwrap();
        prop_assert!(e.unitarity_defect() <= TOLERANCE);
    }

    #[test]
    fn exponential_matches_finite_difference(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10),
        t in -3.0f64..3.0,
    ) {
        // d/dt exp(−ith) = −i h exp(−ith), by central differences.
        let h = random_hermitian(4, &raw);
        let step = 1e-5;
        let plus = matrix_exponential_skew_hermitian(&h, t + step).unwrap();
        let minus = matrix_exponential_skew_hermitian(&h, t - step).unwrap();
        let deriv = (&plus - &minus).scale(Complex64::new(0.5 / step, 0.0));
        let at = matrix_exponential_skew_hermitian(&h, t).unwrap();
        let expected = (&h * &at).scale(-i());
        prop_assert!(deriv.max_abs_diff(&expected).unwrap() < 1e-7);
    }
}
