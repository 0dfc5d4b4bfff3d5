//! Two-particle pure states, the spin-s singlet and its rotational invariance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{tensor, ComplexMatrix, TOLERANCE};
use crate::spin::Spin;

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalizes `amplitudes`; fails on the zero vector.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Unnormalized(norm * norm));
        }
        if (norm - 1.0).abs() <= TOLERANCE {
            return Ok(Self { amplitudes });
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// The computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Product state `|m_A, m_B⟩` for spin `s`, given basis indices (0 is `m = s`).
    pub fn product_basis(spin: Spin, alice: usize, bob: usize) -> Self {
        let n = spin.dim();
        Self::basis(n * n, alice * n + bob)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &[Complex64]) -> Result<Complex64> {
        if other.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.len(),
            });
        }
        Ok(self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum())
    }

    /// `⟨self|op|self⟩`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        let image = op.apply(&self.amplitudes)?;
        self.inner(&image)
    }

    /// `op|self⟩` for unitary `op`; norm preserved up to round-off.
    pub fn evolve(&self, op: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            amplitudes: op.apply(&self.amplitudes)?,
        })
    }
}

/// `(2s+1)^{-1/2} Σ_m (−1)^{s−m} |m, −m⟩`, highest `m` first.
///
/// For `s = 3/2` this is `½(|3/2,−3/2⟩ − |1/2,−1/2⟩ + |−1/2,1/2⟩ − |−3/2,3/2⟩)`.
pub fn singlet(spin: Spin) -> Result<StateVector> {
    if spin.twice() == 0 {
        return Err(Error::InvalidSpin(0.0));
    }
    let n = spin.dim();
    let amp = 1.0 / (n as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        // k = s − m, and Bob's −m sits at index 2s − k.
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        amplitudes[k * n + (n - 1 - k)] = Complex64::new(sign * amp, 0.0);
    }
    Ok(StateVector { amplitudes })
}

/// `⟨state|(r⊗r)|state⟩`.
pub fn rotation_overlap(state: &StateVector, r: &ComplexMatrix) -> Result<Complex64> {
    let n = r.dim();
    if n * n != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            actual: n * n,
        });
    }
    state.expectation(&tensor(r, r))
}

/// `1 − |⟨state|(r⊗r)|state⟩|`; zero certifies invariance up to a global phase.
pub fn invariance_defect(state: &StateVector, r: &ComplexMatrix) -> Result<f64> {
    Ok(1.0 - rotation_overlap(state, r)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_three_halves_singlet_amplitudes() {
        let psi = singlet(Spin::THREE_HALVES).unwrap();
        let mut expected = vec![Complex64::new(0.0, 0.0); 16];
        expected[3] = Complex64::new(0.5, 0.0);
        expected[6] = Complex64::new(-0.5, 0.0);
        expected[9] = Complex64::new(0.5, 0.0);
        expected[12] = Complex64::new(-0.5, 0.0);
        assert_eq!(psi.amplitudes(), expected.as_slice());
    }

    #[test]
    fn spin_half_singlet() {
        let psi = singlet(Spin::HALF).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let a = psi.amplitudes();
        assert!((a[1].re - r).abs() < TOLERANCE);
        assert!((a[2].re + r).abs() < TOLERANCE);
        assert_eq!(a[0], Complex64::new(0.0, 0.0));
        assert_eq!(a[3], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn spin_one_singlet() {
        let psi = singlet(Spin::ONE).unwrap();
        let r = 1.0 / 3f64.sqrt();
        let a = psi.amplitudes();
        // |1,−1⟩ = 2, |0,0⟩ = 4, |−1,1⟩ = 6
        assert!((a[2].re - r).abs() < TOLERANCE);
        assert!((a[4].re + r).abs() < TOLERANCE);
        assert!((a[6].re - r).abs() < TOLERANCE);
    }

    #[test]
    fn singlet_rejects_spin_zero() {
        assert!(singlet(Spin::from_twice(0)).is_err());
    }

    #[test]
    fn identity_has_zero_defect() {
        let psi = singlet(Spin::THREE_HALVES).unwrap();
        let d = invariance_defect(&psi, &ComplexMatrix::identity(4)).unwrap();
        assert!(d.abs() <= TOLERANCE);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let psi = singlet(Spin::THREE_HALVES).unwrap();
        assert!(invariance_defect(&psi, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn new_normalizes() {
        let v = StateVector::new(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() < TOLERANCE);
        assert!(StateVector::new(vec![Complex64::new(0.0, 0.0); 2]).is_err());
    }
}
