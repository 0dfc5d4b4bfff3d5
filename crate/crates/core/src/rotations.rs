//! Spin-s rotation operators `exp(−iθ n̂·S)` and a seeded sampler of random
//! rotations.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::eigen::matrix_exponential_skew_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, TOLERANCE};
use crate::spin::{spin_operators, Spin};

/// A rotation by `angle` radians about the unit vector `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl RotationSpec {
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm.is_nan() || (norm - 1.0).abs() > TOLERANCE || !angle.is_finite() {
            return Err(Error::InvalidAxis(norm));
        }
        Ok(Self { axis, angle })
    }

    /// Normalizes a nonzero axis before validating.
    pub fn normalized(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidAxis(norm));
        }
        Self::new(axis.map(|x| x / norm), angle)
    }

    pub fn identity() -> Self {
        Self {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        }
    }

    /// Axis from three standard normals, normalized; angle uniform in [0, 4π).
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-9 {
                let angle = rng.random_range(0.0..4.0 * PI);
                return Self {
                    axis: v.map(|x| x / norm),
                    angle,
                };
            }
        }
    }
}

/// The deterministic stream of rotations used by sweeps: ChaCha8 seeded with
/// `seed`, one [`RotationSpec::sample`] per rotation.
pub fn rotation_stream(seed: u64) -> impl Iterator<Item = RotationSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(move || RotationSpec::sample(&mut rng))
}

/// The first rotation of [`rotation_stream`].
pub fn random_rotation(seed: u64) -> RotationSpec {
    RotationSpec::sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// `exp(−i·angle·(n̂·S))` in the spin-`s` representation.
pub fn rotation_operator(spec: &RotationSpec, spin: Spin) -> Result<ComplexMatrix> {
    let spec = RotationSpec::new(spec.axis, spec.angle)?;
    let generator = spin_operators(spin).along(spec.axis);
    matrix_exponential_skew_hermitian(&generator, spec.angle)
}
