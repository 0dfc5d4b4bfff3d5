//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! unitary exponential built on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, TOLERANCE};

/// Eigenvalues closer than this are merged into one spectral projector.
pub const CLUSTER_TOLERANCE: f64 = 1e-9;

const MAX_SWEEPS: usize = 64;

/// One eigenspace of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralComponent {
    pub eigenvalue: f64,
    pub projector: ComplexMatrix,
}

impl SpectralComponent {
    pub fn rank(&self) -> usize {
        self.projector.trace().re.round() as usize
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a
/// Hermitian matrix.
pub fn jacobi_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let defect = m.hermiticity_defect();
    if defect > TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[(row, col)]).collect())
        .collect();
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with `a ← J†·a·J`, `v ← v·J`, where
/// `J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` on the (p, q) plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let theta = 0.5 * (2.0 * mag).atan2(a[(q, q)].re - a[(p, p)].re);
    let (s, c) = theta.sin_cos();
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Spectral decomposition `m = Σ λᵢ Pᵢ` with eigenvalues ascending and
/// degenerate eigenvalues (within [`CLUSTER_TOLERANCE`]) sharing one projector.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<Vec<SpectralComponent>> {
    let (values, vectors) = jacobi_eigen(m)?;
    let n = m.dim();
    let mut components: Vec<SpectralComponent> = Vec::new();
    let mut members: Vec<f64> = Vec::new();

    for (value, vector) in values.into_iter().zip(&vectors) {
        let piece = ComplexMatrix::outer(vector, vector);
        match components.last_mut() {
            Some(last) if (value - members[members.len() - 1]).abs() <= CLUSTER_TOLERANCE => {
                last.projector = &last.projector + &piece;
                members.push(value);
                last.eigenvalue = members.iter().sum::<f64>() / members.len() as f64;
            }
            _ => {
                members.clear();
                members.push(value);
                components.push(SpectralComponent {
                    eigenvalue: value,
                    projector: piece,
                });
            }
        }
    }
    debug_assert!(components.iter().map(|c| c.rank()).sum::<usize>() == n);
    Ok(components)
}

/// `exp(−i·t·h)` for Hermitian `h`, assembled from its spectral projectors.
pub fn matrix_exponential_skew_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = h.dim();
    let (values, vectors) = jacobi_eigen(h)?;
    let mut out = ComplexMatrix::zeros(n);
    for (value, vector) in values.into_iter().zip(&vectors) {
        let phase = Complex64::from_polar(1.0, -t * value);
        out = &out + &ComplexMatrix::outer(vector, vector).scale(phase);
    }
    Ok(out)
}
