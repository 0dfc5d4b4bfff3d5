//! Spin-s angular momentum matrices in the `|s⟩, |s−1⟩, …, |−s⟩` basis.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// A spin quantum number `s`, stored as the integer `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin(u32);

impl Spin {
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);
    pub const THREE_HALVES: Spin = Spin(3);

    pub const fn from_twice(twice_s: u32) -> Self {
        Spin(twice_s)
    }

    /// Accepts any `s` with `2s` a nonnegative integer.
    pub fn new(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if !twice.is_finite() || twice < 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(Error::InvalidSpin(s));
        }
        Ok(Spin(twice as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Dimension `2s + 1` of the single-particle space.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.0 % 2 == 1
    }

    /// Magnetic quantum numbers in basis order, highest first.
    pub fn m_values(self) -> impl Iterator<Item = f64> {
        let s = self.value();
        (0..self.dim()).map(move |k| s - k as f64)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpinTriple {
    pub spin: Spin,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
}

impl SpinTriple {
    /// `n̂·S` for a real 3-vector `n̂`.
    pub fn along(&self, axis: [f64; 3]) -> ComplexMatrix {
        let c = |x: f64| Complex64::new(x, 0.0);
        let xy = &self.sx.scale(c(axis[0])) + &self.sy.scale(c(axis[1]));
        &xy + &self.sz.scale(c(axis[2]))
    }

    /// `S² = Sx² + Sy² + Sz²`.
    pub fn casimir(&self) -> ComplexMatrix {
        let xx = &self.sx * &self.sx;
        let yy = &self.sy * &self.sy;
        let zz = &self.sz * &self.sz;
        &(&xx + &yy) + &zz
    }
}

/// Builds `(Sx, Sy, Sz)` from the raising operator with Condon–Shortley
/// coefficients `√(s(s+1) − m(m+1))`, so `Sx` is real symmetric and `Sy` is
/// imaginary antisymmetric.
pub fn spin_operators(spin: Spin) -> SpinTriple {
    let n = spin.dim();
    let s = spin.value();
    let m: Vec<f64> = spin.m_values().collect();

    let mut raise = ComplexMatrix::zeros(n);
    for k in 1..n {
        let coeff = (s * (s + 1.0) - m[k] * (m[k] + 1.0)).sqrt();
        raise[(k - 1, k)] = Complex64::new(coeff, 0.0);
    }
    let lower = raise.transpose();

    let sx = (&raise + &lower).scale(Complex64::new(0.5, 0.0));
    let sy = (&raise - &lower).scale(Complex64::new(0.0, -0.5));
    let sz = ComplexMatrix::from_real_diagonal(&m);
    SpinTriple { spin, sx, sy, sz }
}
