//! Polynomial-times-Gaussian functions of `x = |w|^2` on the complex plane.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `c * sum_k a_k x^k * exp(-s x)` with `x = |w|^2`.
///
/// Every integrand met in the link calculation reduces to this shape once
/// the measurement outcome is shifted to `w = conj(beta) + alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPolyGaussian {
    scale: f64,
    decay: f64,
    coeffs: Vec<f64>,
}

impl RadialPolyGaussian {
    pub fn new(integrand: &'static str, scale: f64, decay: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(decay > 0.0) || !decay.is_finite() {
            return Err(Error::NonIntegrable { integrand, decay });
        }
        Ok(Self {
            scale,
            decay,
            coeffs,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value at `x = |w|^2`.
    pub fn eval(&self, x: f64) -> f64 {
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a);
        self.scale * poly * (-self.decay * x).exp()
    }

    /// Integral over the whole complex plane, `d^2 w = dRe(w) dIm(w)`.
    pub fn integral(&self) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| a * gaussian_moment(k, self.decay))
            .sum();
        self.scale * sum
    }
}

/// `int exp(-s |w|^2) |w|^(2k) d^2 w = pi k! / s^(k+1)`.
pub fn gaussian_moment(k: usize, s: f64) -> f64 {
    // k!/s^k accumulated as a running product to stay in range
    let ratio = (1..=k).fold(1.0, |acc, j| acc * j as f64 / s);
    PI * ratio / s
}
