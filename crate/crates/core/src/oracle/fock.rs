//! Truncated Fock-space states and the displacement operator.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Table of `ln n!`.
#[derive(Debug, Clone)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(n_max: usize) -> Self {
        let mut table = Vec::with_capacity(n_max + 1);
        table.push(0.0);
        for n in 1..=n_max {
            table.push(table[n - 1] + (n as f64).ln());
        }
        Self(table)
    }

    pub fn get(&self, n: usize) -> f64 {
        self.0[n]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Amplitudes over `|0> ..= |n_max>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            amps: vec![Complex64::new(0.0, 0.0); n_max + 1],
        }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "a Fock vector needs at least the vacuum");
        Self { amps }
    }

    /// Truncated coherent state `|a>`.
    pub fn coherent(a: Complex64, n_max: usize, lf: &LnFactorials) -> Self {
        let mut amps = Vec::with_capacity(n_max + 1);
        let r2 = a.norm_sqr();
        if r2 == 0.0 {
            let mut v = Self::zeros(n_max);
            v.amps[0] = Complex64::new(1.0, 0.0);
            return v;
        }
        let (ln_r, phase) = (a.norm().ln(), a.arg());
        for n in 0..=n_max {
            let nf = n as f64;
            let mag = (nf * ln_r - 0.5 * lf.get(n) - 0.5 * r2).exp();
            amps.push(Complex64::from_polar(mag, nf * phase));
        }
        Self { amps }
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// `<self|other>`, summed over the shared cutoff.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Pure-state loss of transmission `eta` on a (scaled) coherent state
    /// `K |a>`, giving `K |sqrt(eta) a>`. The amplitude `a` is read off the
    /// first two number components.
    pub fn attenuate_coherent(&self, eta: f64) -> Result<FockVector> {
        let v0 = self.amps[0];
        if v0.norm_sqr() == 0.0 {
            return Err(Error::Usage(
                "loss rescaling needs a coherent state with a vacuum component".into(),
            ));
        }
        let a = if self.amps.len() > 1 {
            self.amps[1] / v0
        } else {
            Complex64::new(0.0, 0.0)
        };
        let restore = (0.5 * (1.0 - eta) * a.norm_sqr()).exp();
        let sqrt_eta = eta.sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, &c)| c * sqrt_eta.powi(n as i32) * restore)
            .collect();
        Ok(FockVector { amps })
    }

    /// `D(z) |self>` on a cutoff of `n_max`. Only occupied input levels
    /// contribute, so a low-photon input is cheap to displace.
    pub fn displaced(&self, z: Complex64, n_max: usize, lf: &LnFactorials) -> FockVector {
        let mut out = FockVector::zeros(n_max);
        for (n, &c) in self.amps.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (m, slot) in out.amps.iter_mut().enumerate() {
                *slot += displacement_element(m, n, z, lf) * c;
            }
        }
        out
    }
}

/// Generalised Laguerre polynomial `L_k^(a)(x)` by three-term recurrence.
pub fn laguerre(k: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<m| D(z) |n>` for `D(z) = exp(z a^dag - conj(z) a)`.
pub fn displacement_element(m: usize, n: usize, z: Complex64, lf: &LnFactorials) -> Complex64 {
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return if m == n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let (lo, hi) = if m >= n { (n, m) } else { (m, n) };
    let diff = (hi - lo) as f64;
    let ln_mag = 0.5 * (lf.get(lo) - lf.get(hi)) + diff * 0.5 * r2.ln() - 0.5 * r2;
    let poly = laguerre(lo, diff, r2);
    // m >= n carries z^(m-n); m < n carries (-conj z)^(n-m)
    let phase = if m >= n {
        diff * z.arg()
    } else {
        diff * (-z.conj()).arg()
    };
    Complex64::from_polar(ln_mag.exp(), phase) * poly
}

/// Dense `(n_max + 1)^2` matrix of `D(z)`, row-major in `m`.
pub fn displacement_matrix(z: Complex64, n_max: usize) -> Vec<Vec<Complex64>> {
    let lf = LnFactorials::new(n_max);
    (0..=n_max)
        .map(|m| {
            (0..=n_max)
                .map(|n| displacement_element(m, n, z, &lf))
                .collect()
        })
        .collect()
}

/// Cutoff that holds a coherent-like state of amplitude `r` with a tail far
/// below double precision.
pub fn required_cutoff(r: f64) -> usize {
    (r * r + 12.0 * r + 40.0).ceil() as usize
}
