//! Brute-force cross-check of the link engine.
//!
//! [`simulate_link`] follows the protocol step by step on a truncated Fock
//! space for one measurement outcome `beta`; [`quadrature_metrics`]
//! integrates the resulting norm and target overlap over a `beta` grid.
//! Nothing here uses the polynomial reduction in [`crate::ec_link`].

pub mod fock;
mod quadrature;

pub use quadrature::{quadrature_metrics, QuadratureGrid};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::ec_link::EcParams;
use crate::error::{Error, Result};
use fock::{required_cutoff, FockVector, LnFactorials};

/// Default Fock cutoff.
pub const DEFAULT_N_MAX: usize = 30;

/// Relative truncation loss tolerated at any step.
const TRUNCATION_TOL: f64 = 1e-10;

/// Un-normalised heralded output of one link for input `|alpha>` and
/// dual-homodyne outcome `beta`.
pub fn simulate_link(
    params: &EcParams,
    alpha: Complex64,
    beta: Complex64,
    n_max: usize,
) -> Result<FockVector> {
    let lf = LnFactorials::new(n_max);
    simulate_with(params, alpha, beta, n_max, &lf)
}

pub(crate) fn simulate_with(
    params: &EcParams,
    alpha: Complex64,
    beta: Complex64,
    n_max: usize,
    lf: &LnFactorials,
) -> Result<FockVector> {
    let chi = params.chi();
    let w = beta.conj() + alpha;

    // (1/sqrt(pi)) <beta + conj(alpha)|_b sqrt(1 - chi^2) sum_n chi^n |n>_b |n>_c
    let mut state = FockVector::coherent(w, n_max, lf);
    let prefactor = ((1.0 - chi * chi) / PI).sqrt();
    for (n, amp) in state.amplitudes_mut().iter_mut().enumerate() {
        *amp *= prefactor * chi.powi(n as i32);
    }
    let full = (1.0 - chi * chi) / PI * (-(1.0 - chi * chi) * w.norm_sqr()).exp();
    check_truncation(
        full,
        state.norm_sqr(),
        n_max,
        chi * w.norm(),
        "EPR projection",
    )?;

    let mut state = state.attenuate_coherent(params.eta())?;

    let amp = params.amplifier();
    for (n, c) in state.amplitudes_mut().iter_mut().enumerate() {
        *c *= amp.coefficient(n);
    }
    let kept = state.norm_sqr();

    let z = -params.effective_gain() * beta.conj();
    let out = state.displaced(z, n_max, lf);
    let reach = z.norm() + (amp.order() as f64).sqrt();
    check_truncation(kept, out.norm_sqr(), n_max, reach, "displacement")?;
    Ok(out)
}

fn check_truncation(
    exact: f64,
    truncated: f64,
    n_max: usize,
    amplitude: f64,
    what: &'static str,
) -> Result<()> {
    if exact > 0.0 && (exact - truncated) / exact > TRUNCATION_TOL {
        return Err(Error::CutoffTooSmall {
            n_max,
            suggested: required_cutoff(amplitude).max(n_max + 1),
            what,
        });
    }
    Ok(())
}
