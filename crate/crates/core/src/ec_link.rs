//! Fidelity and success probability of a single error-correction link.
//!
//! One link distributes a two-mode squeezed state through a lossy channel,
//! distils it with a noiseless linear amplifier and teleports the input
//! coherent state `|alpha>` through it. After dual-homodyne detection with
//! outcome `beta`, the heralded (un-normalised) output in the number basis is
//!
//! ```text
//! c_n(w) = sqrt((1 - chi^2)/pi) * exp(|w|^2 (chi^2 - 1 - eta chi^2) / 2)
//!          * t_n * (sqrt(eta) chi w)^n / sqrt(n!),       w = conj(beta) + alpha
//! ```
//!
//! followed by a displacement `D(-g sqrt(eta) chi conj(beta))`. Both the norm
//! and the squared overlap with the target `|g sqrt(eta) chi alpha>` depend on
//! `w` only through `|w|^2`, so each is a [`RadialPolyGaussian`] and integrates
//! exactly through Gaussian moments.

use std::f64::consts::PI;

use crate::amplifier::{factorial, AmplifierKind, AmplifierModel};
use crate::error::{invalid, Error, Result};
use crate::radial::RadialPolyGaussian;

/// Physical parameters of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcParams {
    eta: f64,
    chi: f64,
    amplifier: AmplifierModel,
}

impl EcParams {
    pub fn new(eta: f64, chi: f64, amplifier: AmplifierModel) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(invalid(
                "eta",
                eta,
                "channel transmission must lie in (0, 1]",
            ));
        }
        if !(0.0..1.0).contains(&chi) {
            return Err(invalid(
                "chi",
                chi,
                "entanglement strength must lie in [0, 1)",
            ));
        }
        Ok(Self {
            eta,
            chi,
            amplifier,
        })
    }

    /// Link with the amplifier gain fixed by [`gain_tuned`].
    pub fn tuned(eta: f64, chi: f64, kind: AmplifierKind, order: usize) -> Result<Self> {
        let gain = gain_tuned(eta, chi)?;
        Self::new(eta, chi, AmplifierModel::new(kind, order, gain)?)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn amplifier(&self) -> &AmplifierModel {
        &self.amplifier
    }

    pub fn gain(&self) -> f64 {
        self.amplifier.gain()
    }

    /// Amplitude `sqrt(eta) chi` carried by the lossy arm before amplification.
    pub fn arm_amplitude(&self) -> f64 {
        self.eta.sqrt() * self.chi
    }

    /// Target amplitude multiplier `lambda = g sqrt(eta) chi`.
    pub fn effective_gain(&self) -> f64 {
        self.gain() * self.arm_amplitude()
    }

    /// Decay exponent of the heralded-norm envelope, `1 - chi^2 (1 - eta)`.
    pub fn norm_decay(&self) -> f64 {
        1.0 - self.chi * self.chi * (1.0 - self.eta)
    }
}

/// Gain that maps a channel of transmission `eta` to effective transmission
/// `sqrt(eta)`: `g = eta^(-1/4) / chi`.
pub fn gain_tuned(eta: f64, chi: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid(
            "eta",
            eta,
            "channel transmission must lie in (0, 1]",
        ));
    }
    if chi == 0.0 {
        return Err(invalid(
            "chi",
            chi,
            "gain tuning diverges at zero entanglement",
        ));
    }
    if !(chi > 0.0 && chi < 1.0) {
        return Err(invalid(
            "chi",
            chi,
            "entanglement strength must lie in (0, 1)",
        ));
    }
    Ok(eta.powf(-0.25) / chi)
}

/// Fidelity, success probability and amplitude gain of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkMetrics {
    pub fidelity: f64,
    pub success_prob: f64,
    pub effective_gain: f64,
}

impl LinkMetrics {
    /// `lambda^2`, the power transmission seen by the teleported state.
    pub fn effective_transmission(&self) -> f64 {
        self.effective_gain * self.effective_gain
    }
}

/// Heralded norm `<psi|psi>` and squared target overlap as functions of `|w|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkIntegrands {
    pub norm: RadialPolyGaussian,
    pub overlap: RadialPolyGaussian,
}

pub fn output_coefficient_poly(params: &EcParams) -> Result<LinkIntegrands> {
    let chi2 = params.chi * params.chi;
    let arm = params.arm_amplitude();
    let lambda = params.effective_gain();
    let t = params.amplifier.coefficients();
    let scale = (1.0 - chi2) / PI;

    // |c_n|^2 = scale * t_n^2 arm^(2n) / n! * x^n * e^{-s x}
    let norm_coeffs: Vec<f64> = t
        .iter()
        .enumerate()
        .map(|(n, &tn)| tn * tn * arm.powi(2 * n as i32) / factorial(n))
        .collect();
    let norm_decay = params.norm_decay();
    let norm = RadialPolyGaussian::new("norm", scale, norm_decay, norm_coeffs)?;

    // <lambda w| sum_n c_n |n> = sqrt(scale) e^{-(s + lambda^2) x / 2} sum_n b_n x^n
    let b: Vec<f64> = t
        .iter()
        .enumerate()
        .map(|(n, &tn)| tn * (arm * lambda).powi(n as i32) / factorial(n))
        .collect();
    let mut squared = vec![0.0; 2 * b.len() - 1];
    for (i, bi) in b.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            squared[i + j] += bi * bj;
        }
    }
    let overlap_decay = norm_decay + lambda * lambda;
    let overlap = RadialPolyGaussian::new("overlap", scale, overlap_decay, squared)?;

    Ok(LinkIntegrands { norm, overlap })
}

/// Exact beta-averaged fidelity and success probability of one link.
///
/// The result does not depend on the input amplitude: the shift
/// `w = conj(beta) + alpha` absorbs it.
pub fn link_metrics(params: &EcParams) -> Result<LinkMetrics> {
    let LinkIntegrands { norm, overlap } = output_coefficient_poly(params)?;
    let success_prob = norm.integral();
    let fidelity = overlap.integral() / success_prob;
    Ok(LinkMetrics {
        // rounding can push an exact 1 one ulp over
        fidelity: fidelity.clamp(0.0, 1.0),
        success_prob: success_prob.clamp(0.0, 1.0),
        effective_gain: params.effective_gain(),
    })
}

/// Closed forms for a single quantum scissor.
pub fn closed_form_n1(params: &EcParams) -> Result<LinkMetrics> {
    let amp = params.amplifier();
    if amp.kind() != AmplifierKind::Scissors || amp.order() != 1 {
        return Err(Error::Usage(format!(
            "closed forms exist only for a single scissor, got {amp}"
        )));
    }
    let (eta, chi, g) = (params.eta, params.chi, amp.gain());
    let chi2 = chi * chi;
    let chi4 = chi2 * chi2;
    let g2 = g * g;
    let g4 = g2 * g2;

    let p = (1.0 - chi2) / (1.0 + g2) * (1.0 + (-1.0 + eta + g2 * eta) * chi2)
        / (1.0 + (-1.0 + eta) * chi2).powi(2);
    let f = (1.0 + (-1.0 + eta) * chi2).powi(2)
        * (1.0
            + 2.0 * (-1.0 + eta + 2.0 * g2 * eta) * chi2
            + (1.0 + eta * (-2.0 + 4.0 * g2 * (-1.0 + eta) + eta + 5.0 * g4 * eta)) * chi4)
        / (1.0 + (-1.0 + eta + g2 * eta) * chi2).powi(4);

    Ok(LinkMetrics {
        fidelity: f,
        success_prob: p,
        effective_gain: params.effective_gain(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn scissors(eta: f64, chi: f64, order: usize, g: f64) -> EcParams {
        EcParams::new(eta, chi, AmplifierModel::scissors(order, g).unwrap()).unwrap()
    }

    #[test]
    fn gain_tuning_arithmetic() {
        assert!(rel(gain_tuned(0.01, 0.1).unwrap(), 31.622776601683793) < 1e-14);
        assert!(rel(gain_tuned(0.25, 0.5).unwrap(), 2.8284271247461903) < 1e-14);
        let chi = 1.0 - 1e-12;
        assert!((gain_tuned(1.0, chi).unwrap() * chi - 1.0).abs() < 1e-15);
        let p = EcParams::tuned(0.01, 0.1, AmplifierKind::Scissors, 1).unwrap();
        assert!((p.effective_gain().powi(2) - 0.1).abs() < 1e-14);
    }

    #[test]
    fn gain_tuning_rejects_zero_entanglement() {
        assert!(matches!(
            gain_tuned(0.5, 0.0),
            Err(Error::InvalidParameter { name: "chi", .. })
        ));
        assert!(gain_tuned(0.0, 0.5).is_err());
        assert!(gain_tuned(1.5, 0.5).is_err());
    }

    #[test]
    fn params_validation() {
        let amp = AmplifierModel::scissors(1, 1.0).unwrap();
        assert!(EcParams::new(0.0, 0.1, amp).is_err());
        assert!(EcParams::new(1.0001, 0.1, amp).is_err());
        assert!(EcParams::new(0.5, 1.0, amp).is_err());
        assert!(EcParams::new(0.5, -0.1, amp).is_err());
        assert!(EcParams::new(1.0, 0.0, amp).is_ok());
    }

    #[test]
    fn single_scissor_norm_integrand_matches_closed_form() {
        let (eta, chi, g) = (0.3, 0.4, 2.5);
        let LinkIntegrands { norm, .. } =
            output_coefficient_poly(&scissors(eta, chi, 1, g)).unwrap();
        let c = (1.0 - chi * chi) / ((1.0 + g * g) * PI);
        assert!(rel(norm.scale() * norm.coeffs()[0], c) < 1e-14);
        assert!(rel(norm.scale() * norm.coeffs()[1], c * g * g * eta * chi * chi) < 1e-14);
        assert!(rel(norm.decay(), 1.0 - chi * chi + eta * chi * chi) < 1e-15);
    }

    #[test]
    fn zero_entanglement_is_vacuum_through_scissor() {
        for &g in &[0.5, 3.0, 31.6] {
            for &eta in &[0.01, 0.7, 1.0] {
                let m = link_metrics(&scissors(eta, 0.0, 1, g)).unwrap();
                assert_eq!(m.fidelity, 1.0);
                assert!(rel(m.success_prob, 1.0 / (1.0 + g * g)) < 1e-14);
            }
        }
    }

    #[test]
    fn table_one_link() {
        let p = EcParams::tuned(0.01, 0.1, AmplifierKind::Scissors, 1).unwrap();
        let m = link_metrics(&p).unwrap();
        // frozen from the closed forms
        assert!(rel(m.fidelity, 0.9901824352984427) < 1e-12);
        assert!(rel(m.success_prob, 0.0010997889092122907) < 1e-12);
        assert!(rel(m.fidelity.powi(2), 0.98) < 0.005);
    }

    #[test]
    fn engine_matches_closed_form_at_reference_point() {
        let p = scissors(0.25, 0.3, 1, 2.0);
        let engine = link_metrics(&p).unwrap();
        let closed = closed_form_n1(&p).unwrap();
        assert!(rel(engine.fidelity, closed.fidelity) < 1e-12);
        assert!(rel(engine.success_prob, closed.success_prob) < 1e-12);
        assert!(rel(closed.fidelity, 0.9910087497850691) < 1e-13);
        assert!(rel(closed.success_prob, 0.21401145699315022) < 1e-13);
    }

    #[test]
    fn closed_form_limits() {
        let g = 3.0;
        let m = closed_form_n1(&scissors(1.0, 1e-9, 1, g)).unwrap();
        assert!(rel(m.success_prob, 1.0 / (1.0 + g * g)) < 1e-12);
        assert!((m.fidelity - 1.0).abs() < 1e-12);

        let eta: f64 = 0.01;
        let limit = (1.0 + 4.0 * eta.sqrt() + 5.0 * eta) / (1.0 + eta.sqrt()).powi(4);
        assert!(rel(limit, 0.9903695103) < 1e-9);
        let p = EcParams::tuned(eta, 1e-6, AmplifierKind::Scissors, 1).unwrap();
        let m = closed_form_n1(&p).unwrap();
        assert!((m.fidelity - limit).abs() < 1e-9);
    }

    #[test]
    fn closed_form_requires_single_scissor() {
        let p = scissors(0.5, 0.2, 2, 1.0);
        assert!(matches!(closed_form_n1(&p), Err(Error::Usage(_))));
        let p = EcParams::new(0.5, 0.2, AmplifierModel::optimal(1, 1.0).unwrap()).unwrap();
        assert!(closed_form_n1(&p).is_err());
    }

    #[test]
    fn engine_matches_closed_form_on_grid() {
        for &eta in &[0.01, 0.1, 0.5, 0.9] {
            for &chi in &[0.05, 0.1, 0.3, 0.6] {
                for &g in &[0.5, 1.0, 3.0, 10.0, 31.6] {
                    let p = scissors(eta, chi, 1, g);
                    let e = link_metrics(&p).unwrap();
                    let c = closed_form_n1(&p).unwrap();
                    assert!(rel(e.fidelity, c.fidelity) < 1e-10, "{eta} {chi} {g}");
                    assert!(
                        rel(e.success_prob, c.success_prob) < 1e-10,
                        "{eta} {chi} {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn metrics_are_bounded_and_scissors_cost_probability() {
        for &eta in &[0.01, 0.1, 0.5, 0.9] {
            for &chi in &[0.05, 0.1, 0.3, 0.6] {
                for &g in &[0.5, 1.0, 3.0, 10.0, 31.6] {
                    let mut last_p = f64::INFINITY;
                    for order in 1..=3 {
                        for kind in [AmplifierKind::Scissors, AmplifierKind::Optimal] {
                            let amp = AmplifierModel::new(kind, order, g).unwrap();
                            let m = link_metrics(&EcParams::new(eta, chi, amp).unwrap()).unwrap();
                            assert!((0.0..=1.0).contains(&m.fidelity));
                            assert!((0.0..=1.0).contains(&m.success_prob));
                        }
                        let m = link_metrics(&scissors(eta, chi, order, g)).unwrap();
                        assert!(m.success_prob < last_p, "{eta} {chi} {g} N={order}");
                        last_p = m.success_prob;
                    }
                }
            }
        }
    }

    #[test]
    fn more_scissors_raise_tuned_fidelity() {
        let etas = (0..60).map(|i| 0.001 * (0.9f64 / 0.001).powf(i as f64 / 59.0));
        for eta in etas {
            for &chi in &[1e-6, 1e-3, 0.01, 0.1, 0.3, 0.6, 0.9] {
                let f: Vec<f64> = (1..=3)
                    .map(|n| {
                        let p = EcParams::tuned(eta, chi, AmplifierKind::Scissors, n).unwrap();
                        link_metrics(&p).unwrap().fidelity
                    })
                    .collect();
                assert!(f[2] >= f[1] && f[1] >= f[0], "eta={eta} chi={chi}: {f:?}");
            }
        }
    }

    /// Sum of `|c_n(w)|^2` evaluated with complex amplitudes, no reduction.
    fn unreduced_norm(p: &EcParams, alpha: Complex64, beta: Complex64) -> f64 {
        let w = beta.conj() + alpha;
        let chi2 = p.chi() * p.chi();
        let env =
            ((1.0 - chi2) / PI).sqrt() * (0.5 * w.norm_sqr() * (chi2 - 1.0 - p.eta() * chi2)).exp();
        (0..=p.amplifier().order())
            .map(|n| {
                let amp =
                    (w * p.arm_amplitude()).powu(n as u32) * env * p.amplifier().coefficient(n)
                        / factorial(n).sqrt();
                amp.norm_sqr()
            })
            .sum()
    }

    #[test]
    fn two_scissor_norm_matches_plane_quadrature() {
        let p = EcParams::new(0.01, 0.1, AmplifierModel::scissors(2, 31.623).unwrap()).unwrap();
        let alpha = Complex64::new(0.5, 0.0);
        let half = 8.0;
        let n = 321;
        let h = 2.0 * half / (n - 1) as f64;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let beta = Complex64::new(-half + i as f64 * h, -half + j as f64 * h);
                let wx = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                let wy = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                acc += wx * wy * unreduced_norm(&p, alpha, beta);
            }
        }
        let numeric = acc * h * h;
        let exact = output_coefficient_poly(&p).unwrap().norm.integral();
        assert!(rel(numeric, exact) < 1e-8, "{numeric} vs {exact}");
    }
}
