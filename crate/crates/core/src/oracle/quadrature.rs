use num_complex::Complex64;
use rayon::prelude::*;

use super::fock::{required_cutoff, FockVector, LnFactorials};
use super::{simulate_with, DEFAULT_N_MAX};
use crate::ec_link::{EcParams, LinkMetrics};
use crate::error::{Error, Result};

/// Gaussian mass allowed outside the grid.
pub const TAIL_TOL: f64 = 1e-12;

/// Square trapezoid grid over `(Re beta, Im beta)` centred on the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub points: usize,
    pub n_max: usize,
}

impl QuadratureGrid {
    pub const DEFAULT_POINTS: usize = 201;

    /// Grid wide enough for the envelope `exp(-s |conj(beta) + alpha|^2)`:
    /// half-width `8 / sqrt(s)` plus the shift `|alpha|`, and a cutoff that
    /// holds the displaced output at the grid corners.
    pub fn covering(params: &EcParams, alpha: Complex64) -> Self {
        let half_width = 8.0 / params.norm_decay().sqrt() + alpha.norm();
        let corner = std::f64::consts::SQRT_2 * half_width;
        let reach = (params.effective_gain() * corner + (params.amplifier().order() as f64).sqrt())
            .max(params.chi() * (corner + alpha.norm()));
        Self {
            half_width,
            points: Self::DEFAULT_POINTS,
            n_max: required_cutoff(reach).max(DEFAULT_N_MAX),
        }
    }

    pub fn with_points(self, points: usize) -> Self {
        Self { points, ..self }
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// Upper bound on the envelope (times its polynomial) beyond the grid edge.
    fn tail_bound(&self, params: &EcParams, alpha: Complex64) -> f64 {
        let gap = self.half_width - alpha.norm();
        if gap <= 0.0 {
            return f64::INFINITY;
        }
        let sx = params.norm_decay() * gap * gap;
        let poly = sx.powi(params.amplifier().order() as i32).max(1.0);
        poly * (-sx).exp()
    }

    fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.step()
    }

    fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.points {
            0.5
        } else {
            1.0
        }
    }
}

/// Fidelity and success probability by direct integration of simulated
/// outputs over the measurement outcome.
pub fn quadrature_metrics(
    params: &EcParams,
    alpha: Complex64,
    grid: &QuadratureGrid,
) -> Result<LinkMetrics> {
    if grid.points < 3 {
        return Err(Error::Usage(
            "quadrature needs at least 3 points per axis".into(),
        ));
    }
    let tail = grid.tail_bound(params, alpha);
    if tail > TAIL_TOL {
        return Err(Error::GridTooNarrow {
            tail,
            tolerance: TAIL_TOL,
        });
    }

    let lf = LnFactorials::new(grid.n_max);
    let target = FockVector::coherent(alpha * params.effective_gain(), grid.n_max, &lf);

    // rows are summed independently, then reduced in index order
    let rows = (0..grid.points)
        .into_par_iter()
        .map(|i| {
            let re = grid.coordinate(i);
            let mut norm = 0.0;
            let mut overlap = 0.0;
            for j in 0..grid.points {
                let beta = Complex64::new(re, grid.coordinate(j));
                let out = simulate_with(params, alpha, beta, grid.n_max, &lf)?;
                let w = grid.weight(i) * grid.weight(j);
                norm += w * out.norm_sqr();
                overlap += w * target.inner(&out).norm_sqr();
            }
            Ok((norm, overlap))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;

    let area = grid.step() * grid.step();
    let (norm, overlap) = rows
        .iter()
        .fold((0.0, 0.0), |(n, o), &(rn, ro)| (n + rn, o + ro));
    let success_prob = norm * area;
    Ok(LinkMetrics {
        fidelity: overlap * area / success_prob,
        success_prob,
        effective_gain: params.effective_gain(),
    })
}
