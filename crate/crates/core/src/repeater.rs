//! Concatenated repeater built from identical error-correction links.
//!
//! `M = 2^k` links span a channel of physical transmission `eta^M`; nesting
//! `k - 1` levels of error correction keeps the effective transmission at
//! `eta`. With identical links of fidelity `F` and success probability `P`:
//!
//! * `P_M = P^(log2 M)` (memories let links at one level herald in parallel),
//! * `F_M >= F^(2 (M - 1))`.

use crate::ec_link::{link_metrics, EcParams, LinkMetrics};
use crate::error::{invalid, Error, Result};

/// Composed end-to-end figures of a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainMetrics {
    pub links: usize,
    /// Concatenation depth `k - 1`; zero for a bare link.
    pub levels: u32,
    pub fidelity_bound: f64,
    pub success_prob: f64,
    /// Effective power transmission of the whole chain. Each level restores
    /// the per-pair value, so for `M >= 2` this is `lambda^4` (two top-level
    /// segments in series), which equals the per-link `eta` when tuned.
    pub effective_transmission: f64,
}

pub fn compose(link: &LinkMetrics, links: usize) -> Result<ChainMetrics> {
    if links == 0 || !links.is_power_of_two() {
        return Err(Error::Usage(format!(
            "link count must be a power of two, got {links}"
        )));
    }
    for (name, v) in [
        ("fidelity", link.fidelity),
        ("success_prob", link.success_prob),
    ] {
        if !(0.0..=1.0).contains(&v) {
            return Err(invalid(name, v, "per-link figures must lie in [0, 1]"));
        }
    }
    if links == 1 {
        return Ok(ChainMetrics {
            links,
            levels: 0,
            fidelity_bound: link.fidelity,
            success_prob: link.success_prob,
            effective_transmission: link.effective_transmission(),
        });
    }
    let k = links.trailing_zeros();
    Ok(ChainMetrics {
        links,
        levels: k - 1,
        fidelity_bound: link.fidelity.powi(2 * (links as i32 - 1)),
        success_prob: link.success_prob.powi(k as i32),
        effective_transmission: link.effective_transmission().powi(2),
    })
}

/// `M` identical links and their composed metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeaterChain {
    pub per_link: EcParams,
    pub link: LinkMetrics,
    pub composed: ChainMetrics,
}

impl RepeaterChain {
    pub fn new(per_link: EcParams, links: usize) -> Result<Self> {
        let link = link_metrics(&per_link)?;
        let composed = compose(&link, links)?;
        Ok(Self {
            per_link,
            link,
            composed,
        })
    }

    pub fn links(&self) -> usize {
        self.composed.links
    }

    /// End-to-end physical transmission `eta^M`.
    pub fn physical_transmission(&self) -> f64 {
        self.per_link.eta().powi(self.links() as i32)
    }
}

/// Attenuation consistent with `eta = 0.01` after roughly 100 km.
pub const DEFAULT_ATTENUATION_DB_PER_KM: f64 = 0.2;

/// The 0.02 dB/km figure sometimes quoted next to that 100 km anchor. It is a
/// factor of ten off (0.01 would need ~1000 km), kept for overrides.
pub const LOW_LOSS_ATTENUATION_DB_PER_KM: f64 = 0.02;

/// Exponential fibre loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberModel {
    attenuation_db_per_km: f64,
}

impl Default for FiberModel {
    fn default() -> Self {
        Self {
            attenuation_db_per_km: DEFAULT_ATTENUATION_DB_PER_KM,
        }
    }
}

impl FiberModel {
    pub fn new(attenuation_db_per_km: f64) -> Result<Self> {
        if !(attenuation_db_per_km > 0.0) || !attenuation_db_per_km.is_finite() {
            return Err(invalid(
                "attenuation",
                attenuation_db_per_km,
                "attenuation must be a positive number of dB per km",
            ));
        }
        Ok(Self {
            attenuation_db_per_km,
        })
    }

    pub fn attenuation_db_per_km(&self) -> f64 {
        self.attenuation_db_per_km
    }

    pub fn transmission(&self, km: f64) -> Result<f64> {
        if !(km >= 0.0) || !km.is_finite() {
            return Err(invalid(
                "distance",
                km,
                "distance must be finite and non-negative",
            ));
        }
        Ok(10f64.powf(-self.attenuation_db_per_km * km / 10.0))
    }

    pub fn distance(&self, transmission: f64) -> Result<f64> {
        if !(transmission > 0.0 && transmission <= 1.0) {
            return Err(invalid(
                "transmission",
                transmission,
                "transmission must lie in (0, 1]",
            ));
        }
        Ok(-10.0 * transmission.log10() / self.attenuation_db_per_km)
    }
}
