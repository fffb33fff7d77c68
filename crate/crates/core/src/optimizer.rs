//! Entanglement-strength optimisation for two gain-tuned links.
//!
//! For a per-link transmission `eta` the gain follows `chi` through
//! [`gain_tuned`](crate::ec_link::gain_tuned), leaving `chi` as the only free
//! parameter. Two problems are solved over a `chi` interval:
//!
//! * the largest two-link fidelity `F^2` ([`max_fidelity_two_links`]),
//! * the success probability at which `F^2` hits a target
//!   ([`success_at_fixed_fidelity`]).
//!
//! Both start from a coarse log-spaced scan and refine by golden-section
//! search or bisection.

use crate::amplifier::AmplifierKind;
use crate::ec_link::{link_metrics, EcParams, LinkMetrics};
use crate::error::{invalid, Result};

pub const SCAN_POINTS: usize = 64;
pub const GOLDEN_TOL: f64 = 1e-9;
pub const ROOT_TOL: f64 = 1e-10;
/// Values within this of the optimum count as ties; the smallest `chi` wins.
pub const TIE_TOL: f64 = 1e-9;

/// Search interval for the entanglement strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiInterval {
    min: f64,
    max: f64,
}

impl Default for ChiInterval {
    fn default() -> Self {
        Self {
            min: 1e-6,
            max: 0.99,
        }
    }
}

impl ChiInterval {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min >= 1e-6) {
            return Err(invalid("chi_min", min, "must be at least 1e-6"));
        }
        if !(max <= 0.99) {
            return Err(invalid("chi_max", max, "must be at most 0.99"));
        }
        if !(min < max) {
            return Err(invalid("chi_min", min, "must be below chi_max"));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// `SCAN_POINTS` log-spaced values including both ends.
    pub fn scan(&self) -> Vec<f64> {
        let (lo, hi) = (self.min.ln(), self.max.ln());
        let last = SCAN_POINTS - 1;
        (0..SCAN_POINTS)
            .map(|i| match i {
                0 => self.min,
                i if i == last => self.max,
                i => (lo + (hi - lo) * i as f64 / last as f64).exp(),
            })
            .collect()
    }
}

/// Inputs of a sweep over effective transmissions.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub transmissions: Vec<f64>,
    pub models: Vec<(AmplifierKind, usize)>,
    pub chi: ChiInterval,
    pub target_fidelity: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for &eta in &self.transmissions {
            check_eta(eta)?;
        }
        for &(kind, order) in &self.models {
            crate::amplifier::AmplifierModel::new(kind, order, 1.0)?;
        }
        check_target(self.target_fidelity)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "eta",
            eta,
            "effective transmission must lie in (0, 1)",
        ))
    }
}

fn check_target(f: f64) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "target_fidelity",
            f,
            "target fidelity must lie in (0, 1)",
        ))
    }
}

/// A gain-tuned link evaluated at one entanglement strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunedPoint {
    pub chi: f64,
    pub gain: f64,
    pub link: LinkMetrics,
}

impl TunedPoint {
    /// Composite fidelity of two links in series.
    pub fn two_link_fidelity(&self) -> f64 {
        self.link.fidelity * self.link.fidelity
    }
}

pub fn tuned_point(eta: f64, kind: AmplifierKind, order: usize, chi: f64) -> Result<TunedPoint> {
    let params = EcParams::tuned(eta, chi, kind, order)?;
    Ok(TunedPoint {
        chi,
        gain: params.gain(),
        link: link_metrics(&params)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxFidelity {
    pub eta: f64,
    pub kind: AmplifierKind,
    pub order: usize,
    /// The maximising point; its `chi` is the argmax.
    pub at: TunedPoint,
}

impl MaxFidelity {
    pub fn two_link_fidelity(&self) -> f64 {
        self.at.two_link_fidelity()
    }
}

pub fn max_fidelity_two_links(
    eta: f64,
    kind: AmplifierKind,
    order: usize,
    interval: ChiInterval,
) -> Result<MaxFidelity> {
    check_eta(eta)?;
    let eval = |chi: f64| tuned_point(eta, kind, order, chi);

    let mut candidates = interval
        .scan()
        .into_iter()
        .map(eval)
        .collect::<Result<Vec<_>>>()?;
    let best = pick_max(&candidates);
    let lo = best.saturating_sub(1);
    let hi = (best + 1).min(candidates.len() - 1);
    let (chi, _) = golden_section_max(
        |c| {
            eval(c)
                .map(|p| p.two_link_fidelity())
                .unwrap_or(f64::NEG_INFINITY)
        },
        candidates[lo].chi,
        candidates[hi].chi,
        GOLDEN_TOL,
    );
    candidates.push(eval(chi)?);
    candidates.sort_by(|a, b| a.chi.total_cmp(&b.chi));
    let best = pick_max(&candidates);

    Ok(MaxFidelity {
        eta,
        kind,
        order,
        at: candidates[best],
    })
}

/// Index of the smallest-`chi` point within `TIE_TOL` of the maximum.
/// `points` must be sorted by `chi`.
fn pick_max(points: &[TunedPoint]) -> usize {
    let top = points
        .iter()
        .map(TunedPoint::two_link_fidelity)
        .fold(f64::NEG_INFINITY, f64::max);
    points
        .iter()
        .position(|p| p.two_link_fidelity() >= top - TIE_TOL)
        .expect("non-empty scan")
}

/// Outcome of the fixed-fidelity search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedFidelity {
    /// `F^2` equals the target at `at.chi`.
    Solved { at: TunedPoint },
    /// The target exceeds the best achievable two-link fidelity.
    Infeasible { max_two_link_fidelity: f64 },
    /// Even the largest allowed `chi` beats the target; reported at `chi_max`.
    Saturated { at: TunedPoint },
}

impl FixedFidelity {
    pub fn point(&self) -> Option<&TunedPoint> {
        match self {
            FixedFidelity::Solved { at } | FixedFidelity::Saturated { at } => Some(at),
            FixedFidelity::Infeasible { .. } => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            FixedFidelity::Solved { .. } => "ok",
            FixedFidelity::Infeasible { .. } => "infeasible",
            FixedFidelity::Saturated { .. } => "saturated",
        }
    }
}

pub fn success_at_fixed_fidelity(
    eta: f64,
    kind: AmplifierKind,
    order: usize,
    target: f64,
    interval: ChiInterval,
) -> Result<FixedFidelity> {
    check_target(target)?;
    let best = max_fidelity_two_links(eta, kind, order, interval)?;
    if best.two_link_fidelity() < target {
        return Ok(FixedFidelity::Infeasible {
            max_two_link_fidelity: best.two_link_fidelity(),
        });
    }

    let eval = |chi: f64| tuned_point(eta, kind, order, chi);
    let mut points = interval
        .scan()
        .into_iter()
        .map(eval)
        .collect::<Result<Vec<_>>>()?;
    points.push(best.at);
    points.sort_by(|a, b| a.chi.total_cmp(&b.chi));
    let excess = |p: &TunedPoint| p.two_link_fidelity() - target;

    if points.iter().all(|p| excess(p) >= 0.0) {
        let at = *points.last().expect("non-empty scan");
        return Ok(FixedFidelity::Saturated { at });
    }

    let mut roots = Vec::new();
    for pair in points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (ea, eb) = (excess(a), excess(b));
        if (ea >= 0.0) == (eb >= 0.0) {
            continue;
        }
        let chi = bisect_feasible(
            |c| eval(c).map(|p| excess(&p)).unwrap_or(f64::NEG_INFINITY),
            a.chi,
            b.chi,
            ea >= 0.0,
            ROOT_TOL,
        );
        roots.push(eval(chi)?);
    }
    // several crossings: keep the most probable one
    let at = roots
        .into_iter()
        .max_by(|a, b| a.link.success_prob.total_cmp(&b.link.success_prob))
        .expect("a sign change exists between the argmax and an infeasible point");
    Ok(FixedFidelity::Solved { at })
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Bisection on a sign change of `g` over `[a, b]`; returns the endpoint on
/// the `g >= 0` side once the bracket is narrower than `tol`.
pub fn bisect_feasible<G>(mut g: G, mut a: f64, mut b: f64, a_feasible: bool, tol: f64) -> f64
where
    G: FnMut(f64) -> f64,
{
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if (g(mid) >= 0.0) == a_feasible {
            a = mid;
        } else {
            b = mid;
        }
    }
    if a_feasible {
        a
    } else {
        b
    }
}
