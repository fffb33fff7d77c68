//! Data sets behind the figure, table and verification commands, and their
//! CSV encoding.
//!
//! Every CSV has a one-line header, rows in grid order, numbers printed with
//! 12 significant digits and `\n` line endings, so a fixed configuration
//! always produces identical bytes.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplifier::{AmplifierKind, AmplifierModel};
use crate::ec_link::{closed_form_n1, gain_tuned, link_metrics, EcParams, LinkMetrics};
use crate::error::{invalid, Error, Result};
use crate::optimizer::{
    max_fidelity_two_links, success_at_fixed_fidelity, ChiInterval, FixedFidelity, MaxFidelity,
};
use crate::oracle::{quadrature_metrics, QuadratureGrid};
use crate::radial::gaussian_moment;
use crate::repeater::{compose, ChainMetrics, FiberModel};

/// `%.12g`-style formatting.
pub fn fmt_num(x: f64) -> String {
    const SIG: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `start:stop:points:log|lin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    /// Effective transmissions 0.001 ..= 0.9, 60 log-spaced points.
    pub const DEFAULT: GridSpec = GridSpec {
        start: 0.001,
        stop: 0.9,
        points: 60,
        spacing: Spacing::Log,
    };

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.points - 1 {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::Usage(format!("grid `{s}` is not start:stop:points:log|lin"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let start: f64 = parts[0].parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].parse().map_err(|_| bad())?;
        let points: usize = parts[2].parse().map_err(|_| bad())?;
        let spacing = match parts[3] {
            "log" => Spacing::Log,
            "lin" => Spacing::Linear,
            _ => return Err(bad()),
        };
        if points == 0 {
            return Err(Error::Usage("grid needs at least one point".into()));
        }
        if !(start > 0.0 && start < 1.0) {
            return Err(invalid(
                "grid start",
                start,
                "transmissions must lie in (0, 1)",
            ));
        }
        if !(stop > 0.0 && stop < 1.0) {
            return Err(invalid(
                "grid stop",
                stop,
                "transmissions must lie in (0, 1)",
            ));
        }
        if stop < start {
            return Err(invalid("grid stop", stop, "stop must not be below start"));
        }
        Ok(Self {
            start,
            stop,
            points,
            spacing,
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
        };
        write!(
            f,
            "{}:{}:{}:{}",
            self.start, self.stop, self.points, spacing
        )
    }
}

fn csv<I: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: I) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Amplifier curves compared in the maximum-fidelity sweep.
pub const FIG3_MODELS: [(AmplifierKind, usize); 4] = [
    (AmplifierKind::Scissors, 1),
    (AmplifierKind::Scissors, 2),
    (AmplifierKind::Scissors, 3),
    (AmplifierKind::Optimal, 2),
];

/// Scissor counts compared in the fixed-fidelity sweep.
pub const FIG4_ORDERS: [usize; 3] = [1, 2, 3];

/// Maximum two-link fidelity per transmission and amplifier curve.
pub fn fig3(grid: &[f64], interval: ChiInterval) -> Result<Vec<MaxFidelity>> {
    let per_eta = grid
        .par_iter()
        .map(|&eta| {
            FIG3_MODELS
                .iter()
                .map(|&(kind, order)| max_fidelity_two_links(eta, kind, order, interval))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_eta.into_iter().flatten().collect())
}

pub fn fig3_csv(rows: &[MaxFidelity]) -> String {
    csv(
        &[
            "eta_eff",
            "kind",
            "N",
            "F_two_link_max",
            "argmax_chi",
            "P_at_argmax",
            "F_per_link",
        ],
        rows.iter().map(|r| {
            vec![
                fmt_num(r.eta),
                r.kind.to_string(),
                r.order.to_string(),
                fmt_num(r.two_link_fidelity()),
                fmt_num(r.at.chi),
                fmt_num(r.at.link.success_prob),
                fmt_num(r.at.link.fidelity),
            ]
        }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Row {
    pub eta: f64,
    pub kind: AmplifierKind,
    pub order: usize,
    pub outcome: FixedFidelity,
    /// Best achievable two-link fidelity at this transmission.
    pub max_two_link_fidelity: f64,
}

/// Success probability of two links held at a fixed composite fidelity.
pub fn fig4(
    grid: &[f64],
    kind: AmplifierKind,
    orders: &[usize],
    target: f64,
    interval: ChiInterval,
) -> Result<Vec<Fig4Row>> {
    let per_eta = grid
        .par_iter()
        .map(|&eta| {
            orders
                .iter()
                .map(|&order| {
                    let best = max_fidelity_two_links(eta, kind, order, interval)?;
                    let outcome = success_at_fixed_fidelity(eta, kind, order, target, interval)?;
                    Ok(Fig4Row {
                        eta,
                        kind,
                        order,
                        outcome,
                        max_two_link_fidelity: best.two_link_fidelity(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_eta.into_iter().flatten().collect())
}

pub fn fig4_csv(rows: &[Fig4Row]) -> String {
    csv(
        &[
            "eta_eff",
            "kind",
            "N",
            "status",
            "chi",
            "P",
            "F_two_link",
            "F_two_link_max",
        ],
        rows.iter().map(|r| {
            let (chi, p, f) = match r.outcome.point() {
                Some(at) => (
                    fmt_num(at.chi),
                    fmt_num(at.link.success_prob),
                    fmt_num(at.two_link_fidelity()),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            vec![
                fmt_num(r.eta),
                r.kind.to_string(),
                r.order.to_string(),
                r.outcome.status().to_string(),
                chi,
                p,
                f,
                fmt_num(r.max_two_link_fidelity),
            ]
        }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRow {
    pub eta: f64,
    pub chi: f64,
    pub gain: f64,
    pub link: LinkMetrics,
    pub chain: ChainMetrics,
}

/// Chain fidelity bound versus transmission at a fixed entanglement strength,
/// for each requested link count.
pub fn fig5(
    grid: &[f64],
    chi: f64,
    kind: AmplifierKind,
    order: usize,
    links: &[usize],
) -> Result<Vec<ChainRow>> {
    let per_eta = grid
        .par_iter()
        .map(|&eta| {
            let params = EcParams::tuned(eta, chi, kind, order)?;
            let link = link_metrics(&params)?;
            links
                .iter()
                .map(|&m| {
                    Ok(ChainRow {
                        eta,
                        chi,
                        gain: params.gain(),
                        link,
                        chain: compose(&link, m)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_eta.into_iter().flatten().collect())
}

pub fn fig5_csv(rows: &[ChainRow]) -> String {
    csv(
        &["eta_eff", "M", "F_link", "P_link", "F_M", "P_M"],
        rows.iter().map(|r| {
            vec![
                fmt_num(r.eta),
                r.chain.links.to_string(),
                fmt_num(r.link.fidelity),
                fmt_num(r.link.success_prob),
                fmt_num(r.chain.fidelity_bound),
                fmt_num(r.chain.success_prob),
            ]
        }),
    )
}

/// A per-link sweep with an explicit amplifier and optional fixed gain.
pub fn sweep(
    grid: &[f64],
    chi: f64,
    kind: AmplifierKind,
    order: usize,
    gain: Option<f64>,
    links: usize,
) -> Result<Vec<ChainRow>> {
    grid.par_iter()
        .map(|&eta| {
            let gain = match gain {
                Some(g) => g,
                None => gain_tuned(eta, chi)?,
            };
            let params = EcParams::new(eta, chi, AmplifierModel::new(kind, order, gain)?)?;
            let link = link_metrics(&params)?;
            Ok(ChainRow {
                eta,
                chi,
                gain,
                link,
                chain: compose(&link, links)?,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[ChainRow]) -> String {
    csv(
        &["eta", "chi", "gain", "F", "P", "lambda", "M", "F_M", "P_M"],
        rows.iter().map(|r| {
            vec![
                fmt_num(r.eta),
                fmt_num(r.chi),
                fmt_num(r.gain),
                fmt_num(r.link.fidelity),
                fmt_num(r.link.success_prob),
                fmt_num(r.link.effective_gain),
                r.chain.links.to_string(),
                fmt_num(r.chain.fidelity_bound),
                fmt_num(r.chain.success_prob),
            ]
        }),
    )
}

/// Acceptance band for a reported number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Band {
    Absolute(f64),
    Relative(f64),
    Factor(f64),
    Range(f64, f64),
}

impl Band {
    pub fn contains(&self, reference: f64, value: f64) -> bool {
        match *self {
            Band::Absolute(tol) => (value - reference).abs() <= tol,
            Band::Relative(tol) => (value - reference).abs() <= tol * reference.abs(),
            Band::Factor(k) => value >= reference / k && value <= reference * k,
            Band::Range(lo, hi) => (lo..=hi).contains(&value),
        }
    }
}

/// A reference (distance, fidelity, probability) point with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint {
    pub fidelity: f64,
    pub success_prob: f64,
    pub fidelity_band: Band,
    pub success_band: Band,
}

pub const TABLE1_DISTANCES_KM: [f64; 3] = [200.0, 400.0, 800.0];
pub const TABLE1_LINKS: [usize; 3] = [2, 4, 8];
pub const TABLE1_CHI: f64 = 0.1;

pub const TABLE1_ONE_SCISSOR: [ReferencePoint; 3] = [
    ReferencePoint {
        fidelity: 0.98,
        success_prob: 1e-3,
        fidelity_band: Band::Absolute(0.005),
        success_band: Band::Range(1.0e-3, 1.2e-3),
    },
    ReferencePoint {
        fidelity: 0.94,
        success_prob: 1.2e-6,
        fidelity_band: Band::Absolute(0.005),
        success_band: Band::Relative(0.1),
    },
    ReferencePoint {
        fidelity: 0.87,
        success_prob: 1.3e-9,
        fidelity_band: Band::Absolute(0.005),
        success_band: Band::Relative(0.1),
    },
];

pub const TABLE1_TWO_SCISSORS: [ReferencePoint; 3] = [
    ReferencePoint {
        fidelity: 0.99,
        success_prob: 1.1e-6,
        fidelity_band: Band::Absolute(0.01),
        success_band: Band::Factor(2.0),
    },
    ReferencePoint {
        fidelity: 0.98,
        success_prob: 1.2e-12,
        fidelity_band: Band::Absolute(0.01),
        success_band: Band::Factor(2.0),
    },
    ReferencePoint {
        fidelity: 0.97,
        success_prob: 1.3e-18,
        fidelity_band: Band::Absolute(0.01),
        success_band: Band::Factor(2.0),
    },
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCell {
    pub order: usize,
    pub chain: ChainMetrics,
    pub reference: ReferencePoint,
}

impl TableCell {
    pub fn fidelity_ok(&self) -> bool {
        self.reference
            .fidelity_band
            .contains(self.reference.fidelity, self.chain.fidelity_bound)
    }

    pub fn success_ok(&self) -> bool {
        self.reference
            .success_band
            .contains(self.reference.success_prob, self.chain.success_prob)
    }

    pub fn status(&self) -> &'static str {
        if self.fidelity_ok() && self.success_ok() {
            "ok"
        } else {
            "deviates"
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub distance_km: f64,
    pub links: usize,
    pub eta_link: f64,
    pub one_scissor: TableCell,
    pub two_scissors: TableCell,
}

/// Chains spanning 200, 400 and 800 km with equal 1/M segments, gain-tuned
/// at `chi`, for one and two scissors.
pub fn table1(fiber: &FiberModel, chi: f64) -> Result<Vec<TableRow>> {
    TABLE1_DISTANCES_KM
        .iter()
        .zip(TABLE1_LINKS)
        .enumerate()
        .map(|(i, (&distance_km, links))| {
            let eta_link = fiber.transmission(distance_km / links as f64)?;
            let cell = |order: usize, reference: ReferencePoint| -> Result<TableCell> {
                let params = EcParams::tuned(eta_link, chi, AmplifierKind::Scissors, order)?;
                let chain = compose(&link_metrics(&params)?, links)?;
                Ok(TableCell {
                    order,
                    chain,
                    reference,
                })
            };
            Ok(TableRow {
                distance_km,
                links,
                eta_link,
                one_scissor: cell(1, TABLE1_ONE_SCISSOR[i])?,
                two_scissors: cell(2, TABLE1_TWO_SCISSORS[i])?,
            })
        })
        .collect()
}

pub fn table1_csv(rows: &[TableRow]) -> String {
    let cell = |c: &TableCell| {
        vec![
            fmt_num(c.chain.fidelity_bound),
            fmt_num(c.chain.success_prob),
            fmt_num(c.reference.fidelity),
            fmt_num(c.reference.success_prob),
            c.status().to_string(),
        ]
    };
    csv(
        &[
            "distance_km",
            "M",
            "eta_link",
            "F_M_1qs",
            "P_M_1qs",
            "F_M_1qs_ref",
            "P_M_1qs_ref",
            "status_1qs",
            "F_M_2qs",
            "P_M_2qs",
            "F_M_2qs_ref",
            "P_M_2qs_ref",
            "status_2qs",
        ],
        rows.iter().map(|r| {
            let mut row = vec![
                fmt_num(r.distance_km),
                r.links.to_string(),
                fmt_num(r.eta_link),
            ];
            row.extend(cell(&r.one_scissor));
            row.extend(cell(&r.two_scissors));
            row
        }),
    )
}

/// Fixed-width text rendering of [`table1`].
pub fn render_table1(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>9} {:>3} {:>9} | {:>7} {:>10} {:>8} | {:>7} {:>10} {:>8}",
        "distance", "M", "eta_link", "F_M 1QS", "P_M 1QS", "", "F_M 2QS", "P_M 2QS", ""
    );
    for r in rows {
        let (a, b) = (&r.one_scissor, &r.two_scissors);
        let _ = writeln!(
            out,
            "{:>6} km {:>3} {:>9.3e} | {:>7.4} {:>10.3e} {:>8} | {:>7.4} {:>10.3e} {:>8}",
            r.distance_km,
            r.links,
            r.eta_link,
            a.chain.fidelity_bound,
            a.chain.success_prob,
            a.status(),
            b.chain.fidelity_bound,
            b.chain.success_prob,
            b.status(),
        );
    }
    out
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {}: {}", self.name, self.detail)
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Parameter sets used for the oracle comparison: every amplifier curve of
/// the sweep at three operating points.
pub fn oracle_cases() -> Result<Vec<EcParams>> {
    let mut cases = Vec::new();
    for &(kind, order) in &FIG3_MODELS {
        cases.push(EcParams::tuned(0.01, 0.1, kind, order)?);
        cases.push(EcParams::new(
            0.25,
            0.3,
            AmplifierModel::new(kind, order, 2.0)?,
        )?);
        cases.push(EcParams::tuned(0.1, 0.2, kind, order)?);
    }
    Ok(cases)
}

/// Engine versus closed forms versus brute-force oracle.
pub fn verify() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    let mut count = 0;
    for &eta in &[0.01, 0.1, 0.5, 0.9] {
        for &chi in &[0.05, 0.1, 0.3, 0.6] {
            for &g in &[0.5, 1.0, 3.0, 10.0, 31.6] {
                let p = EcParams::new(eta, chi, AmplifierModel::scissors(1, g)?)?;
                let e = link_metrics(&p)?;
                let c = closed_form_n1(&p)?;
                worst = worst
                    .max(rel_diff(e.fidelity, c.fidelity))
                    .max(rel_diff(e.success_prob, c.success_prob));
                count += 1;
            }
        }
    }
    checks.push(Check::new(
        "engine vs closed form",
        worst <= 1e-10,
        format!("{count} points, worst relative difference {worst:.2e} (limit 1e-10)"),
    ));

    let mut worst = 0.0f64;
    for &s in &[0.5, 1.0, 2.0] {
        let mut by_parts = std::f64::consts::PI / s;
        for k in 0..=12 {
            if k > 0 {
                by_parts *= k as f64 / s;
            }
            worst = worst.max(rel_diff(gaussian_moment(k, s), by_parts));
        }
    }
    checks.push(Check::new(
        "Gaussian moments",
        worst <= 1e-12,
        format!("k <= 12, s in {{0.5, 1, 2}}, worst relative difference {worst:.2e}"),
    ));

    let mut out_of_range = 0;
    for &eta in &[0.01, 0.1, 0.5, 0.9] {
        for &chi in &[0.05, 0.1, 0.3, 0.6] {
            for &g in &[0.5, 1.0, 3.0, 10.0, 31.6] {
                for &(kind, order) in &[
                    (AmplifierKind::Scissors, 1),
                    (AmplifierKind::Scissors, 2),
                    (AmplifierKind::Scissors, 3),
                    (AmplifierKind::Optimal, 1),
                    (AmplifierKind::Optimal, 2),
                    (AmplifierKind::Optimal, 3),
                ] {
                    let m = link_metrics(&EcParams::new(
                        eta,
                        chi,
                        AmplifierModel::new(kind, order, g)?,
                    )?)?;
                    if !(0.0..=1.0).contains(&m.fidelity) || !(0.0..=1.0).contains(&m.success_prob)
                    {
                        out_of_range += 1;
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        "bounds",
        out_of_range == 0,
        format!("{out_of_range} of 480 links outside [0, 1]"),
    ));

    let zero = Complex64::new(0.0, 0.0);
    let cases = oracle_cases()?;
    let mut worst = 0.0f64;
    for p in &cases {
        let q = quadrature_metrics(p, zero, &QuadratureGrid::covering(p, zero))?;
        let e = link_metrics(p)?;
        worst = worst
            .max(rel_diff(q.fidelity, e.fidelity))
            .max(rel_diff(q.success_prob, e.success_prob));
    }
    checks.push(Check::new(
        "oracle vs engine",
        worst <= 1e-6,
        format!(
            "{} parameter sets, worst relative difference {worst:.2e} (limit 1e-6)",
            cases.len()
        ),
    ));

    let shifted = Complex64::new(1.0, 0.5);
    let mut worst = 0.0f64;
    for p in cases.iter().step_by(4).take(3) {
        let a = quadrature_metrics(p, zero, &QuadratureGrid::covering(p, zero))?;
        let b = quadrature_metrics(p, shifted, &QuadratureGrid::covering(p, shifted))?;
        worst = worst
            .max((a.fidelity - b.fidelity).abs())
            .max((a.success_prob - b.success_prob).abs());
    }
    checks.push(Check::new(
        "alpha independence",
        worst <= 1e-6,
        format!("alpha = 0 vs 1+0.5i, worst difference {worst:.2e} (limit 1e-6)"),
    ));

    let mut worst = 0.0f64;
    for &p in &[0.9, 0.5, 1e-3] {
        for &m in &[2usize, 4, 8, 16] {
            let link = LinkMetrics {
                fidelity: 1.0,
                success_prob: p,
                effective_gain: 1.0,
            };
            let chain = compose(&link, m)?;
            worst = worst.max(rel_diff(chain.success_prob, (m as f64).powf(p.log2())));
        }
    }
    for &eta in &[0.001f64, 0.01, 0.25, 0.9] {
        for &chi in &[0.01, 0.1, 0.5] {
            let p = EcParams::tuned(eta, chi, AmplifierKind::Scissors, 1)?;
            worst = worst.max(rel_diff(p.effective_gain(), eta.powf(0.25)));
        }
    }
    checks.push(Check::new(
        "scaling laws",
        worst <= 1e-12,
        format!("P^log2(M) = M^log2(P) and lambda = eta^(1/4), worst {worst:.2e}"),
    ));

    Ok(checks)
}
