//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Tolerances and runtime limits are pinned here.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cv_repeater::optimizer::{max_fidelity_two_links, success_at_fixed_fidelity, ChiInterval};
use cv_repeater::oracle::{quadrature_metrics, QuadratureGrid};
use cv_repeater::report::GridSpec;
use cv_repeater::{
    closed_form_n1, compose, link_metrics, AmplifierKind, AmplifierModel, EcParams, LinkMetrics,
};
use num_complex::Complex64;

use AmplifierKind::{Optimal, Scissors};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome {
            passed: true,
            detail: summary,
        }
    } else {
        Outcome {
            passed: false,
            detail: format!("{summary}; {}", failures.join("; ")),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

const LINKS: [usize; 3] = [2, 4, 8];

fn table_column(order: usize) -> Vec<(usize, f64, f64)> {
    let params = EcParams::tuned(0.01, 0.1, Scissors, order).unwrap();
    let link = link_metrics(&params).unwrap();
    LINKS
        .iter()
        .map(|&m| {
            let c = compose(&link, m).unwrap();
            (m, c.fidelity_bound, c.success_prob)
        })
        .collect()
}

fn table_one_scissor() -> Outcome {
    // (F, F tolerance, P low, P high)
    let bands = [
        (0.98, 0.005, 1.0e-3, 1.2e-3),
        (0.94, 0.005, 1.2e-6 * 0.9, 1.2e-6 * 1.1),
        (0.87, 0.005, 1.3e-9 * 0.9, 1.3e-9 * 1.1),
    ];
    let mut failures = Vec::new();
    let mut cells = Vec::new();
    for ((m, f, p), (fr, ftol, plo, phi)) in table_column(1).into_iter().zip(bands) {
        cells.push(format!("M={m}: F={f:.4} P={p:.3e}"));
        if (f - fr).abs() > ftol {
            failures.push(format!("M={m} F={f:.5} outside {fr}+-{ftol}"));
        }
        if !(plo..=phi).contains(&p) {
            failures.push(format!("M={m} P={p:.4e} outside [{plo:.3e}, {phi:.3e}]"));
        }
    }
    outcome(failures, cells.join(", "))
}

fn table_two_scissors() -> Outcome {
    let refs = [(0.99, 1.1e-6), (0.98, 1.2e-12), (0.97, 1.3e-18)];
    let mut failures = Vec::new();
    let mut cells = Vec::new();
    for ((m, f, p), (fr, pr)) in table_column(2).into_iter().zip(refs) {
        cells.push(format!("M={m}: F={f:.4} P={p:.3e}"));
        if (f - fr).abs() > 0.01 {
            failures.push(format!(
                "M={m} F={f:.5} deviates from {fr}+-0.01 by {:.4}",
                (f - fr).abs() - 0.01
            ));
        }
        if !(pr / 2.0..=pr * 2.0).contains(&p) {
            failures.push(format!("M={m} P={p:.4e} not within a factor 2 of {pr:.1e}"));
        }
    }
    outcome(failures, cells.join(", "))
}

fn closed_form_regression() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut count = 0;
    for &eta in &[0.01, 0.1, 0.5, 0.9] {
        for &chi in &[0.05, 0.1, 0.3, 0.6] {
            for &g in &[0.5, 1.0, 3.0, 10.0, 31.6] {
                let p = EcParams::new(eta, chi, AmplifierModel::scissors(1, g).unwrap()).unwrap();
                let e = link_metrics(&p).unwrap();
                let c = closed_form_n1(&p).unwrap();
                let d = rel(e.fidelity, c.fidelity).max(rel(e.success_prob, c.success_prob));
                worst = worst.max(d);
                count += 1;
                if d > 1e-10 {
                    failures.push(format!("(eta={eta}, chi={chi}, g={g}) differs by {d:.2e}"));
                }
            }
        }
    }
    outcome(
        failures,
        format!("{count} points, worst relative difference {worst:.2e}"),
    )
}

fn oracle_sets() -> Vec<EcParams> {
    let mut sets = Vec::new();
    for (kind, order) in [(Scissors, 1), (Scissors, 2), (Scissors, 3), (Optimal, 2)] {
        sets.push(EcParams::tuned(0.01, 0.1, kind, order).unwrap());
        sets.push(
            EcParams::new(0.25, 0.3, AmplifierModel::new(kind, order, 2.0).unwrap()).unwrap(),
        );
        sets.push(EcParams::tuned(0.1, 0.2, kind, order).unwrap());
    }
    sets
}

fn oracle(p: &EcParams, alpha: Complex64) -> LinkMetrics {
    quadrature_metrics(p, alpha, &QuadratureGrid::covering(p, alpha)).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let zero = Complex64::new(0.0, 0.0);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let sets = oracle_sets();
    for p in &sets {
        let q = oracle(p, zero);
        let e = link_metrics(p).unwrap();
        let d = rel(q.fidelity, e.fidelity).max(rel(q.success_prob, e.success_prob));
        worst = worst.max(d);
        if d > 1e-6 {
            failures.push(format!(
                "{} eta={} chi={}: {d:.2e}",
                p.amplifier(),
                p.eta(),
                p.chi()
            ));
        }
    }
    outcome(
        failures,
        format!("{} sets, worst relative difference {worst:.2e}", sets.len()),
    )
}

fn fig3_orderings() -> Outcome {
    let interval = ChiInterval::default();
    let mut failures = Vec::new();
    let grid = GridSpec::DEFAULT.values();
    for &eta in &grid {
        let f = |kind, order| {
            max_fidelity_two_links(eta, kind, order, interval)
                .unwrap()
                .two_link_fidelity()
        };
        let (s1, s2, s3, o2) = (
            f(Scissors, 1),
            f(Scissors, 2),
            f(Scissors, 3),
            f(Optimal, 2),
        );
        for v in [s1, s2, s3, o2] {
            if !(0.0..=1.0).contains(&v) {
                failures.push(format!("eta={eta:.5}: value {v} outside [0, 1]"));
            }
        }
        if !(s3 >= s2 && s2 >= s1) {
            failures.push(format!("eta={eta:.5}: S1={s1:.6} S2={s2:.6} S3={s3:.6}"));
        }
        if o2 < s2 {
            failures.push(format!("eta={eta:.5}: O2={o2:.6} < S2={s2:.6}"));
        }
    }
    outcome(failures, format!("{} transmissions, 4 curves", grid.len()))
}

fn fig4_property() -> Outcome {
    let interval = ChiInterval::default();
    let target = 0.99;
    let mut failures = Vec::new();
    let grid = GridSpec::DEFAULT.values();
    let mut feasible = [0usize; 3];
    for &eta in &grid {
        let p: Vec<Option<f64>> = (1..=3)
            .map(|order| {
                success_at_fixed_fidelity(eta, Scissors, order, target, interval)
                    .unwrap()
                    .point()
                    .map(|at| at.link.success_prob)
            })
            .collect();
        for (i, v) in p.iter().enumerate() {
            if v.is_some() {
                feasible[i] += 1;
            }
        }
        for n in 0..2 {
            if p[n].is_some() && p[n + 1].is_none() {
                failures.push(format!(
                    "eta={eta:.5}: feasible for N={} but not N={}",
                    n + 1,
                    n + 2
                ));
            }
            if let (Some(a), Some(b)) = (p[n], p[n + 1]) {
                if b >= a {
                    failures.push(format!(
                        "eta={eta:.5}: P(N={})={a:.3e} <= P(N={})={b:.3e}",
                        n + 1,
                        n + 2
                    ));
                }
            }
        }
    }

    // round trip at the N=1 feasibility edge
    let edge = grid.iter().rev().find_map(|&eta| {
        success_at_fixed_fidelity(eta, Scissors, 1, target, interval)
            .unwrap()
            .point()
            .copied()
    });
    if let Some(at) = edge {
        let f = at.two_link_fidelity();
        if (f - target).abs() > 1e-8 {
            failures.push(format!("edge root reproduces F={f} (target {target})"));
        }
    }
    outcome(
        failures,
        format!(
            "feasible points for N=1,2,3: {feasible:?} of {}",
            grid.len()
        ),
    )
}

fn alpha_and_scaling() -> Outcome {
    let mut failures = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    let shifted = Complex64::new(1.0, 0.5);
    let sets = [
        EcParams::tuned(0.01, 0.1, Scissors, 1).unwrap(),
        EcParams::new(0.25, 0.3, AmplifierModel::scissors(2, 2.0).unwrap()).unwrap(),
        EcParams::tuned(0.1, 0.2, Optimal, 2).unwrap(),
    ];
    let mut worst_alpha = 0.0f64;
    for p in &sets {
        let (a, b) = (oracle(p, zero), oracle(p, shifted));
        let d = (a.fidelity - b.fidelity)
            .abs()
            .max((a.success_prob - b.success_prob).abs());
        worst_alpha = worst_alpha.max(d);
        if d > 1e-6 {
            failures.push(format!(
                "{} alpha shift changes F or P by {d:.2e}",
                p.amplifier()
            ));
        }
    }

    let mut worst_p = 0.0f64;
    for &p in &[0.9, 0.5, 1.1e-3, 1e-6] {
        for &m in &[2usize, 4, 8, 16, 32] {
            let link = LinkMetrics {
                fidelity: 1.0,
                success_prob: p,
                effective_gain: 1.0,
            };
            let got = compose(&link, m).unwrap().success_prob;
            let d = rel(got, (m as f64).powf(p.log2()));
            worst_p = worst_p.max(d);
            if d > 1e-12 {
                failures.push(format!("P={p} M={m}: {d:.2e}"));
            }
        }
    }

    let mut worst_lambda = 0.0f64;
    for &eta in &[1e-4f64, 0.001, 0.01, 0.25, 0.9] {
        for &chi in &[1e-3, 0.1, 0.5, 0.9] {
            let p = EcParams::tuned(eta, chi, Scissors, 1).unwrap();
            let d = rel(p.effective_gain(), eta.powf(0.25));
            worst_lambda = worst_lambda.max(d);
            if d > 1e-12 {
                failures.push(format!("eta={eta} chi={chi}: lambda off by {d:.2e}"));
            }
        }
    }
    outcome(
        failures,
        format!("alpha {worst_alpha:.2e}, P identity {worst_p:.2e}, lambda {worst_lambda:.2e}"),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "1 200/400/800 km chains, one scissor",
            Duration::from_secs(1),
            table_one_scissor,
        ),
        (
            "2 200/400/800 km chains, two scissors (chi = 0.1)",
            Duration::from_secs(5),
            table_two_scissors,
        ),
        (
            "3 closed-form regression",
            Duration::from_secs(1),
            closed_form_regression,
        ),
        (
            "4 oracle equivalence",
            Duration::from_secs(120),
            oracle_equivalence,
        ),
        (
            "5 maximum-fidelity orderings",
            Duration::from_secs(30),
            fig3_orderings,
        ),
        (
            "6 fixed-fidelity success ordering",
            Duration::from_secs(60),
            fig4_property,
        ),
        (
            "7 alpha independence and scaling laws",
            Duration::from_secs(30),
            alpha_and_scaling,
        ),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if elapsed > limit {
            result.passed = false;
            result.detail = format!("exceeded {:.0?} limit; {}", limit, result.detail);
        }
        if !result.passed {
            failed += 1;
        }
        println!(
            "{} #{name} ({:.3} s): {}",
            if result.passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            result.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
