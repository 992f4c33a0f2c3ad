//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};
use susy_dirac::config::{Module, Scale};
use susy_dirac::verify::{run_criterion, run_groups, groups, VerifyOptions};

const NAMES: [&str; 11] = [
    "intertwining on generalized eigenfunctions",
    "factorization identities",
    "two-velocity kinetic diagonalization",
    "golden rotated potentials",
    "Pöschl-Teller composite levels",
    "spectral map extrema, contours and coverage",
    "level crossings",
    "BIC critical couplings",
    "reflectionless free-particle partner",
    "Pöschl-Teller spectra and exclusions",
    "deterministic, schema-valid figure data",
];

fn budget(n: u8) -> Option<Duration> {
    match n {
        1 | 2 => Some(Duration::from_secs(5)),
        5 => Some(Duration::from_secs(120)),
        _ => None,
    }
}

/// The report itself is deterministic: two runs render identically.
fn report_is_reproducible() -> bool {
    let opts = VerifyOptions { only: Some(Module::Spectrum), scale: Scale::Quick, ..Default::default() };
    let render = || {
        let r = run_groups(&opts, &groups(&opts, None));
        (r.to_document(&opts).to_csv().ok(), r.to_document(&opts).to_json().ok())
    };
    let (a, b) = (render(), render());
    a.0.is_some() && a.1.is_some() && a == b
}

fn main() {
    let opts = VerifyOptions::default();
    let mut failures = 0;
    for n in 1..=11u8 {
        let t0 = Instant::now();
        let report = run_criterion(n, &opts);
        let mut ok = report.passed() && !report.checks.is_empty();
        if n == 11 {
            ok &= report_is_reproducible();
        }
        let dt = t0.elapsed();
        let slow = budget(n).is_some_and(|b| dt > b);
        ok &= !slow;
        let worst = report
            .checks
            .iter()
            .map(|c| if c.tolerance > 0.0 { c.residual / c.tolerance } else if c.residual == 0.0 { 0.0 } else { f64::INFINITY })
            .fold(0.0f64, f64::max);
        println!(
            "criterion {n:>2}: {} {} (worst residual/tol {worst:.3e}, {:.2?}{})",
            if ok { "PASS" } else { "FAIL" },
            NAMES[n as usize - 1],
            dt,
            if slow { ", over time budget" } else { "" }
        );
        for c in report.failed() {
            println!("    failed: {} residual {:e} tol {:e}", c.name, c.residual, c.tolerance);
        }
        if !ok {
            failures += 1;
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
