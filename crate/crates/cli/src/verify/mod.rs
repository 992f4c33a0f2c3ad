//! Validation checks grouped by acceptance criterion, and the report.

mod checks;

use crate::config::{Module, Scale};
use crate::io::{Cell, Document, Kind, Table};
use rayon::prelude::*;
use susy_dirac_core::composite::Fault;

pub use checks::CRITERIA;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub only: Option<Module>,
    pub scale: Scale,
    pub fault: Fault,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { only: None, scale: Scale::Full, fault: Fault::None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub module: Module,
    pub name: String,
    /// The identity or claim being checked.
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(criterion: u8, module: Module, name: &str, anchor: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            criterion,
            module,
            name: name.to_string(),
            anchor: anchor.to_string(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
        }
    }
}

/// One block of checks: the criterion it belongs to and its module.
pub struct Group {
    pub criterion: u8,
    pub module: Module,
    pub run: fn(&VerifyOptions) -> Vec<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_document(&self, opts: &VerifyOptions) -> Document {
        let mut d = Document::new("verify");
        d.param("only", opts.only.map(Module::name).unwrap_or("all"));
        d.param("scale", if opts.scale == Scale::Full { "full" } else { "quick" });
        d.param("fault", if opts.fault == Fault::None { "none" } else { "rotation-sign" });
        d.param("passed", self.passed());
        let mut t = Table::new(
            "checks",
            &[
                ("criterion", Kind::Num),
                ("module", Kind::Text),
                ("name", Kind::Text),
                ("anchor", Kind::Text),
                ("residual", Kind::Num),
                ("tolerance", Kind::Num),
                ("passed", Kind::Text),
            ],
        );
        for c in &self.checks {
            t.push(vec![
                Cell::Num(c.criterion as f64),
                c.module.name().into(),
                c.name.clone().into(),
                c.anchor.clone().into(),
                c.residual.into(),
                c.tolerance.into(),
                c.passed.into(),
            ]);
        }
        d.tables.push(t);
        d
    }
}

/// Groups selected by `opts.only` and, when given, by criterion number.
pub fn groups(opts: &VerifyOptions, criterion: Option<u8>) -> Vec<&'static Group> {
    CRITERIA
        .iter()
        .filter(|g| opts.only.is_none_or(|m| g.module == m))
        .filter(|g| criterion.is_none_or(|c| g.criterion == c))
        .collect()
}

/// Runs the selected groups in parallel; checks keep registry order.
pub fn run_groups(opts: &VerifyOptions, gs: &[&Group]) -> ValidationReport {
    let parts: Vec<Vec<Check>> = gs.par_iter().map(|g| (g.run)(opts)).collect();
    ValidationReport { checks: parts.into_iter().flatten().collect() }
}

pub fn run_checks(opts: &VerifyOptions) -> ValidationReport {
    run_groups(opts, &groups(opts, None))
}

/// Checks of one acceptance criterion (all modules).
pub fn run_criterion(n: u8, opts: &VerifyOptions) -> ValidationReport {
    run_groups(opts, &groups(opts, Some(n)))
}
