//! Subcommand drivers. Each produces a [`Document`]; [`run`] renders it.

pub mod model;
pub mod spectral_map;
pub mod sweep;

pub use model::cmd_model;
pub use spectral_map::cmd_spectral_map;
pub use sweep::{cmd_sweep, sweep_events};

use crate::config::{CommandKind, Format, RunConfig};
use crate::error::{CliError, Result};
use crate::io::Document;
use crate::verify::{run_checks, ValidationReport, VerifyOptions};

/// Output of the data commands (everything except `verify`).
pub fn figure_data(cfg: &RunConfig) -> Result<Document> {
    match cfg.command {
        CommandKind::SpectralMap => cmd_spectral_map(cfg),
        CommandKind::Model => cmd_model(cfg),
        CommandKind::Sweep => cmd_sweep(cfg),
        CommandKind::Verify => Err(CliError::Usage("verify produces a report, not figure data".into())),
    }
}

pub fn verify_options(cfg: &RunConfig) -> VerifyOptions {
    VerifyOptions { only: cfg.only, scale: cfg.scale, fault: cfg.fault }
}

pub fn cmd_verify(cfg: &RunConfig) -> (Document, ValidationReport) {
    let opts = verify_options(cfg);
    let report = run_checks(&opts);
    (report.to_document(&opts), report)
}

/// Runs one command. Returns the rendered text (already written to `--out`
/// when given) and the exit code; a failed verification still writes its report.
pub fn run(cfg: &RunConfig) -> Result<(String, i32)> {
    let (doc, code) = match cfg.command {
        CommandKind::Verify => {
            let (doc, report) = cmd_verify(cfg);
            (doc, if report.passed() { 0 } else { 1 })
        }
        _ => (figure_data(cfg)?, 0),
    };
    let text = doc.render(cfg.format == Format::Json)?;
    if let Some(path) = &cfg.out {
        std::fs::write(path, &text)?;
    }
    Ok((text, code))
}
