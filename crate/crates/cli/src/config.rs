//! Command-line arguments and the validated run configuration.

use crate::error::{CliError, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::str::FromStr;
use susy_dirac_core::composite::Fault;

#[derive(Debug, Parser)]
#[command(name = "susy-dirac", version, about = "Darboux-transformed Dirac operators and their composite Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Real-axis and contour data of the spectral map λ ↦ 𝔼±(λ)
    SpectralMap(CommonArgs),
    /// Potential components, bound-state table and missing-state densities
    Model(CommonArgs),
    /// α-sweep of composite levels and band edges with crossing and BIC events
    Sweep(CommonArgs),
    /// Run the validation checks and write a report
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    FreeParticle,
    PoschlTeller,
    CustomSeeds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Module {
    Darboux,
    Composite,
    Spectrum,
    Models,
    Cli,
}

impl Module {
    pub fn name(self) -> &'static str {
        match self {
            Module::Darboux => "darboux",
            Module::Composite => "composite",
            Module::Spectrum => "spectrum",
            Module::Models => "models",
            Module::Cli => "cli",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    /// Acceptance-level sample counts and grids
    Full,
    /// Reduced sample counts and a coarser grid
    Quick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InjectedFault {
    /// Flip one sign inside the composite rotation matrix
    RotationSign,
}

/// `A,B,N` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple(pub f64, pub f64, pub usize);

impl FromStr for Triple {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected A,B,N, got '{s}'"));
        }
        let a = parts[0].parse::<f64>().map_err(|e| format!("'{}': {e}", parts[0]))?;
        let b = parts[1].parse::<f64>().map_err(|e| format!("'{}': {e}", parts[1]))?;
        let n = parts[2].parse::<usize>().map_err(|e| format!("'{}': {e}", parts[2]))?;
        Ok(Triple(a, b, n))
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    /// Mass of the free particle
    #[arg(long)]
    pub m: Option<f64>,
    /// Factorization energy ε₁ (free particle: seed energy; custom seeds: lower energy)
    #[arg(long, allow_hyphen_values = true)]
    pub eps1: Option<f64>,
    /// Upper factorization energy (custom seeds)
    #[arg(long, allow_hyphen_values = true)]
    pub eps2: Option<f64>,
    #[arg(long)]
    pub u0: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, conflicts_with = "alpha_sweep")]
    pub alpha: Option<f64>,
    /// START,STOP,STEPS
    #[arg(long, value_name = "A,B,N")]
    pub alpha_sweep: Option<Triple>,
    /// XMIN,XMAX,N (x grid for model data, λ grid for spectral maps)
    #[arg(long, value_name = "XMIN,XMAX,N", allow_hyphen_values = true)]
    pub grid: Option<Triple>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Restrict verification to one module
    #[arg(long, value_enum)]
    pub only: Option<Module>,
    #[arg(long, value_enum, default_value = "full")]
    pub scale: Scale,
    #[arg(long, value_enum)]
    pub inject_fault: Option<InjectedFault>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    FreeParticle { m: f64, eps1: f64 },
    PoschlTeller { u0: f64, kappa: f64 },
    CustomSeeds { eps1: f64, eps2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Single(f64),
    Sweep { start: f64, stop: f64, steps: usize },
}

impl AlphaSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            AlphaSpec::Single(a) => vec![a],
            AlphaSpec::Sweep { start, stop, steps } => {
                (0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / (self.n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    SpectralMap,
    Model,
    Sweep,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::SpectralMap => "spectral-map",
            CommandKind::Model => "model",
            CommandKind::Sweep => "sweep",
            CommandKind::Verify => "verify",
        }
    }
}

/// Validated configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub model: ModelSpec,
    pub alpha: AlphaSpec,
    pub grid: GridSpec,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub only: Option<Module>,
    pub scale: Scale,
    pub fault: Fault,
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        match &cli.command {
            Command::SpectralMap(a) => Self::build(CommandKind::SpectralMap, a),
            Command::Model(a) => Self::build(CommandKind::Model, a),
            Command::Sweep(a) => Self::build(CommandKind::Sweep, a),
            Command::Verify(a) => Self::build(CommandKind::Verify, a),
        }
    }

    pub fn build(command: CommandKind, a: &CommonArgs) -> Result<Self> {
        let name = a.model.unwrap_or(match command {
            CommandKind::SpectralMap => ModelName::CustomSeeds,
            _ => ModelName::FreeParticle,
        });
        let model = match name {
            ModelName::FreeParticle => {
                let (m, eps1) = (a.m.unwrap_or(0.5), a.eps1.unwrap_or(0.2));
                if !(m > 0.0 && eps1 > 0.0 && eps1 < m) {
                    return usage(format!("free particle needs 0 < eps1 < m (m = {m}, eps1 = {eps1})"));
                }
                ModelSpec::FreeParticle { m, eps1 }
            }
            ModelName::PoschlTeller => {
                let (u0, kappa) = (a.u0.unwrap_or(1.0), a.kappa.unwrap_or(2.9));
                if !(u0 > 0.0 && kappa > 1.0 && kappa.is_finite()) {
                    return usage(format!("Pöschl-Teller needs u0 > 0 and kappa > 1 (u0 = {u0}, kappa = {kappa})"));
                }
                ModelSpec::PoschlTeller { u0, kappa }
            }
            ModelName::CustomSeeds => {
                let (eps1, eps2) = (a.eps1.unwrap_or(-2.0), a.eps2.unwrap_or(2.0));
                if !(eps1 < eps2) || !eps1.is_finite() || !eps2.is_finite() {
                    return usage(format!("custom seeds need eps1 < eps2 (eps1 = {eps1}, eps2 = {eps2})"));
                }
                if command == CommandKind::Model || command == CommandKind::Sweep {
                    return usage("model and sweep need a closed-form model (free-particle or poschl-teller)");
                }
                ModelSpec::CustomSeeds { eps1, eps2 }
            }
        };
        let alpha = match (a.alpha, a.alpha_sweep) {
            (Some(x), None) => AlphaSpec::Single(x),
            (None, Some(Triple(start, stop, steps))) => {
                if steps < 2 {
                    return usage("alpha sweep needs at least 2 steps");
                }
                AlphaSpec::Sweep { start, stop, steps }
            }
            (None, None) => match command {
                CommandKind::Sweep => AlphaSpec::Sweep { start: 0.0, stop: 0.99, steps: 100 },
                _ => AlphaSpec::Single(match model {
                    ModelSpec::PoschlTeller { .. } => 0.25,
                    _ => 0.5,
                }),
            },
            (Some(_), Some(_)) => return usage("--alpha and --alpha-sweep are exclusive"),
        };
        if alpha.values().iter().any(|&x| !(0.0..1.0).contains(&x)) {
            return usage("alpha must lie in [0, 1)");
        }
        if command == CommandKind::SpectralMap && matches!(alpha, AlphaSpec::Sweep { .. }) {
            return usage("spectral-map takes a single --alpha");
        }
        let grid = match a.grid {
            Some(Triple(x_min, x_max, n)) => {
                if !(x_min < x_max) || n < 2 {
                    return usage("grid needs XMIN < XMAX and N ≥ 2");
                }
                GridSpec { x_min, x_max, n }
            }
            None => match command {
                CommandKind::SpectralMap => GridSpec { x_min: -8.0, x_max: 8.0, n: 801 },
                _ => GridSpec { x_min: -10.0, x_max: 10.0, n: 401 },
            },
        };
        let fault = match a.inject_fault {
            Some(InjectedFault::RotationSign) => Fault::RotationSign,
            None => Fault::None,
        };
        Ok(RunConfig { command, model, alpha, grid, format: a.format, out: a.out.clone(), only: a.only, scale: a.scale, fault })
    }

    /// Factorization energies (ε₁, ε₂) of the configured model.
    pub fn factorization_energies(&self) -> (f64, f64) {
        match self.model {
            ModelSpec::FreeParticle { eps1, .. } => (-eps1, eps1),
            ModelSpec::PoschlTeller { u0, kappa } => (-u0 * (2.0 * kappa - 1.0).sqrt(), 0.0),
            ModelSpec::CustomSeeds { eps1, eps2 } => (eps1, eps2),
        }
    }

    /// The single α, or the first of a sweep.
    pub fn alpha_value(&self) -> f64 {
        self.alpha.values()[0]
    }
}
