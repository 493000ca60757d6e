use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use susyd::deuteron::{self, DeuteronCalibration, PhysicalConstants, PhysicalUnits};
use susyd::solver::DEFAULT_GRID_POINTS;

#[derive(Debug, Parser)]
#[command(name = "susyd", version, about = "Hard-core deuteron from the supersymmetric partner of the Hulthén well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Calibrate the Hulthén strength to the deuteron binding energy.
    Calibrate,
    /// Analytic Hulthén levels next to the Numerov oracle.
    Spectrum,
    /// Superpotential, partner potential and its single bound state.
    Partner,
    /// Run the analytic-versus-oracle battery; exit 1 if any check fails.
    Verify,
    /// Write figure CSVs and gnuplot scripts.
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Binding energy in MeV (negative).
    #[arg(
        long,
        global = true,
        env = "SUSYD_BINDING_ENERGY_MEV",
        default_value_t = deuteron::DEUTERON_BINDING_ENERGY_MEV,
        allow_negative_numbers = true
    )]
    pub binding_energy_mev: f64,

    /// Range parameter alpha in fm.
    #[arg(long, global = true, env = "SUSYD_ALPHA_FM", default_value_t = deuteron::DEFAULT_ALPHA_FM)]
    pub alpha_fm: f64,

    /// Dimensionless Hulthén strength; overrides the calibration.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub strength_v0: Option<f64>,

    /// Points of the Numerov grid.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,

    #[arg(long = "format", global = true, value_enum, default_value_t = Format::Json)]
    pub output_format: Format,

    /// Output directory; stdout when absent (figures default to `.`).
    #[arg(long = "out", global = true, env = "SUSYD_OUT")]
    pub output_dir: Option<PathBuf>,
}

/// The resolved configuration, echoed in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub binding_energy_mev: f64,
    pub alpha_fm: f64,
    pub strength_v0: Option<f64>,
    pub grid_points: usize,
    pub output_format: Format,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let o = cli.options;
        Self {
            command: cli.command,
            binding_energy_mev: o.binding_energy_mev,
            alpha_fm: o.alpha_fm,
            strength_v0: o.strength_v0,
            grid_points: o.grid_points,
            output_format: o.output_format,
            output_dir: o.output_dir,
        }
    }

    pub fn units(&self) -> susyd::Result<PhysicalUnits> {
        PhysicalUnits::new(self.alpha_fm, &PhysicalConstants::CODATA)
    }

    /// Calibration from the binding energy, or the inverse chain when a
    /// strength is given. Both require the two-level domain `(4, 9)`.
    pub fn calibration(&self) -> susyd::Result<DeuteronCalibration> {
        let units = self.units()?;
        match self.strength_v0 {
            Some(v0) => deuteron::calibrate_from_strength(v0, &units),
            None => deuteron::calibrate_with(self.binding_energy_mev, &units),
        }
    }

    /// Strength used by commands that accept any positive well.
    pub fn strength(&self) -> susyd::Result<f64> {
        match self.strength_v0 {
            Some(v0) => {
                susyd::hulthen::HulthenPotential::new(v0)?;
                Ok(v0)
            }
            None => Ok(self.calibration()?.v0),
        }
    }
}
