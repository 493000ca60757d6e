use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use susyd::deuteron::{self, DeuteronCalibration};
use susyd::hulthen::{self, HulthenPotential};
use susyd::solver::{self, RadialProblem};
use susyd::susy::{self, SusyPhase};
use susyd::verify::{self, Check};

use crate::config::{Command, Format, RunConfig};
use crate::gnuplot;
use crate::CliError;

pub const SCHEMA_VERSION: &str = "susyd.verify/1";

/// Text produced by a command, with the file name used under `--out`.
pub struct Output {
    pub file_name: String,
    pub body: String,
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command {
        Command::Calibrate => emit(cfg, calibrate(cfg)?),
        Command::Spectrum => emit(cfg, spectrum(cfg)?),
        Command::Partner => emit(cfg, partner(cfg)?),
        Command::Verify => {
            let (out, passed) = verify(cfg)?;
            emit(cfg, out)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::VerificationFailed)
            }
        }
        Command::Figures => figures(cfg),
    }
}

fn emit(cfg: &RunConfig, out: Output) -> Result<(), CliError> {
    match &cfg.output_dir {
        Some(dir) => {
            let path = write_file(dir, &out.file_name, &out.body)?;
            println!("{}", path.display());
            Ok(())
        }
        None => {
            print!("{}", out.body);
            Ok(())
        }
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, body).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// `quantity,value,unit` rows.
fn key_value_csv(rows: &[(&str, f64, &str)]) -> String {
    let mut out = String::from("quantity,value,unit\n");
    for (name, value, unit) in rows {
        writeln!(out, "{name},{value:.16e},{unit}").expect("writing to a String");
    }
    out
}

#[derive(Serialize)]
struct CalibrationOutput {
    binding_energy_mev: f64,
    binding_energy_uncertainty_mev: f64,
    alpha_fm: f64,
    energy_scale_mev: f64,
    #[serde(rename = "E_d")]
    e_d: f64,
    k_d: f64,
    k1: f64,
    #[serde(rename = "V0")]
    v0: f64,
    #[serde(rename = "V0_nocore")]
    v0_nocore: f64,
    strength_mev: f64,
    nocore_strength_mev: f64,
}

impl From<&DeuteronCalibration> for CalibrationOutput {
    fn from(c: &DeuteronCalibration) -> Self {
        Self {
            binding_energy_mev: c.binding_energy_mev,
            binding_energy_uncertainty_mev: c.binding_energy_uncertainty_mev,
            alpha_fm: c.alpha_fm,
            energy_scale_mev: c.energy_scale_mev,
            e_d: c.e_d,
            k_d: c.k_d,
            k1: c.k1,
            v0: c.v0,
            v0_nocore: c.v0_nocore,
            strength_mev: c.strength_mev,
            nocore_strength_mev: c.nocore_strength_mev,
        }
    }
}

fn calibrate(cfg: &RunConfig) -> Result<Output, CliError> {
    let cal = cfg.calibration()?;
    let body = match cfg.output_format {
        Format::Json => json(&CalibrationOutput::from(&cal)),
        Format::Csv => key_value_csv(&[
            ("binding_energy", cal.binding_energy_mev, "MeV"),
            ("binding_energy_uncertainty", cal.binding_energy_uncertainty_mev, "MeV"),
            ("alpha", cal.alpha_fm, "fm"),
            ("energy_scale", cal.energy_scale_mev, "MeV"),
            ("E_d", cal.e_d, "1"),
            ("k_d", cal.k_d, "1"),
            ("k1", cal.k1, "1"),
            ("V0", cal.v0, "1"),
            ("V0_nocore", cal.v0_nocore, "1"),
            ("strength", cal.strength_mev, "MeV"),
            ("nocore_strength", cal.nocore_strength_mev, "MeV"),
        ]),
    };
    Ok(Output {
        file_name: format!("calibration.{}", extension(cfg.output_format)),
        body,
    })
}

#[derive(Serialize)]
struct LevelRow {
    n: usize,
    energy: f64,
    energy_mev: f64,
    k: f64,
    nodes_expected: usize,
    oracle_energy: Option<f64>,
    oracle_nodes: Option<usize>,
    rel_error: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumOutput {
    strength: f64,
    energy_scale_mev: f64,
    bound_states: usize,
    oracle_levels: usize,
    grid_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_error: Option<String>,
    levels: Vec<LevelRow>,
}

fn spectrum(cfg: &RunConfig) -> Result<Output, CliError> {
    let v0 = cfg.strength()?;
    let units = cfg.units()?;
    let pot = HulthenPotential::new(v0)?;
    let count = hulthen::bound_state_count(v0);
    let window = verify::spectrum_window(v0);
    let solved = RadialProblem::for_window(&pot, window.1)
        .with_grid_points(cfg.grid_points)
        .and_then(|p| solver::solve_bound_states(&p, window, count + 1));
    let (oracle, oracle_error) = match solved {
        Ok(s) => (s.levels, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let levels = (1..=count)
        .map(|n| {
            let level = hulthen::eigenvalue(v0, n)?;
            let numeric = oracle.get(n - 1);
            Ok(LevelRow {
                n,
                energy: level.energy,
                energy_mev: units.to_mev(level.energy),
                k: level.k,
                nodes_expected: n - 1,
                oracle_energy: numeric.map(|l| l.energy),
                oracle_nodes: numeric.map(|l| l.nodes),
                rel_error: numeric.map(|l| ((l.energy - level.energy) / level.energy).abs()),
            })
        })
        .collect::<susyd::Result<Vec<_>>>()?;
    let out = SpectrumOutput {
        strength: v0,
        energy_scale_mev: units.energy_scale_mev,
        bound_states: count,
        oracle_levels: oracle.len(),
        grid_points: cfg.grid_points,
        oracle_error,
        levels,
    };
    let body = match cfg.output_format {
        Format::Json => json(&out),
        Format::Csv => deuteron::csv_table(
            &["n", "energy", "energy_mev", "k", "oracle_energy", "oracle_nodes", "rel_error"],
            out.levels.iter().map(|l| {
                vec![
                    l.n as f64,
                    l.energy,
                    l.energy_mev,
                    l.k,
                    l.oracle_energy.unwrap_or(f64::NAN),
                    l.oracle_nodes.map_or(f64::NAN, |n| n as f64),
                    l.rel_error.unwrap_or(f64::NAN),
                ]
            }),
        ),
    };
    Ok(Output {
        file_name: format!("spectrum.{}", extension(cfg.output_format)),
        body,
    })
}

#[derive(Serialize)]
struct PartnerOutput {
    strength: f64,
    kappa: f64,
    factorization_energy: f64,
    phase: SusyPhase,
    energy: f64,
    energy_mev: f64,
    prefactor_norm: f64,
    probability_beyond_one: f64,
    oracle_levels: usize,
    oracle_energies: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_error: Option<String>,
}

fn partner(cfg: &RunConfig) -> Result<Output, CliError> {
    let cal = cfg.calibration()?;
    let state = cal.partner_state()?;
    let w = state.superpotential;
    let phase = susy::classify_susy(cal.v0, w.factorization_energy())?;
    let window = (w.factorization_energy() - 1.0, -1e-6);
    let partner = w.partner_potential();
    let solved = RadialProblem::for_window(&partner, window.1)
        .with_grid_points(cfg.grid_points)
        .and_then(|p| solver::solve_bound_states(&p, window, 3));
    let (oracle_energies, oracle_error) = match solved {
        Ok(s) => (s.energies(), None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let out = PartnerOutput {
        strength: cal.v0,
        kappa: w.kappa(),
        factorization_energy: w.factorization_energy(),
        phase,
        energy: state.energy,
        energy_mev: cal.units().to_mev(state.energy),
        prefactor_norm: state.prefactor_norm,
        probability_beyond_one: deuteron::probability_beyond(&state, 1.0, cal.k_d),
        oracle_levels: oracle_energies.len(),
        oracle_energies,
        oracle_error,
    };
    let body = match cfg.output_format {
        Format::Json => json(&out),
        Format::Csv => {
            let mut rows = vec![
                ("V0", out.strength, "1"),
                ("kappa", out.kappa, "1"),
                ("factorization_energy", out.factorization_energy, "1"),
                ("energy", out.energy, "1"),
                ("energy_mev", out.energy_mev, "MeV"),
                ("prefactor_norm", out.prefactor_norm, "1"),
                ("probability_beyond_one", out.probability_beyond_one, "1"),
                ("oracle_levels", out.oracle_levels as f64, "1"),
            ];
            if let Some(&e) = out.oracle_energies.first() {
                rows.push(("oracle_energy", e, "1"));
            }
            key_value_csv(&rows)
        }
    };
    Ok(Output {
        file_name: format!("partner.{}", extension(cfg.output_format)),
        body,
    })
}

#[derive(Serialize)]
pub struct VerificationReport<'a> {
    pub schema_version: &'static str,
    pub config: &'a RunConfig,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn verify(cfg: &RunConfig) -> Result<(Output, bool), CliError> {
    // configuration errors are not failed checks
    let v0 = cfg.strength()?;
    let checks = verify::run_checks(v0, cfg.grid_points);
    let passed = checks.iter().all(|c| c.passed);
    let report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        config: cfg,
        checks,
        passed,
    };
    let body = match cfg.output_format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("name,analytic,oracle,abs_error,rel_error,tolerance,comparison,passed\n");
            for c in &report.checks {
                let comparison = serde_json::to_value(c.comparison).expect("unit enum serializes");
                writeln!(
                    out,
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
                    c.name,
                    c.analytic,
                    c.oracle,
                    c.abs_error,
                    c.rel_error,
                    c.tolerance,
                    comparison.as_str().unwrap_or_default(),
                    c.passed
                )
                .expect("writing to a String");
            }
            out
        }
    };
    Ok((
        Output {
            file_name: format!("verify.{}", extension(cfg.output_format)),
            body,
        },
        passed,
    ))
}

fn figures(cfg: &RunConfig) -> Result<(), CliError> {
    let cal = cfg.calibration()?;
    let fig1 = deuteron::figure1_data(&cal, &deuteron::figure1_samples())?;
    let fig2 = deuteron::figure2_data(&cal, &deuteron::figure2_samples())?;
    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let files = [
        ("figure1.csv", fig1.to_csv()),
        ("figure2.csv", fig2.to_csv()),
        ("figure1.gp", gnuplot::figure1("figure1.csv", cal.binding_energy_mev)),
        ("figure2.gp", gnuplot::figure2("figure2.csv")),
    ];
    for (name, body) in &files {
        let path = write_file(&dir, name, body)?;
        println!("{}", path.display());
    }
    Ok(())
}
