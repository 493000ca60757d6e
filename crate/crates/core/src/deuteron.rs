//! Physical units and the deuteron case study.
//!
//! The measured binding energy fixes the excited Hulthén level
//! `E_2 = -((V0 - 4)/4)^2`, so `k_d = sqrt(-E_d)`, `V0 = 4 k_d + 4` and
//! `k_1 = (4 k_d + 3)/2`. The partner of that well then binds a single state
//! exactly at `E_d`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::grid::{integrate, Grid};
use crate::hulthen::{self, BoundState, HulthenPotential};
use crate::potential::Potential;
use crate::susy::{self, PartnerState, Superpotential};
use crate::wavefunction::WaveFunction;

/// Measured deuteron binding energy in MeV.
pub const DEUTERON_BINDING_ENERGY_MEV: f64 = -2.224_566_14;
/// Reported uncertainty of the binding energy in MeV, passed through only.
pub const DEUTERON_BINDING_ENERGY_UNCERTAINTY_MEV: f64 = 0.000_000_41;
pub const DEFAULT_ALPHA_FM: f64 = 3.0;

/// Samples and range of the potential plot.
pub const FIGURE1_RANGE: (f64, f64) = (0.01, 8.0);
/// Samples and range of the density plot.
pub const FIGURE2_RANGE: (f64, f64) = (0.01, 16.0);
pub const FIGURE_SAMPLES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// hbar c in MeV fm.
    pub hbar_c: f64,
    /// Proton rest energy in MeV.
    pub proton_mass: f64,
}

impl PhysicalConstants {
    pub const CODATA: Self = Self {
        hbar_c: 197.326_980_4,
        proton_mass: 938.272_088_16,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Range `alpha` and the energy unit `hbar^2 / (alpha^2 m_p)` (`2 mu = m_p`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalUnits {
    pub alpha_fm: f64,
    pub energy_scale_mev: f64,
}

impl PhysicalUnits {
    pub fn new(alpha_fm: f64, constants: &PhysicalConstants) -> Result<Self> {
        Ok(Self {
            alpha_fm,
            energy_scale_mev: energy_scale_with(alpha_fm, constants)?,
        })
    }

    pub fn to_mev(&self, dimensionless: f64) -> f64 {
        dimensionless * self.energy_scale_mev
    }

    pub fn to_dimensionless(&self, mev: f64) -> f64 {
        mev / self.energy_scale_mev
    }

    pub fn radius_fm(&self, x: f64) -> f64 {
        x * self.alpha_fm
    }
}

pub fn energy_scale_with(alpha_fm: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure(alpha_fm > 0.0 && alpha_fm.is_finite(), "alpha_fm", alpha_fm, "must be positive")?;
    ensure(constants.hbar_c > 0.0, "hbar_c", constants.hbar_c, "must be positive")?;
    ensure(constants.proton_mass > 0.0, "proton_mass", constants.proton_mass, "must be positive")?;
    Ok(constants.hbar_c * constants.hbar_c / (alpha_fm * alpha_fm * constants.proton_mass))
}

/// `(hbar c)^2 / (alpha^2 m_p c^2)` in MeV with CODATA constants.
pub fn energy_scale(alpha_fm: f64) -> Result<f64> {
    energy_scale_with(alpha_fm, &PhysicalConstants::CODATA)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeuteronCalibration {
    pub binding_energy_mev: f64,
    pub binding_energy_uncertainty_mev: f64,
    pub alpha_fm: f64,
    pub energy_scale_mev: f64,
    /// Dimensionless binding energy.
    pub e_d: f64,
    pub k_d: f64,
    pub k1: f64,
    /// Dimensionless strength of the hard-core input well.
    pub v0: f64,
    /// Dimensionless strength `2 k_d + 1` of the no-core well.
    pub v0_nocore: f64,
    pub strength_mev: f64,
    pub nocore_strength_mev: f64,
}

impl DeuteronCalibration {
    pub fn units(&self) -> PhysicalUnits {
        PhysicalUnits {
            alpha_fm: self.alpha_fm,
            energy_scale_mev: self.energy_scale_mev,
        }
    }

    pub fn hulthen(&self) -> HulthenPotential {
        HulthenPotential::new(self.v0).expect("calibrated strength is positive")
    }

    pub fn nocore_hulthen(&self) -> HulthenPotential {
        HulthenPotential::new(self.v0_nocore).expect("calibrated strength is positive")
    }

    pub fn superpotential(&self) -> Superpotential {
        Superpotential::from_strength(self.v0).expect("calibrated strength exceeds 4")
    }

    pub fn partner_state(&self) -> Result<PartnerState> {
        susy::partner_state(self.v0)
    }

    /// Ground state of the no-core well, bound at `E_d`.
    pub fn nocore_state(&self) -> Result<BoundState> {
        hulthen::eigenfunction(self.v0_nocore, 1)
    }

    /// `V0 / V0_nocore`.
    pub fn strength_ratio(&self) -> f64 {
        self.v0 / self.v0_nocore
    }
}

pub fn calibrate_with(binding_energy_mev: f64, units: &PhysicalUnits) -> Result<DeuteronCalibration> {
    ensure(
        binding_energy_mev < 0.0 && binding_energy_mev.is_finite(),
        "binding_energy_mev",
        binding_energy_mev,
        "must be negative",
    )?;
    let e_d = units.to_dimensionless(binding_energy_mev);
    let k_d = (-e_d).sqrt();
    let v0 = 4.0 * k_d + 4.0;
    if !(v0 > 4.0 && v0 < 9.0) {
        return Err(Error::OutsideTwoLevelDomain { strength: v0 });
    }
    let v0_nocore = 2.0 * k_d + 1.0;
    Ok(DeuteronCalibration {
        binding_energy_mev,
        binding_energy_uncertainty_mev: DEUTERON_BINDING_ENERGY_UNCERTAINTY_MEV,
        alpha_fm: units.alpha_fm,
        energy_scale_mev: units.energy_scale_mev,
        e_d,
        k_d,
        k1: (4.0 * k_d + 3.0) / 2.0,
        v0,
        v0_nocore,
        strength_mev: units.to_mev(v0),
        nocore_strength_mev: units.to_mev(v0_nocore),
    })
}

/// Calibration with CODATA constants.
pub fn calibrate(binding_energy_mev: f64, alpha_fm: f64) -> Result<DeuteronCalibration> {
    let units = PhysicalUnits::new(alpha_fm, &PhysicalConstants::CODATA)?;
    calibrate_with(binding_energy_mev, &units)
}

/// Inverse chain for an explicitly chosen strength: `k_d = (V0 - 4) / 4`,
/// and the binding energy follows from `E_d = -k_d^2`.
pub fn calibrate_from_strength(strength: f64, units: &PhysicalUnits) -> Result<DeuteronCalibration> {
    if !(strength > 4.0 && strength < 9.0) {
        return Err(Error::OutsideTwoLevelDomain { strength });
    }
    let k_d = (strength - 4.0) / 4.0;
    let mut cal = calibrate_with(units.to_mev(-k_d * k_d), units)?;
    // keep the strength exactly as given rather than round-tripped
    cal.v0 = strength;
    cal.k_d = k_d;
    cal.e_d = -k_d * k_d;
    cal.k1 = (strength - 1.0) / 2.0;
    cal.v0_nocore = 2.0 * k_d + 1.0;
    cal.strength_mev = units.to_mev(strength);
    cal.nocore_strength_mev = units.to_mev(cal.v0_nocore);
    Ok(cal)
}

/// Uniform samples on `[lo, hi]`.
pub fn uniform_samples(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    ensure(count >= 3, "count", count as f64, "need at least 3 samples")?;
    Ok(Grid::uniform(lo, hi, count - 1)?.points().collect())
}

pub fn figure1_samples() -> Vec<f64> {
    uniform_samples(FIGURE1_RANGE.0, FIGURE1_RANGE.1, FIGURE_SAMPLES).expect("valid range")
}

pub fn figure2_samples() -> Vec<f64> {
    uniform_samples(FIGURE2_RANGE.0, FIGURE2_RANGE.1, FIGURE_SAMPLES).expect("valid range")
}

fn csv_number(out: &mut String, v: f64) {
    // 17 significant digits round-trip any f64
    write!(out, "{v:.16e}").expect("writing to a String");
}

/// Header row plus one line per row, every value with 17 significant digits.
pub fn csv_table(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            csv_number(&mut out, *v);
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure1Row {
    pub r_fm: f64,
    pub hulthen_mev: f64,
    pub partner_mev: f64,
    pub nocore_mev: f64,
}

/// Hard-core input well, its partner and the no-core well, in MeV against r.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1 {
    pub binding_energy_mev: f64,
    pub rows: Vec<Figure1Row>,
}

impl Figure1 {
    pub const HEADER: [&'static str; 5] =
        ["r_fm", "hulthen_mev", "partner_mev", "nocore_mev", "binding_energy_mev"];

    pub fn to_csv(&self) -> String {
        csv_table(
            &Self::HEADER,
            self.rows.iter().map(|r| {
                vec![
                    r.r_fm,
                    r.hulthen_mev,
                    r.partner_mev,
                    r.nocore_mev,
                    self.binding_energy_mev,
                ]
            }),
        )
    }
}

pub fn figure1_data(cal: &DeuteronCalibration, x_samples: &[f64]) -> Result<Figure1> {
    let units = cal.units();
    let hulthen = cal.hulthen();
    let nocore = cal.nocore_hulthen();
    let partner = cal.superpotential().partner_potential();
    let rows = x_samples
        .iter()
        .map(|&x| {
            ensure(x > 0.0, "x", x, "potentials need x > 0")?;
            Ok(Figure1Row {
                r_fm: units.radius_fm(x),
                hulthen_mev: units.to_mev(hulthen.value(x)),
                partner_mev: units.to_mev(partner.value(x)),
                nocore_mev: units.to_mev(nocore.value(x)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Figure1 {
        binding_energy_mev: cal.binding_energy_mev,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure2Row {
    pub x: f64,
    pub nocore_density: f64,
    pub partner_density: f64,
}

/// Probability densities of the no-core and hard-core ground states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure2 {
    pub rows: Vec<Figure2Row>,
}

impl Figure2 {
    pub const HEADER: [&'static str; 3] = ["x", "nocore_density", "partner_density"];

    pub fn to_csv(&self) -> String {
        csv_table(
            &Self::HEADER,
            self.rows
                .iter()
                .map(|r| vec![r.x, r.nocore_density, r.partner_density]),
        )
    }

    fn argmax(&self, pick: impl Fn(&Figure2Row) -> f64) -> f64 {
        self.rows
            .iter()
            .max_by(|a, b| pick(a).total_cmp(&pick(b)))
            .map(|r| r.x)
            .unwrap_or(f64::NAN)
    }

    pub fn nocore_peak(&self) -> f64 {
        self.argmax(|r| r.nocore_density)
    }

    pub fn partner_peak(&self) -> f64 {
        self.argmax(|r| r.partner_density)
    }
}

pub fn figure2_data(cal: &DeuteronCalibration, x_samples: &[f64]) -> Result<Figure2> {
    let nocore = cal.nocore_state()?;
    let partner = cal.partner_state()?;
    let rows = x_samples
        .iter()
        .map(|&x| {
            ensure(x >= 0.0, "x", x, "densities need x >= 0")?;
            Ok(Figure2Row {
                x,
                nocore_density: nocore.wavefunction.value(x).powi(2),
                partner_density: partner.value(x).powi(2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Figure2 { rows })
}

/// `int_from^inf psi^2 dx` for a normalized state decaying like `e^{-kx}`.
pub fn probability_beyond<W: WaveFunction + ?Sized>(psi: &W, from: f64, k: f64) -> f64 {
    let upper = from + (40.0 / k).max(40.0);
    integrate(|x| psi.value(x).powi(2), from, upper, 200_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_at_three_fermi() {
        let s = energy_scale(3.0).unwrap();
        assert!((s - 4.6113).abs() < 1e-3);
        assert!((energy_scale(1.0).unwrap() / s - 9.0).abs() < 1e-12);
        let two = 197.326_980_4f64.powi(2) / (4.0 * 938.272_088_16);
        assert!((energy_scale(2.0).unwrap() - two).abs() < 1e-12);
        assert!(energy_scale(0.0).is_err());
        assert!(energy_scale(-3.0).is_err());
    }

    #[test]
    fn calibration_identities() {
        let cal = calibrate(DEUTERON_BINDING_ENERGY_MEV, 3.0).unwrap();
        assert!((cal.k_d * cal.k_d + cal.e_d).abs() < 1e-12 * cal.e_d.abs());
        assert!((cal.v0 - (4.0 * cal.k_d + 4.0)).abs() < 1e-12 * cal.v0);
        assert!((cal.e_d + 0.4825).abs() < 5e-4);
        let e2 = hulthen::eigenvalue(cal.v0, 2).unwrap().energy;
        assert!((cal.units().to_mev(e2) - DEUTERON_BINDING_ENERGY_MEV).abs() < 1e-6);
        let ratio = cal.strength_ratio();
        assert!(ratio > 2.79 && ratio < 2.89, "{ratio}");
    }

    #[test]
    fn calibration_domain() {
        let shallow = calibrate(-1e-12, 3.0).unwrap();
        assert!(shallow.v0 > 4.0 && shallow.v0 < 4.0 + 1e-5);
        assert!(matches!(
            calibrate(-50.0, 3.0),
            Err(Error::OutsideTwoLevelDomain { .. })
        ));
        assert!(calibrate(0.0, 3.0).is_err());
        assert!(calibrate(1.0, 3.0).is_err());
    }

    #[test]
    fn strength_override() {
        let units = PhysicalUnits::new(3.0, &PhysicalConstants::CODATA).unwrap();
        let cal = calibrate_from_strength(5.0, &units).unwrap();
        assert_eq!(cal.v0, 5.0);
        assert_eq!(cal.k_d, 0.25);
        assert_eq!(cal.e_d, -0.0625);
        assert!((cal.binding_energy_mev - units.to_mev(-0.0625)).abs() < 1e-15);
        assert!(calibrate_from_strength(9.0, &units).is_err());
        let round = calibrate_from_strength(calibrate(DEUTERON_BINDING_ENERGY_MEV, 3.0).unwrap().v0, &units).unwrap();
        assert!((round.binding_energy_mev - DEUTERON_BINDING_ENERGY_MEV).abs() < 1e-12);
    }

    #[test]
    fn csv_shape() {
        let cal = calibrate(DEUTERON_BINDING_ENERGY_MEV, 3.0).unwrap();
        let fig = figure1_data(&cal, &[2f64.ln(), 1.0]).unwrap();
        let csv = fig.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), Figure1::HEADER.join(","));
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(first.len(), 5);
        assert_eq!(first[1], fig.rows[0].hulthen_mev);
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
        assert!(figure1_data(&cal, &[0.0]).is_err());
    }
}
