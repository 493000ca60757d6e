//! Factorization of the Hulthén Hamiltonian.
//!
//! The superpotential `w(x) = kappa - 1/(e^x - 1)` solves the Riccati
//! equation `-w' + w^2 = V - eps` with `eps = -kappa^2` whenever the Hulthén
//! strength is `V0 = 1 + 2 kappa`. Then `H = A^+ A + eps`,
//! `H~ = A A^+ + eps` with `A = d/dx + w`, and the partner potential is
//! `V~ = V + 2 w'`.

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::grid::{integrate, Grid};
use crate::hulthen::{self, HulthenEigenfunction, HulthenPotential, NORMALIZATION_INTERVALS};
use crate::potential::{inv_expm1, Potential, PotentialKind};
use crate::wavefunction::{Differentiable, WaveFunction};

/// Relative tolerance used when matching `V0` against `1 + 2 kappa` and
/// a factorization energy against the Hulthén levels.
pub const MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Superpotential {
    kappa: f64,
}

impl Superpotential {
    pub fn new(kappa: f64) -> Result<Self> {
        ensure(kappa > 0.0 && kappa.is_finite(), "kappa", kappa, "must be positive")?;
        Ok(Self { kappa })
    }

    /// `kappa = (V0 - 1) / 2`, which pins `eps` to the Hulthén ground level.
    pub fn from_strength(strength: f64) -> Result<Self> {
        ensure(strength > 1.0 && strength.is_finite(), "V0", strength, "must exceed 1")?;
        Self::new((strength - 1.0) / 2.0)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Strength `1 + 2 kappa` of the Hulthén well this factorizes.
    pub fn strength(&self) -> f64 {
        1.0 + 2.0 * self.kappa
    }

    pub fn factorization_energy(&self) -> f64 {
        -self.kappa * self.kappa
    }

    pub fn value(&self, x: f64) -> f64 {
        self.kappa - inv_expm1(x)
    }

    /// `w'(x) = e^x / (e^x - 1)^2`.
    pub fn derivative(&self, x: f64) -> f64 {
        let y = (-x).exp();
        let u = -(-x).exp_m1();
        y / (u * u)
    }

    pub fn partner_potential(&self) -> PartnerPotential {
        PartnerPotential { kappa: self.kappa }
    }

    fn check_factorizes(&self, pot: &HulthenPotential) -> Result<()> {
        let strength = pot.strength();
        if (strength - self.strength()).abs() > MATCH_TOLERANCE * strength {
            return Err(Error::MismatchedFactorization {
                kappa: self.kappa,
                strength,
            });
        }
        Ok(())
    }
}

pub fn superpotential_from_strength(strength: f64) -> Result<Superpotential> {
    Superpotential::from_strength(strength)
}

/// `-w'(x) + w(x)^2 - (V(x) - eps)` for a matched pair.
pub fn riccati_residual(w: &Superpotential, pot: &HulthenPotential, x: f64) -> Result<f64> {
    w.check_factorizes(pot)?;
    ensure(x > 0.0, "x", x, "must be positive")?;
    Ok(riccati_residual_unchecked(w, pot, x))
}

/// Same combination without requiring `V0 = 1 + 2 kappa`; a mismatch
/// `delta = V0 - 1 - 2 kappa` shows up as `delta / (e^x - 1)`.
pub fn riccati_residual_unchecked(w: &Superpotential, pot: &HulthenPotential, x: f64) -> f64 {
    let wx = w.value(x);
    -w.derivative(x) + wx * wx - (pot.value(x) - w.factorization_energy())
}

/// `V~(x) = -(1 + 2 kappa)/(e^x - 1) + 1 / (2 sinh^2(x/2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartnerPotential {
    kappa: f64,
}

impl PartnerPotential {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Leading small-`x` form `-(1 + 2 kappa)/x + 2/x^2`.
    pub fn small_x_asymptote(&self, x: f64) -> f64 {
        -(1.0 + 2.0 * self.kappa) / x + 2.0 / (x * x)
    }
}

impl Potential for PartnerPotential {
    fn value(&self, x: f64) -> f64 {
        let s = (0.5 * x).sinh();
        -(1.0 + 2.0 * self.kappa) * inv_expm1(x) + 0.5 / (s * s)
    }

    fn kind(&self) -> PotentialKind {
        PotentialKind::Partner
    }

    fn strength(&self) -> f64 {
        1.0 + 2.0 * self.kappa
    }

    fn singularity_order(&self) -> u32 {
        2
    }
}

pub fn partner_potential(w: &Superpotential) -> PartnerPotential {
    w.partner_potential()
}

/// `A psi = psi' + w psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lowered<W> {
    w: Superpotential,
    psi: W,
}

impl<W> Lowered<W> {
    pub fn inner(&self) -> &W {
        &self.psi
    }
}

impl<W: Differentiable> WaveFunction for Lowered<W> {
    fn value(&self, x: f64) -> f64 {
        // w psi -> -psi'(0) at the origin, so A psi vanishes there
        if x == 0.0 {
            return 0.0;
        }
        self.psi.derivative(x) + self.w.value(x) * self.psi.value(x)
    }
}

pub fn apply_a<W: Differentiable>(w: &Superpotential, psi: W) -> Lowered<W> {
    Lowered { w: *w, psi }
}

/// Kernel of `A^+ = -d/dx + w`: `e^{kappa x} / (1 - e^{-x})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointZeroMode {
    kappa: f64,
}

impl WaveFunction for AdjointZeroMode {
    fn value(&self, x: f64) -> f64 {
        (self.kappa * x).exp() / -(-x).exp_m1()
    }
}

pub fn adjoint_zero_mode(w: &Superpotential) -> AdjointZeroMode {
    AdjointZeroMode { kappa: w.kappa }
}

/// `int_lo^hi (psi~_*)^2 dx`. The integrand diverges at both ends of the
/// half line, so `lo` must stay positive.
pub fn adjoint_zero_mode_weight(w: &Superpotential, lo: f64, hi: f64) -> Result<f64> {
    ensure(lo > 0.0, "lo", lo, "must be positive")?;
    ensure(hi > lo, "hi", hi, "must exceed lo")?;
    let mode = adjoint_zero_mode(w);
    Ok(integrate(
        |x| mode.value(x).powi(2),
        lo,
        hi,
        20_000,
    ))
}

/// The single bound state of the hard-core partner potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerState {
    pub energy: f64,
    pub superpotential: Superpotential,
    /// `int psi~^2` with only the `(E2 - E1)^{-1/2}` prefactor applied.
    pub prefactor_norm: f64,
    scale: f64,
    lowered: Lowered<HulthenEigenfunction>,
}

impl PartnerState {
    pub fn potential(&self) -> PartnerPotential {
        self.superpotential.partner_potential()
    }

    pub fn source(&self) -> &HulthenEigenfunction {
        self.lowered.inner()
    }
}

impl WaveFunction for PartnerState {
    fn value(&self, x: f64) -> f64 {
        self.scale * self.lowered.value(x)
    }
}

/// `psi~ = (E2 - E1)^{-1/2} A psi_2` for a two-level Hulthén well,
/// renormalized by quadrature.
pub fn partner_state(strength: f64) -> Result<PartnerState> {
    if !(strength > 4.0 && strength < 9.0) {
        return Err(Error::OutsideTwoLevelDomain { strength });
    }
    let w = Superpotential::from_strength(strength)?;
    let ground = hulthen::eigenvalue(strength, 1)?;
    let excited = hulthen::eigenfunction(strength, 2)?;
    let lowered = apply_a(&w, excited.wavefunction.clone());
    let prefactor = 1.0 / (excited.energy - ground.energy).sqrt();
    let extent = excited.wavefunction.quadrature_extent();
    let raw = integrate(
        |x| lowered.value(x).powi(2),
        0.0,
        extent,
        NORMALIZATION_INTERVALS,
    );
    let prefactor_norm = prefactor * prefactor * raw;
    Ok(PartnerState {
        energy: excited.energy,
        superpotential: w,
        prefactor_norm,
        scale: 1.0 / raw.sqrt(),
        lowered,
    })
}

/// `||(H~ A - A H) phi|| / ||phi||` with five-point finite differences.
///
/// `H = -d^2/dx^2 + V` and `H~ = -d^2/dx^2 + V~` share the grid and the
/// stencils `D1`, `D2`. Since `D1 D2 = D2 D1` on interior points, the common
/// `-D1 D2 phi` term cancels before evaluation, which keeps the roundoff at
/// `eps / h^2` instead of `eps / h^3`. The comparison runs over
/// `x_2 ..= x_{N-3}`.
pub fn intertwining_residual<F: WaveFunction + ?Sized>(
    w: &Superpotential,
    pot: &HulthenPotential,
    phi: &F,
    grid: &Grid,
) -> Result<f64> {
    w.check_factorizes(pot)?;
    ensure(grid.start() > 0.0, "grid start", grid.start(), "must be positive")?;
    ensure(grid.len() >= 5, "grid points", grid.len() as f64, "need at least 5")?;
    let partner = w.partner_potential();
    let h = grid.step();
    let n = grid.len();
    let f = grid.sample(|x| phi.value(x));
    if f.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroFunction);
    }
    let wx = grid.sample(|x| w.value(x));
    let vx = grid.sample(|x| pot.value(x));
    let wf: Vec<f64> = wx.iter().zip(&f).map(|(a, b)| a * b).collect();
    let vf: Vec<f64> = vx.iter().zip(&f).map(|(a, b)| a * b).collect();

    let d1 = |g: &[f64], i: usize| (g[i - 2] - 8.0 * g[i - 1] + 8.0 * g[i + 1] - g[i + 2]) / (12.0 * h);
    let d2 = |g: &[f64], i: usize| {
        (-g[i - 2] + 16.0 * g[i - 1] - 30.0 * g[i] + 16.0 * g[i + 1] - g[i + 2]) / (12.0 * h * h)
    };

    let mut residual = 0.0;
    let mut weight = 0.0;
    for i in 2..n - 2 {
        let vt = partner.value(grid.x(i));
        // H~ A phi = -D2 D1 phi - D2(w phi) + V~ (D1 phi + w phi)
        let lhs = -d2(&wf, i) + vt * (d1(&f, i) + wf[i]);
        // A H phi = -D1 D2 phi + D1(V phi) + w (-D2 phi + V phi)
        let rhs = d1(&vf, i) + wx[i] * (-d2(&f, i) + vf[i]);
        residual += (lhs - rhs).powi(2);
        weight += f[i] * f[i];
    }
    if weight == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok((residual / weight).sqrt())
}

/// Whether the factorization energy removes a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum SusyPhase {
    /// `eps = E_n`: `A psi_n = 0` and level `n` has no partner.
    Unbroken { missing_level: usize },
    /// No level is annihilated; `psi~_*` grows like `e^{kappa x}`.
    Broken,
}

pub fn classify_susy(strength: f64, factorization_energy: f64) -> Result<SusyPhase> {
    ensure(strength > 1.0 && strength.is_finite(), "V0", strength, "must exceed 1")?;
    for n in 1..=hulthen::bound_state_count(strength) {
        let level = hulthen::eigenvalue(strength, n)?;
        if (factorization_energy - level.energy).abs() <= MATCH_TOLERANCE * level.energy.abs() {
            return Ok(SusyPhase::Unbroken { missing_level: n });
        }
    }
    Ok(SusyPhase::Broken)
}
