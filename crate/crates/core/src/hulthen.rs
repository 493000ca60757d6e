//! The Hulthén problem in dimensionless form.
//!
//! With `x = r / alpha` the S-wave equation reads
//! `psi'' + V0 / (e^x - 1) psi - k^2 psi = 0`, whose bound states are
//!
//! ```text
//! psi_n(x) = C_n e^{-k x} (1 - e^{-x}) 2F1(2k + 1 + n, 1 - n; 2k + 1; e^{-x}),
//! E_n = -k_n^2,  k_n = (V0 - n^2) / (2n),  V0 > n^2.
//! ```

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::grid::integrate;
use crate::potential::{inv_expm1, Potential, PotentialKind};
use crate::specfun::{gamma_ratio, PolyHypergeom};
use crate::wavefunction::{Differentiable, WaveFunction};

/// Below this `x` the potential is evaluated from its Laurent expansion.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Simpson intervals used to normalize bound states.
pub const NORMALIZATION_INTERVALS: usize = 200_000;

/// `V(x) = -V0 / (e^x - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HulthenPotential {
    strength: f64,
}

impl HulthenPotential {
    pub fn new(strength: f64) -> Result<Self> {
        ensure(strength > 0.0 && strength.is_finite(), "V0", strength, "must be positive")?;
        Ok(Self { strength })
    }

    /// Checked evaluation; rejects `x <= 0`.
    pub fn potential_value(&self, x: f64) -> Result<f64> {
        ensure(x > 0.0, "x", x, "must be positive")?;
        Ok(self.value(x))
    }

    /// Laurent branch `-V0 (1/x - 1/2 + x/12)`.
    pub fn series_value(&self, x: f64) -> f64 {
        -self.strength * (1.0 / x - 0.5 + x / 12.0)
    }

    /// Direct branch `-V0 / (e^x - 1)`.
    pub fn direct_value(&self, x: f64) -> f64 {
        -self.strength * inv_expm1(x)
    }

    pub fn bound_state_count(&self) -> usize {
        bound_state_count(self.strength)
    }
}

impl Potential for HulthenPotential {
    fn value(&self, x: f64) -> f64 {
        if x < SERIES_THRESHOLD {
            self.series_value(x)
        } else {
            self.direct_value(x)
        }
    }

    fn kind(&self) -> PotentialKind {
        PotentialKind::Hulthen
    }

    fn strength(&self) -> f64 {
        self.strength
    }

    fn singularity_order(&self) -> u32 {
        1
    }
}

/// Largest `n` with `V0 > n^2`.
pub fn bound_state_count(strength: f64) -> usize {
    if strength.is_nan() || strength <= 1.0 {
        return 0;
    }
    let mut n = strength.sqrt().floor() as usize;
    while n > 0 && (n * n) as f64 >= strength {
        n -= 1;
    }
    while (((n + 1) * (n + 1)) as f64) < strength {
        n += 1;
    }
    n
}

/// Energy `E = -k^2` of level `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
    pub k: f64,
}

pub fn eigenvalue(strength: f64, n: usize) -> Result<Level> {
    ensure(strength > 0.0 && strength.is_finite(), "V0", strength, "must be positive")?;
    ensure(n >= 1, "n", n as f64, "quantum numbers start at 1")?;
    let n2 = (n * n) as f64;
    if strength <= n2 {
        return Err(Error::NoBoundState { strength, n });
    }
    let k = (strength - n2) / (2.0 * n as f64);
    Ok(Level {
        n,
        energy: -k * k,
        k,
    })
}

/// Analytic eigenfunction, written as `N e^{-kx} (1 - e^{-x}) F(e^{-x})`
/// with `F` the terminating hypergeometric polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct HulthenEigenfunction {
    n: usize,
    k: f64,
    poly: Vec<f64>,
    norm: f64,
}

impl HulthenEigenfunction {
    fn unnormalized(n: usize, k: f64) -> Result<Self> {
        let series = PolyHypergeom::new(2.0 * k + 1.0 + n as f64, n, 2.0 * k + 1.0)?;
        Ok(Self {
            n,
            k,
            poly: series.coefficients(),
            norm: 1.0,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Normalization constant in use (fixed by quadrature).
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// `sqrt(2k (n + k)(n + 2k)) Gamma(n + 2k) / (Gamma(n + 1) Gamma(2k + 1))`,
    /// the closed-form constant at `alpha = 1`.
    pub fn closed_form_normalization(&self) -> f64 {
        let (n, k) = (self.n as f64, self.k);
        (2.0 * k * (n + k) * (n + 2.0 * k)).sqrt()
            * gamma_ratio(self.n, k).expect("k > 0 and n >= 1 by construction")
    }

    /// Upper limit of the normalization quadrature.
    pub fn quadrature_extent(&self) -> f64 {
        (30.0 / self.k).max(30.0)
    }

    /// `(F(y), dF/dy)` by Horner.
    #[inline]
    fn poly_and_slope(&self, y: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.poly.iter().rev() {
            dp = dp * y + p;
            p = p * y + c;
        }
        (p, dp)
    }

    /// Second derivative from the radial equation, `(V - E) psi`.
    pub fn second_derivative(&self, strength: f64, x: f64) -> f64 {
        (-strength * inv_expm1(x) + self.k * self.k) * self.value(x)
    }
}

impl WaveFunction for HulthenEigenfunction {
    fn value(&self, x: f64) -> f64 {
        let y = (-x).exp();
        let u = -(-x).exp_m1();
        let (p, _) = self.poly_and_slope(y);
        self.norm * (-self.k * x).exp() * u * p
    }
}

impl Differentiable for HulthenEigenfunction {
    fn derivative(&self, x: f64) -> f64 {
        // d/dx [e^{-kx} u F(y)] with u' = y and dF/dx = -y F'(y)
        let y = (-x).exp();
        let u = -(-x).exp_m1();
        let (p, dp) = self.poly_and_slope(y);
        self.norm * (-self.k * x).exp() * (-self.k * u * p + y * p - u * y * dp)
    }
}

/// A normalized Hulthén bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub n: usize,
    pub energy: f64,
    pub k: f64,
    pub wavefunction: HulthenEigenfunction,
}

impl BoundState {
    pub fn nodes_expected(&self) -> usize {
        self.n - 1
    }
}

/// Normalized eigenfunction for level `n`; the constant is fixed by Simpson
/// quadrature on `[0, max(30, 30/k)]`.
pub fn eigenfunction(strength: f64, n: usize) -> Result<BoundState> {
    let level = eigenvalue(strength, n)?;
    let mut psi = HulthenEigenfunction::unnormalized(n, level.k)?;
    let extent = psi.quadrature_extent();
    let norm_sq = integrate(
        |x| {
            let v = psi.value(x);
            v * v
        },
        0.0,
        extent,
        NORMALIZATION_INTERVALS,
    );
    psi.norm = 1.0 / norm_sq.sqrt();
    Ok(BoundState {
        n,
        energy: level.energy,
        k: level.k,
        wavefunction: psi,
    })
}

/// All bound states of `V0`, ground state first.
pub fn spectrum(strength: f64) -> Result<Vec<BoundState>> {
    ensure(strength > 0.0 && strength.is_finite(), "V0", strength, "must be positive")?;
    (1..=bound_state_count(strength))
        .map(|n| eigenfunction(strength, n))
        .collect()
}
