//! Special-function kernel for the Hulthén eigenfunctions.
//!
//! Only what the bound states need: the terminating Gauss series
//! `2F1(a, 1 - n; c; z)`, which is a polynomial of degree `n - 1` in `z`,
//! and the log-gamma ratio appearing in the closed-form normalization.

use crate::error::{ensure, Result};

/// Compensated (Kahan) accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Parameters of a terminating series `2F1(a, 1 - n; c; z)` with `n = m + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyHypergeom {
    a: f64,
    m: usize,
    c: f64,
}

impl PolyHypergeom {
    /// Builds the series for quantum number `n >= 1`; the numerator parameter
    /// `1 - n = -m` stops the sum after `n` terms.
    pub fn new(a: f64, n: usize, c: f64) -> Result<Self> {
        ensure(n >= 1, "n", n as f64, "series terminates only for n >= 1")?;
        ensure(c > 0.0, "c", c, "must be positive")?;
        ensure(a.is_finite(), "a", a, "must be finite")?;
        Ok(Self { a, m: n - 1, c })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Coefficients `[(a)_j (-m)_j / ((c)_j j!)]` of `z^j`, `j = 0..=m`,
    /// built with the rising-factorial recurrence.
    pub fn coefficients(&self) -> Vec<f64> {
        let b = -(self.m as f64);
        let mut coeffs = Vec::with_capacity(self.m + 1);
        let mut term = 1.0;
        coeffs.push(term);
        for j in 0..self.m {
            let jf = j as f64;
            term *= (self.a + jf) * (b + jf) / ((self.c + jf) * (jf + 1.0));
            coeffs.push(term);
        }
        coeffs
    }

    /// Sums the series in ascending order with compensation.
    pub fn eval(&self, z: f64) -> f64 {
        let b = -(self.m as f64);
        let mut acc = KahanSum::default();
        let mut term = 1.0;
        acc.add(term);
        for j in 0..self.m {
            let jf = j as f64;
            term *= (self.a + jf) * (b + jf) / ((self.c + jf) * (jf + 1.0)) * z;
            acc.add(term);
        }
        acc.value()
    }
}

/// `2F1(a, 1 - n; c; z)` for `n >= 1`, `c > 0` and `z` in `[0, 1]`.
pub fn hyp2f1_terminating(a: f64, n: usize, c: f64, z: f64) -> Result<f64> {
    let series = PolyHypergeom::new(a, n, c)?;
    ensure((0.0..=1.0).contains(&z), "z", z, "must lie in [0, 1]")?;
    Ok(series.eval(z))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of `|Gamma(x)|` (Lanczos, g = 7, 9 terms).
///
/// Relative accuracy is around 1e-15 on `(0, 50)`; arguments below 1/2
/// go through the reflection formula.
pub fn ln_gamma(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        return (PI / (PI * x).sin()).abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += p / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

/// `Gamma(n + 2k) / (Gamma(n + 1) Gamma(2k + 1))`, through log-gamma
/// differences so large arguments do not overflow.
pub fn gamma_ratio(n: usize, k: f64) -> Result<f64> {
    ensure(n >= 1, "n", n as f64, "must be at least 1")?;
    ensure(k > 0.0 && k.is_finite(), "k", k, "must be positive")?;
    let n = n as f64;
    Ok((ln_gamma(n + 2.0 * k) - ln_gamma(n + 1.0) - ln_gamma(2.0 * k + 1.0)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminating_series_small_cases() {
        assert_eq!(hyp2f1_terminating(13.7, 1, 2.2, 0.5).unwrap(), 1.0);
        let v = hyp2f1_terminating(4.0, 2, 3.0, 0.5).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn series_at_hard_core_parameters() {
        // 50-digit reference for a = 2k+3, c = 2k+1, k = 2.8892, z = 1/e.
        let k = 2.8892;
        let v = hyp2f1_terminating(2.0 * k + 3.0, 2, 2.0 * k + 1.0, (-1.0f64).exp()).unwrap();
        assert!((v - 0.523_575_934_382_835_3).abs() < 1e-15);
        // degree-two case: exactly 2/65
        let v = hyp2f1_terminating(7.5, 3, 3.25, 0.3).unwrap();
        assert!((v - 2.0 / 65.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(hyp2f1_terminating(1.0, 0, 1.0, 0.5).is_err());
        assert!(hyp2f1_terminating(1.0, 2, 0.0, 0.5).is_err());
        assert!(hyp2f1_terminating(1.0, 2, -1.5, 0.5).is_err());
        assert!(hyp2f1_terminating(1.0, 2, 1.0, 1.5).is_err());
    }

    #[test]
    fn ln_gamma_reference_values() {
        // 50-digit references
        for (x, want) in [
            (0.3, 1.095_797_994_818_075_5),
            (7.25, 7.052_185_450_738_539),
            (49.5, 142.617_282_821_145_98),
        ] {
            let got = ln_gamma(x);
            assert!(((got - want) / want).abs() < 1e-13, "{x}: {got} vs {want}");
        }
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_ratio_values() {
        assert!((gamma_ratio(1, 0.7).unwrap() - 1.0).abs() < 1e-13);
        assert!((gamma_ratio(2, 0.5).unwrap() - 1.0).abs() < 1e-13);
        // Gamma(2 + 2k) / (2 Gamma(2k + 1)) = (2k + 1) / 2
        assert!((gamma_ratio(2, 2.8892).unwrap() - 3.3892).abs() < 1e-12);
        assert!((gamma_ratio(3, 1.7).unwrap() - 3.96).abs() < 1e-12);
        assert!(((gamma_ratio(5, 9.5).unwrap() - 1771.0) / 1771.0).abs() < 1e-13);
        assert!(gamma_ratio(0, 1.0).is_err());
        assert!(gamma_ratio(1, 0.0).is_err());
    }
}
