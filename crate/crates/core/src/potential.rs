use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Hulthen,
    Partner,
}

/// Dimensionless radial potential on `x > 0`.
pub trait Potential {
    /// Value at `x > 0`. Callers guarantee the domain.
    fn value(&self, x: f64) -> f64;

    fn kind(&self) -> PotentialKind;

    /// Coefficient of the attractive `-1/(e^x - 1)` tail.
    fn strength(&self) -> f64;

    /// Order `p` of the leading `x^-p` singularity at the origin.
    fn singularity_order(&self) -> u32;

    /// Exponent `s` of the regular solution `psi ~ x^s` near the origin.
    fn origin_exponent(&self) -> f64 {
        match self.singularity_order() {
            // centrifugal-like 2/x^2 core: l(l+1) = 2, s = l + 1
            2 => 2.0,
            _ => 1.0,
        }
    }
}

/// `1 / (e^x - 1)` without overflow for large `x`.
#[inline]
pub(crate) fn inv_expm1(x: f64) -> f64 {
    let y = (-x).exp();
    y / -(-x).exp_m1()
}
