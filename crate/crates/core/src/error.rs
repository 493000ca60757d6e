use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument `{name}` = {value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("strength V0 = {strength} admits no bound state with n = {n} (requires V0 > n^2)")]
    NoBoundState { strength: f64, n: usize },

    #[error("strength V0 = {strength} lies outside the two-level domain (4, 9)")]
    OutsideTwoLevelDomain { strength: f64 },

    #[error("superpotential kappa = {kappa} does not factorize strength V0 = {strength} (requires V0 = 1 + 2 kappa)")]
    MismatchedFactorization { kappa: f64, strength: f64 },

    #[error("grid functions live on different grids")]
    MismatchedGrid,

    #[error("zero test function")]
    ZeroFunction,

    #[error("bisection did not converge near E = {energy}: bracket width {width} after {iterations} iterations")]
    NonConvergence {
        energy: f64,
        width: f64,
        iterations: usize,
    },
}

pub(crate) fn ensure(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name,
            value,
            reason,
        })
    }
}
