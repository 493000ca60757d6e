//! Supersymmetric construction of a hard-core deuteron potential from the
//! Hulthén well, with an independent Numerov oracle.

pub mod deuteron;
pub mod error;
pub mod grid;
pub mod hulthen;
pub mod potential;
pub mod solver;
pub mod specfun;
pub mod susy;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
pub use potential::{Potential, PotentialKind};
pub use wavefunction::{Differentiable, WaveFunction};
