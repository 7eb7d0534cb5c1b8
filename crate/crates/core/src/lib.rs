//! Two harmonically trapped atoms with a step-shaped short-range interaction:
//! quasi-exact spectra, a Numerov reference solver, first-order corrections
//! toward the soft-core Rydberg potential, correlation observables and
//! Crank-Nicolson quench dynamics.

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod model;
pub mod numerov;
pub mod observables;
pub mod perturbation;
pub mod specialfns;

pub use error::{Error, Result};
