//! Confluent hypergeometric, parabolic-cylinder and gamma functions for real
//! arguments, written for the parameter ranges met by the trap solvers.
//!
//! Accuracy targets: M to 1e-10 relative for |z|, |a|, |b| <= 60; U and D to
//! 1e-8 relative over the solver's operating range.

mod dd;
mod gamma;
mod kummer;
mod quad;
mod tricomi;
mod weber;

pub use gamma::{gamma, is_nonpositive_integer, ln_gamma, rgamma};
pub use kummer::{kummer_m, kummer_m_dz};
pub use tricomi::{tricomi_u, tricomi_u_dz, tricomi_u_with_dz};
pub use weber::{weber_d, weber_d_dz};

/// Direct power series for M, bypassing the Kummer transformation and the
/// asymptotic branch. Exposed for cross-checks.
pub fn kummer_m_series(alpha: f64, beta: f64, z: f64) -> Result<f64, SpecialFnError> {
    kummer::series(alpha, beta, z)
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("{func}({alpha}, {beta}, {z}) outside its domain: {reason}")]
    Domain { func: &'static str, alpha: f64, beta: f64, z: f64, reason: &'static str },
    #[error("{func}({alpha}, {beta}, {z}) did not converge")]
    Convergence { func: &'static str, alpha: f64, beta: f64, z: f64 },
}

/// Parameters (a, b, z) of a confluent hypergeometric function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypArgs {
    pub alpha: f64,
    pub beta: f64,
    pub z: f64,
}

impl HypArgs {
    pub fn new(alpha: f64, beta: f64, z: f64) -> Result<Self, SpecialFnError> {
        let domain = |reason| SpecialFnError::Domain { func: "hyp_args", alpha, beta, z, reason };
        if !(alpha.is_finite() && beta.is_finite() && z.is_finite()) {
            return Err(domain("non-finite parameter"));
        }
        if is_nonpositive_integer(beta) {
            return Err(domain("b is a non-positive integer"));
        }
        Ok(HypArgs { alpha, beta, z })
    }
}
