//! Parabolic-cylinder (Weber) function D_nu(z), the solution of
//! u'' + (nu + 1/2 - z^2/4) u = 0 that decays as z -> +inf.

use std::f64::consts::{LN_2, PI};

use super::gamma::rgamma;
use super::kummer::kummer_m;
use super::tricomi::tricomi_u;
use super::{HypArgs, SpecialFnError};

const SMALL_Z: f64 = 0.5;

fn check(nu: f64, z: f64) -> Result<(), SpecialFnError> {
    if nu.is_finite() && z.is_finite() {
        Ok(())
    } else {
        Err(SpecialFnError::Domain {
            func: "weber_d",
            alpha: nu,
            beta: 0.5,
            z,
            reason: "non-finite input",
        })
    }
}

/// D_nu(z).
pub fn weber_d(nu: f64, z: f64) -> Result<f64, SpecialFnError> {
    check(nu, z)?;
    if z > SMALL_Z {
        decaying_side(nu, z)
    } else if z >= -SMALL_Z {
        parity_split(nu, z)
    } else {
        // D(-x) = 2^(nu/2+1) sqrt(pi)/Gamma((1-nu)/2) e^(-x^2/4) M(-nu/2, 1/2, x^2/2) - D(x)
        let x = -z;
        let m = kummer_m(HypArgs::new(-0.5 * nu, 0.5, 0.5 * x * x)?)?;
        let even = (0.5 * nu + 1.0).exp2() * PI.sqrt() * rgamma(0.5 * (1.0 - nu)) * (-0.25 * x * x).exp() * m;
        Ok(even - decaying_side(nu, x)?)
    }
}

/// dD_nu/dz = (z/2) D_nu(z) - D_(nu+1)(z).
pub fn weber_d_dz(nu: f64, z: f64) -> Result<f64, SpecialFnError> {
    Ok(0.5 * z * weber_d(nu, z)? - weber_d(nu + 1.0, z)?)
}

/// 2^(nu/2) e^(-z^2/4) U(-nu/2, 1/2, z^2/2), valid for z > 0.
fn decaying_side(nu: f64, z: f64) -> Result<f64, SpecialFnError> {
    let u = tricomi_u(HypArgs::new(-0.5 * nu, 0.5, 0.5 * z * z)?)?;
    Ok((0.5 * nu * LN_2 - 0.25 * z * z).exp() * u)
}

/// Even/odd decomposition, accurate near the origin:
/// D = 2^(nu/2) e^(-z^2/4) [ sqrt(pi)/Gamma((1-nu)/2) M(-nu/2,1/2,z^2/2)
///                          - sqrt(2 pi) z/Gamma(-nu/2) M((1-nu)/2,3/2,z^2/2) ]
fn parity_split(nu: f64, z: f64) -> Result<f64, SpecialFnError> {
    let zz = 0.5 * z * z;
    let even = PI.sqrt() * rgamma(0.5 * (1.0 - nu)) * kummer_m(HypArgs::new(-0.5 * nu, 0.5, zz)?)?;
    let odd = (2.0 * PI).sqrt() * z * rgamma(-0.5 * nu) * kummer_m(HypArgs::new(0.5 * (1.0 - nu), 1.5, zz)?)?;
    Ok((0.5 * nu * LN_2 - 0.25 * z * z).exp() * (even - odd))
}
