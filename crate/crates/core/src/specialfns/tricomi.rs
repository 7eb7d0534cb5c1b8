//! Tricomi's confluent hypergeometric function U(a, b, z) for z > 0.
//!
//! Three routes, tried in order:
//! 1. the large-z asymptotic series when it reaches full precision,
//! 2. the connection formula through two Kummer functions (non-integer b)
//!    unless it loses three or more digits to cancellation,
//! 3. the integral representation evaluated by exp-sinh quadrature at a
//!    parameter shifted into [1, 2), followed by the backward recurrence in a
//!    (the stable direction, U being minimal as a grows).

use super::gamma::{gamma, rgamma};
use super::kummer::{kummer_m, MAX_TERMS};
use super::quad::exp_sinh;
use super::{HypArgs, SpecialFnError};

const QUAD_TOL: f64 = 1e-13;
const MAX_CANCELLATION: f64 = 1e3;

/// U(a, b, z), z > 0.
pub fn tricomi_u(args: HypArgs) -> Result<f64, SpecialFnError> {
    check_argument(&args)?;
    let HypArgs { alpha, beta, z } = args;
    if alpha == 0.0 {
        return Ok(1.0);
    }
    if let Some(v) = fast_route(alpha, beta, z) {
        return Ok(v);
    }
    Ok(integral_route(alpha, beta, z)?.0)
}

/// dU/dz = -a U(a+1, b+1, z), z > 0.
pub fn tricomi_u_dz(args: HypArgs) -> Result<f64, SpecialFnError> {
    Ok(tricomi_u_with_dz(args)?.1)
}

/// (U, dU/dz) from a single quadrature pass when the fast routes fail.
pub fn tricomi_u_with_dz(args: HypArgs) -> Result<(f64, f64), SpecialFnError> {
    check_argument(&args)?;
    let HypArgs { alpha, beta, z } = args;
    if alpha == 0.0 {
        return Ok((1.0, 0.0));
    }
    if let (Some(u), Some(u1)) = (fast_route(alpha, beta, z), fast_route(alpha + 1.0, beta + 1.0, z)) {
        return Ok((u, -alpha * u1));
    }
    integral_route(alpha, beta, z)
}

fn check_argument(args: &HypArgs) -> Result<(), SpecialFnError> {
    if args.z <= 0.0 {
        return Err(SpecialFnError::Domain {
            func: "tricomi_u",
            alpha: args.alpha,
            beta: args.beta,
            z: args.z,
            reason: "argument must be positive",
        });
    }
    Ok(())
}

fn fast_route(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    asymptotic(alpha, beta, z).or_else(|| connection(alpha, beta, z))
}

/// U ~ z^-a sum_k (a)_k (a-b+1)_k / k! (-z)^-k
pub(crate) fn asymptotic(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut previous = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= -(alpha + kf) * (alpha - beta + 1.0 + kf) / ((kf + 1.0) * z);
        if term == 0.0 {
            return Some(z.powf(-alpha) * sum);
        }
        if term.abs() > previous {
            return None;
        }
        previous = term.abs();
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            return Some(z.powf(-alpha) * sum);
        }
    }
    None
}

/// U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z) + Gamma(b-1)/Gamma(a) z^(1-b) M(a-b+1,2-b,z)
pub(crate) fn connection(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    if beta == beta.round() {
        return None;
    }
    let m1 = kummer_m(HypArgs::new(alpha, beta, z).ok()?).ok()?;
    let m2 = kummer_m(HypArgs::new(alpha - beta + 1.0, 2.0 - beta, z).ok()?).ok()?;
    let t1 = gamma(1.0 - beta) * rgamma(alpha - beta + 1.0) * m1;
    let t2 = gamma(beta - 1.0) * rgamma(alpha) * z.powf(1.0 - beta) * m2;
    let total = t1 + t2;
    if !total.is_finite() {
        return None;
    }
    let scale = t1.abs().max(t2.abs());
    if total.abs() * MAX_CANCELLATION < scale {
        return None;
    }
    Some(total)
}

/// Integral representation at a0 = a + k in [1, 2) (or a itself when a >= 1),
/// returning (U(a,b,z), dU/dz).
fn integral_route(alpha: f64, beta: f64, z: f64) -> Result<(f64, f64), SpecialFnError> {
    let shift = if alpha >= 1.0 { 0 } else { (1.0 - alpha).ceil() as usize };
    let a0 = alpha + shift as f64;
    let c = beta - a0 - 1.0;
    let integrals = exp_sinh(
        |s| {
            let grow = (s / z).ln_1p();
            let base = (-s + (a0 - 1.0) * s.ln() + c * grow).exp();
            let one_plus = 1.0 + s / z;
            [base, base * s / one_plus, base * one_plus, base * s]
        },
        QUAD_TOL,
    )
    .ok_or(SpecialFnError::Convergence { func: "tricomi_u", alpha, beta, z })?;

    let p0 = z.powf(-a0) * rgamma(a0);
    let p1 = z.powf(-a0 - 1.0) * rgamma(a0 + 1.0);
    let u_b = (p0 * integrals[0], p1 * integrals[1]);
    let u_b1 = (p0 * integrals[2], p1 * integrals[3]);

    let u = recur_down(u_b, a0, beta, z, shift).0;
    let u_shift = if shift == 0 {
        u_b1.1
    } else {
        recur_down(u_b1, a0, beta + 1.0, z, shift - 1).0
    };
    let value = (u, -alpha * u_shift);
    if value.0.is_finite() && value.1.is_finite() {
        Ok(value)
    } else {
        Err(SpecialFnError::Convergence { func: "tricomi_u", alpha, beta, z })
    }
}

/// Applies U(a-1) = -(b - 2a - z) U(a) - a (a - b + 1) U(a+1) `steps` times,
/// starting from (U(a_top), U(a_top + 1)). Returns (U(a_top - steps), U(a_top - steps + 1)).
fn recur_down(pair: (f64, f64), a_top: f64, beta: f64, z: f64, steps: usize) -> (f64, f64) {
    let (mut u, mut u_up) = pair;
    let mut a = a_top;
    for _ in 0..steps {
        let u_down = -(beta - 2.0 * a - z) * u - a * (a - beta + 1.0) * u_up;
        u_up = u;
        u = u_down;
        a -= 1.0;
    }
    (u, u_up)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(a: f64, b: f64, z: f64) -> HypArgs {
        HypArgs::new(a, b, z).unwrap()
    }

    #[test]
    fn power_law_special_case() {
        // U(a, a+1, z) = z^-a
        let got = tricomi_u(args(0.75, 1.75, 2.0)).unwrap();
        assert!((got - 2f64.powf(-0.75)).abs() < 1e-13);
        let (u, du) = integral_route(0.75, 1.75, 2.0).unwrap();
        assert!((u - 2f64.powf(-0.75)).abs() < 1e-12);
        assert!((du + 0.75 * 2f64.powf(-1.75)).abs() < 1e-12);
    }

    #[test]
    fn routes_agree_where_they_overlap() {
        for &(a, b, z) in &[(0.3, 1.5, 1.2), (-2.7, 0.5, 3.0), (1.9, 2.5, 0.4), (-0.4, 1.5, 6.0)] {
            let conn = connection(a, b, z).expect("no cancellation in this box");
            let (quad, _) = integral_route(a, b, z).unwrap();
            assert!((conn / quad - 1.0).abs() < 1e-9, "({a},{b},{z}) {conn} vs {quad}");
        }
        let asym = asymptotic(1.3, 2.0, 80.0).unwrap();
        let (quad, _) = integral_route(1.3, 2.0, 80.0).unwrap();
        assert!((asym / quad - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_case_for_negative_integer_a() {
        // U(-2, b, z) = z^2 - 2(b+1) z + b(b+1)
        let (a, b, z) = (-2.0, 3.0, 1.7);
        let want = z * z - 2.0 * (b + 1.0) * z + b * (b + 1.0);
        let (u, du) = integral_route(a, b, z).unwrap();
        assert!((u - want).abs() < 1e-11 * want.abs().max(1.0), "{u} vs {want}");
        assert!((du - (2.0 * z - 2.0 * (b + 1.0))).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_positive_argument() {
        assert!(matches!(tricomi_u(args(1.0, 1.0, 0.0)), Err(SpecialFnError::Domain { .. })));
        assert!(tricomi_u(args(1.0, 1.0, -1.0)).is_err());
    }
}
