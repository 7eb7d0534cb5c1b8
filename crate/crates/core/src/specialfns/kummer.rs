//! Kummer's confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).

use super::dd::Dd;
use super::gamma::{gamma_sign, is_nonpositive_integer, ln_gamma, rgamma};
use super::{HypArgs, SpecialFnError};

pub(crate) const MAX_TERMS: usize = 500;
pub(crate) const TERM_TOL: f64 = 1e-15;
/// Digits we are willing to lose in the f64 series before switching to
/// double-double summation.
const CANCELLATION_LIMIT: f64 = 1e4;
const ASYMPTOTIC_Z: f64 = 40.0;

/// M(a, b, z).
///
/// Power series for moderate arguments, with the Kummer transformation
/// M(a,b,z) = e^z M(b-a,b,-z) applied for negative z and the large-z
/// expansion beyond z = 40 when it converges.
pub fn kummer_m(args: HypArgs) -> Result<f64, SpecialFnError> {
    let HypArgs { alpha, beta, z } = args;
    if z < 0.0 {
        let inner = positive_argument(beta - alpha, beta, -z)?;
        return Ok(z.exp() * inner);
    }
    positive_argument(alpha, beta, z)
}

/// dM/dz = (a/b) M(a+1, b+1, z).
pub fn kummer_m_dz(args: HypArgs) -> Result<f64, SpecialFnError> {
    let HypArgs { alpha, beta, z } = args;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let shifted = HypArgs::new(alpha + 1.0, beta + 1.0, z)?;
    Ok(alpha / beta * kummer_m(shifted)?)
}

fn positive_argument(alpha: f64, beta: f64, z: f64) -> Result<f64, SpecialFnError> {
    if z >= ASYMPTOTIC_Z && !is_nonpositive_integer(alpha) {
        if let Some(v) = asymptotic(alpha, beta, z) {
            return Ok(v);
        }
    }
    series(alpha, beta, z)
}

/// Direct power series, whatever the sign of z. Switches to double-double
/// summation when the terms cancel.
pub fn series(alpha: f64, beta: f64, z: f64) -> Result<f64, SpecialFnError> {
    if z == 0.0 {
        return Ok(1.0);
    }
    let err = || SpecialFnError::Convergence { func: "kummer_m", alpha, beta, z };
    let (sum, peak) = series_f64(alpha, beta, z).ok_or_else(err)?;
    if peak <= CANCELLATION_LIMIT * sum.abs() {
        return Ok(sum);
    }
    series_dd(alpha, beta, z).ok_or_else(err)
}

/// Index past which the term ratio can only shrink: all Pochhammer factors
/// (a + k) have a fixed sign from here on.
fn monotone_from(alpha: f64) -> usize {
    if alpha < 0.0 {
        (-alpha).ceil() as usize + 1
    } else {
        0
    }
}

fn series_f64(alpha: f64, beta: f64, z: f64) -> Option<(f64, f64)> {
    let tail_start = monotone_from(alpha);
    let mut term = 1.0f64;
    // Neumaier compensated summation
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut peak = 1.0f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (alpha + kf) * z / ((beta + kf) * (kf + 1.0));
        term *= ratio;
        if term == 0.0 {
            return Some((sum + comp, peak));
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        peak = peak.max(term.abs());
        if !sum.is_finite() {
            return None;
        }
        if k >= tail_start && ratio.abs() < 0.5 && term.abs() <= TERM_TOL * (sum + comp).abs() {
            return Some((sum + comp, peak));
        }
    }
    None
}

fn series_dd(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    let tail_start = monotone_from(alpha);
    let a = Dd::from_f64(alpha);
    let b = Dd::from_f64(beta);
    let zz = Dd::from_f64(z);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 0..MAX_TERMS {
        let kf = Dd::from_f64(k as f64);
        let num = (a + kf) * zz;
        let den = (b + kf) * (kf + Dd::ONE);
        term = term * num / den;
        if term.to_f64() == 0.0 {
            return Some(sum.to_f64());
        }
        sum = sum + term;
        let ratio = (num.to_f64() / den.to_f64()).abs();
        if !sum.to_f64().is_finite() {
            return None;
        }
        if k >= tail_start && ratio < 0.5 && term.abs().to_f64() <= 1e-17 * sum.abs().to_f64() {
            return Some(sum.to_f64());
        }
    }
    None
}

/// Leading large-z expansion
/// M ~ Gamma(b)/Gamma(a) e^z z^(a-b) sum_k (b-a)_k (1-a)_k / (k! z^k).
/// Returns `None` when the subdominant branch is not negligible or the
/// asymptotic series does not reach full precision.
fn asymptotic(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    let log_lead = ln_gamma(beta) - ln_gamma(alpha) + z + (alpha - beta) * z.ln();
    let log_sub = ln_gamma(beta) + (-alpha) * z.ln() - ln_gamma(beta - alpha);
    let sub_finite = rgamma(beta - alpha) != 0.0;
    if sub_finite && log_sub - log_lead > -40.0 {
        return None;
    }
    if log_lead > 700.0 {
        return None;
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut previous = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (beta - alpha + kf) * (1.0 - alpha + kf) / ((kf + 1.0) * z);
        let sign = gamma_sign(beta) * gamma_sign(alpha);
        if term == 0.0 {
            return Some(sign * log_lead.exp() * sum);
        }
        if term.abs() > previous {
            return None;
        }
        previous = term.abs();
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            return Some(sign * log_lead.exp() * sum);
        }
    }
    None
}
