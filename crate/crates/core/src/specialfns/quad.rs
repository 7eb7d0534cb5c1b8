//! Double-exponential (exp-sinh) quadrature on (0, inf).
//!
//! The substitution s = exp(pi/2 sinh t) absorbs algebraic endpoint behaviour at
//! s = 0 and exponential decay at infinity, so a plain trapezoid rule in t
//! converges geometrically in the number of levels.

use std::f64::consts::FRAC_PI_2;

const MAX_LEVEL: usize = 9;
const T_LIMIT: f64 = 6.5;

/// Integrates `N` non-negative integrands sharing the same nodes.
///
/// Returns `None` when the requested relative tolerance is not reached.
pub(crate) fn exp_sinh<const N: usize, F>(mut f: F, tol: f64) -> Option<[f64; N]>
where
    F: FnMut(f64) -> [f64; N],
{
    let mut node = |t: f64| -> [f64; N] {
        let sh = FRAC_PI_2 * t.sinh();
        let s = sh.exp();
        if s == 0.0 || !s.is_finite() {
            return [0.0; N];
        }
        let w = s * FRAC_PI_2 * t.cosh();
        let mut v = f(s);
        for x in v.iter_mut() {
            *x *= w;
            if !x.is_finite() {
                *x = 0.0;
            }
        }
        v
    };

    let mut h = 0.5;
    let mut peak = 0.0;
    let mut raw = [0.0; N];
    let centre = node(0.0);
    for (a, x) in raw.iter_mut().zip(centre.iter()) {
        *a += x;
    }
    // the coarse sweeps fix the extent; finer levels only fill in between
    let upper = sweep(&mut node, h, h, &mut raw, &mut peak);
    let lower = sweep(&mut node, -h, -h, &mut raw, &mut peak);
    let mut estimate = raw.map(|x| x * h);

    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        // new nodes are the odd multiples of h
        let mut fresh = [0.0; N];
        let mut t = h;
        while t <= upper {
            add(&mut fresh, &node(t));
            t += 2.0 * h;
        }
        let mut t = -h;
        while t >= lower {
            add(&mut fresh, &node(t));
            t -= 2.0 * h;
        }
        let mut next = [0.0; N];
        let mut converged = true;
        for i in 0..N {
            next[i] = 0.5 * estimate[i] + h * fresh[i];
            let scale = next[i].abs().max(f64::MIN_POSITIVE);
            if (next[i] - estimate[i]).abs() > tol * scale {
                converged = false;
            }
        }
        estimate = next;
        if converged && _level >= 2 {
            return Some(estimate);
        }
    }
    None
}

fn add<const N: usize>(acc: &mut [f64; N], v: &[f64; N]) {
    for (a, x) in acc.iter_mut().zip(v.iter()) {
        *a += x;
    }
}

/// Sweeps one direction from `start` in steps of `step`, stopping once the
/// contributions are negligible against the largest one seen. Returns the
/// last abscissa visited.
fn sweep<const N: usize>(
    node: &mut impl FnMut(f64) -> [f64; N],
    start: f64,
    step: f64,
    acc: &mut [f64; N],
    peak: &mut f64,
) -> f64 {
    let mut t = start;
    let mut quiet = 0;
    while t.abs() <= T_LIMIT {
        let v = node(t);
        add(acc, &v);
        let lead = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        *peak = peak.max(lead);
        if lead <= 1e-18 * *peak {
            quiet += 1;
            if quiet >= 3 {
                return t;
            }
        } else {
            quiet = 0;
        }
        t += step;
    }
    t - step
}
