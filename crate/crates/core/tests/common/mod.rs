//! Shared reference samples and independent oracles for the integration tests.
#![allow(dead_code)]

use steptrap::grid::SegmentedGrid;
use steptrap::model::{ChannelSpec, Dimension, StepPotential};

/// (dim, n, l, v0, a) validation points.
pub const SAMPLE: [(u32, u32, u32, f64, f64); 12] = [
    (1, 0, 0, -5.0, 0.5),
    (1, 1, 0, 5.0, 1.0),
    (1, 2, 0, -5.0, 1.25),
    (1, 1, 0, -5.0, 1.0),
    (2, 0, 0, 5.0, 0.5),
    (2, 1, 1, -5.0, 1.0),
    (2, 0, 2, 5.0, 1.25),
    (2, 2, 0, -5.0, 1.25),
    (3, 0, 0, -5.0, 1.0),
    (3, 1, 1, 5.0, 0.5),
    (3, 2, 2, -5.0, 1.25),
    (3, 0, 1, 5.0, 1.0),
];

pub fn sample() -> Vec<(ChannelSpec, StepPotential)> {
    SAMPLE
        .iter()
        .map(|&(d, n, l, v0, a)| {
            let dim = Dimension::from_int(d).unwrap();
            (ChannelSpec::new(dim, n, l).unwrap(), StepPotential::new(v0, a).unwrap())
        })
        .collect()
}

/// Symmetric tridiagonal matrix; the k-th smallest eigenvalue by Sturm
/// bisection.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn count_below(&self, lambda: f64) -> usize {
        let mut q = 1.0;
        let mut count = 0;
        for i in 0..self.diag.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - lambda - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn eigenvalue(&self, k: usize, lo: f64, hi: f64) -> f64 {
        let (mut lo, mut hi) = (lo, hi);
        assert!(self.count_below(lo) <= k && self.count_below(hi) > k, "bracket misses eigenvalue {k}");
        while hi - lo > 1e-13 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Cell-centred finite-volume discretisation of −∇² + r²/4 + v with cell
/// faces on multiples of h, so a step at a multiple of h is resolved exactly.
fn fd_matrix(c: ChannelSpec, p: StepPotential, h: f64, extent: f64) -> Tridiagonal {
    let v = |r: f64| 0.25 * r * r + if r < p.a { p.v0 } else { 0.0 };
    match c.dim {
        Dimension::One => {
            let n = (2.0 * extent / h).round() as usize;
            let diag = (0..n).map(|i| 2.0 / (h * h) + v((-extent + (i as f64 + 0.5) * h).abs())).collect();
            Tridiagonal { diag, off: vec![-1.0 / (h * h); n - 1] }
        }
        _ => {
            let d = c.dim.as_int() as i32;
            let l = c.l as f64;
            let centrifugal = l * (l + d as f64 - 2.0);
            let n = (extent / h).round() as usize;
            let face = |j: usize| (j as f64 * h).powi(d - 1);
            let weight = |i: usize| ((i as f64 + 0.5) * h).powi(d - 1);
            let diag = (0..n)
                .map(|i| {
                    let r = (i as f64 + 0.5) * h;
                    (face(i) + face(i + 1)) / (weight(i) * h * h) + centrifugal / (r * r) + v(r)
                })
                .collect();
            let off = (0..n - 1).map(|i| -face(i + 1) / (h * h * (weight(i) * weight(i + 1)).sqrt())).collect();
            Tridiagonal { diag, off }
        }
    }
}

/// Finite-difference eigenvalue at step h, Richardson-extrapolated with h/2.
pub fn fd_eigenvalue(c: ChannelSpec, p: StepPotential, h: f64, extent: f64) -> f64 {
    let k = c.n as usize;
    let lo = p.v0.min(0.0) - 1.0;
    let hi = 2.0 * c.n as f64 + c.l as f64 + 2.0 + p.v0.max(0.0) + 1.0;
    let coarse = fd_matrix(c, p, h, extent).eigenvalue(k, lo, hi);
    let fine = fd_matrix(c, p, 0.5 * h, extent).eigenvalue(k, lo, hi);
    (4.0 * fine - coarse) / 3.0
}

/// Normalised eigenfunctions of −d²/dx² + x²/4 at x, orders 0..count.
pub fn oscillator_functions(x: f64, count: usize) -> Vec<f64> {
    // φ_n(x) = 2^{-1/4} ψ_n(x/√2), ψ_n the standard Hermite functions
    let y = x / std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(count);
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
    for n in 0..count {
        out.push(cur * 2f64.powf(-0.25));
        let next = (2.0 / (n as f64 + 1.0)).sqrt() * y * cur - (n as f64 / (n as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// Oscillator-basis expansion of a real 1D state given on a segmented grid.
pub fn oscillator_coefficients(grid: &SegmentedGrid, values: &[f64], count: usize) -> Vec<f64> {
    let basis: Vec<Vec<f64>> = grid.points.iter().map(|&x| oscillator_functions(x, count)).collect();
    (0..count).map(|n| grid.integrate(|i, _| values[i] * basis[i][n])).collect()
}

/// <x²>(t) after release into the bare trap, from the expansion coefficients.
pub fn free_mean_square(coeffs: &[f64], t: f64) -> f64 {
    let diagonal: f64 = coeffs.iter().enumerate().map(|(n, c)| c * c * (2 * n + 1) as f64).sum();
    let coupling: f64 = (0..coeffs.len().saturating_sub(2))
        .map(|n| coeffs[n] * coeffs[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt())
        .sum();
    diagonal + 2.0 * coupling * (2.0 * t).cos()
}
