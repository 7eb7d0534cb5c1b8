//! Crank–Nicolson evolution of the 1D relative wavefunction after a sudden
//! change of the step.

use log::warn;
use num_complex::Complex64;

use crate::analytic::{self, PiecewiseSolution};
use crate::error::{domain, Error, Result};
use crate::grid::interpolate;
use crate::model::{ChannelSpec, Dimension, RadialPotential, StepPotential};

pub const DEFAULT_HALF_WIDTH: f64 = 30.0;
pub const DEFAULT_DX: f64 = 0.04;
pub const DEFAULT_DT: f64 = 0.0002;
pub const DEFAULT_SAMPLE_EVERY: usize = 50;
pub const DEFAULT_SNAPSHOTS: [f64; 4] = [0.0, 1.0, 2.0, 5.0];
const RESAMPLE_TOLERANCE: f64 = 1e-6;

/// Wavefunction on a uniform grid with ψ = 0 at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl ComplexField {
    fn nodes(x_min: f64, x_max: f64, dx: f64) -> Result<usize> {
        if !(dx > 0.0) || !(x_max > x_min) {
            return Err(domain(format!("bad field grid [{x_min}, {x_max}] with dx = {dx}")));
        }
        let cells = (x_max - x_min) / dx;
        let n = cells.round();
        if (cells - n).abs() > 1e-6 || n < 4.0 {
            return Err(domain(format!("dx = {dx} does not divide [{x_min}, {x_max}]")));
        }
        Ok(n as usize + 1)
    }

    /// Samples `f` at the interior nodes; the boundary nodes are zero.
    pub fn from_fn(x_min: f64, x_max: f64, dx: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let n = Self::nodes(x_min, x_max, dx)?;
        let dx = (x_max - x_min) / (n - 1) as f64;
        let mut values: Vec<Complex64> = (0..n).map(|i| f(x_min + i as f64 * dx)).collect();
        values[0] = Complex64::new(0.0, 0.0);
        values[n - 1] = Complex64::new(0.0, 0.0);
        Ok(Self { x_min, x_max, dx, values, time: 0.0 })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dx
    }

    pub fn normalize(&mut self) {
        let s = self.norm().sqrt();
        if s > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= s);
        }
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// <x²> over the whole line.
    pub fn mean_square(&self) -> f64 {
        self.values.iter().enumerate().map(|(i, v)| self.x(i).powi(2) * v.norm_sqr()).sum::<f64>() * self.dx
            / self.norm()
    }

    /// ⟨ψ|H|ψ⟩ with the discrete Hamiltonian for `v`.
    pub fn energy(&self, v: &dyn RadialPotential) -> f64 {
        let k = 1.0 / (self.dx * self.dx);
        let pot = sample_potential(self, v);
        let psi = &self.values;
        let mut acc = 0.0;
        for i in 1..psi.len() - 1 {
            let h = psi[i] * (2.0 * k + pot[i]) - (psi[i - 1] + psi[i + 1]) * k;
            acc += (psi[i].conj() * h).re;
        }
        acc * self.dx / self.norm()
    }

    /// L² norm of the part odd under x -> -x.
    pub fn odd_part_norm(&self) -> f64 {
        let n = self.len();
        (0..n).map(|i| (0.5 * (self.values[i] - self.values[n - 1 - i])).norm_sqr()).sum::<f64>().sqrt()
            * self.dx.sqrt()
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (self.x_min - other.x_min).abs() <= 1e-12 * self.dx
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
    }
}

/// |⟨a|b⟩|, clamped to [0, 1].
pub fn fidelity(a: &ComplexField, b: &ComplexField) -> Result<f64> {
    overlap(a, b).map(|z| z.norm().min(1.0))
}

pub fn overlap(a: &ComplexField, b: &ComplexField) -> Result<Complex64> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch);
    }
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| x.conj() * y).sum::<Complex64>() * a.dx)
}

/// x²/4 + v(|x|) at the nodes; a node sitting on a jump takes the mean of
/// both sides.
fn sample_potential(psi: &ComplexField, v: &dyn RadialPotential) -> Vec<f64> {
    let jump = v.jump_at();
    (0..psi.len())
        .map(|i| {
            let r = psi.x(i).abs();
            0.25 * r * r + match jump {
                Some(a) if (r - a).abs() < 1e-9 * psi.dx => {
                    let eps = 1e-9 * psi.dx;
                    0.5 * (v.value(a - eps) + v.value(a + eps))
                }
                _ => v.value(r),
            }
        })
        .collect()
}

/// Factorised (1 + i dt/2 H) for a fixed potential, reused every step.
#[derive(Debug, Clone)]
pub struct Propagator {
    dt: f64,
    /// i dt/2 times the off-diagonal of H
    off: Complex64,
    /// i dt/2 times the diagonal of H
    diag: Vec<Complex64>,
    upper: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Propagator {
    pub fn new(template: &ComplexField, v: &dyn RadialPotential, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(domain(format!("time step must be positive, got {dt}")));
        }
        let n = template.len();
        let k = 1.0 / (template.dx * template.dx);
        let tau = Complex64::new(0.0, 0.5 * dt);
        let pot = sample_potential(template, v);
        let diag: Vec<Complex64> = pot.iter().map(|p| tau * (2.0 * k + p)).collect();
        let off = -tau * k;
        // Thomas elimination over the interior nodes 1..n-2
        let mut upper = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); n];
        for i in 1..n - 1 {
            let pivot = Complex64::new(1.0, 0.0) + diag[i] - if i > 1 { off * upper[i - 1] } else { Complex64::new(0.0, 0.0) };
            if pivot.norm() == 0.0 {
                return Err(domain("singular Crank-Nicolson matrix"));
            }
            inv_pivot[i] = 1.0 / pivot;
            upper[i] = off * inv_pivot[i];
        }
        Ok(Self { dt, off, diag, upper, inv_pivot, scratch: vec![Complex64::new(0.0, 0.0); n] })
    }

    pub fn step(&mut self, psi: &mut ComplexField) {
        let n = psi.len();
        let y = &mut psi.values;
        let d = &mut self.scratch;
        let one = Complex64::new(1.0, 0.0);
        let mut prev_y = y[0];
        let mut prev_d = Complex64::new(0.0, 0.0);
        for i in 1..n - 1 {
            let rhs = (one - self.diag[i]) * y[i] - self.off * (prev_y + y[i + 1]);
            prev_y = y[i];
            prev_d = (rhs - self.off * prev_d) * self.inv_pivot[i];
            d[i] = prev_d;
        }
        let mut next = Complex64::new(0.0, 0.0);
        for i in (1..n - 1).rev() {
            next = d[i] - self.upper[i] * next;
            y[i] = next;
        }
        psi.time += self.dt;
    }
}

/// One Crank–Nicolson step under `v`.
pub fn cn_step(psi: &ComplexField, v: &dyn RadialPotential, dt: f64) -> Result<ComplexField> {
    let mut out = psi.clone();
    Propagator::new(psi, v, dt)?.step(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuenchScenario {
    pub initial: StepPotential,
    /// Potential switched on at t = 0.
    pub quenched: StepPotential,
    pub t_max: f64,
    pub dt: f64,
    pub dx: f64,
    pub half_width: f64,
    pub sample_every: usize,
    pub snapshot_times: Vec<f64>,
}

impl QuenchScenario {
    pub fn new(initial: StepPotential, quenched: StepPotential, t_max: f64) -> Self {
        Self {
            initial,
            quenched,
            t_max,
            dt: DEFAULT_DT,
            dx: DEFAULT_DX,
            half_width: DEFAULT_HALF_WIDTH,
            sample_every: DEFAULT_SAMPLE_EVERY,
            snapshot_times: DEFAULT_SNAPSHOTS.to_vec(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.dt > 0.0 && self.dx > 0.0 && self.half_width > 0.0) || self.sample_every == 0 {
            return Err(domain(format!(
                "quench needs t_max, dt, dx, half width and stride > 0 (got {}, {}, {}, {}, {})",
                self.t_max, self.dt, self.dx, self.half_width, self.sample_every
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub avg_separation: Vec<f64>,
    pub norm: Vec<f64>,
    /// ⟨H⟩ under the quenched potential
    pub energy: Vec<f64>,
    /// node coordinates shared by all snapshots
    pub x: Vec<f64>,
    pub snapshots: Vec<(f64, Vec<f64>)>,
}

/// Cubic resampling of an analytic 1D state onto the dynamics grid,
/// renormalised.
pub fn resample(sol: &PiecewiseSolution, x_min: f64, x_max: f64, dx: f64) -> Result<ComplexField> {
    let mut psi = ComplexField::from_fn(x_min, x_max, dx, |x| Complex64::new(interpolate(&sol.grid, &sol.values, x), 0.0))?;
    let lost = (1.0 - psi.norm()).abs();
    if lost > RESAMPLE_TOLERANCE {
        warn!("resampling the initial state changed its norm by {lost:.2e}");
    }
    psi.normalize();
    Ok(psi)
}

/// Stationary state `c` of `s.initial`, evolved under `s.quenched`.
pub fn run_quench(s: &QuenchScenario, c: ChannelSpec) -> Result<TimeSeries> {
    s.validate()?;
    if c.dim != Dimension::One {
        return Err(domain("time evolution is one-dimensional"));
    }
    let sol = analytic::solve(c, s.initial)?;
    let psi0 = resample(&sol, -s.half_width, s.half_width, s.dx)?;
    evolve(psi0, s)
}

/// Evolves an arbitrary initial field under `s.quenched`.
pub fn evolve(psi0: ComplexField, s: &QuenchScenario) -> Result<TimeSeries> {
    s.validate()?;
    let mut prop = Propagator::new(&psi0, &s.quenched, s.dt)?;
    let mut psi = psi0.clone();
    let steps = s.steps();
    let snap_steps: Vec<(usize, f64)> =
        s.snapshot_times.iter().filter(|t| **t <= s.t_max).map(|&t| ((t / s.dt).round() as usize, t)).collect();
    let mut out = TimeSeries { x: (0..psi.len()).map(|i| psi.x(i)).collect(), ..Default::default() };
    let record = |out: &mut TimeSeries, psi: &ComplexField| -> Result<()> {
        out.times.push(psi.time);
        out.fidelity.push(fidelity(&psi0, psi)?);
        out.avg_separation.push(psi.mean_square().sqrt());
        out.norm.push(psi.norm());
        out.energy.push(psi.energy(&s.quenched));
        Ok(())
    };
    for k in 0..=steps {
        if k > 0 {
            prop.step(&mut psi);
        }
        if k % s.sample_every == 0 || k == steps {
            record(&mut out, &psi)?;
        }
        for &(_, t) in snap_steps.iter().filter(|(j, _)| *j == k) {
            out.snapshots.push((t, psi.density()));
        }
    }
    Ok(out)
}

/// Mean spacing of successive local maxima of a sampled signal, with each
/// maximum refined by a parabola through its neighbours.
pub fn oscillation_period(times: &[f64], values: &[f64]) -> Option<f64> {
    let peaks = local_extrema(times, values, true);
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1].0 - peaks[0].0) / (peaks.len() - 1) as f64)
}

/// (time, value) of strict interior local maxima (or minima), parabola refined.
pub fn local_extrema(times: &[f64], values: &[f64], maxima: bool) -> Vec<(f64, f64)> {
    let sign = if maxima { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (sign * values[i - 1], sign * values[i], sign * values[i + 1]);
        if b > a && b >= c {
            let h = times[i + 1] - times[i];
            let denom = a - 2.0 * b + c;
            let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            out.push((times[i] + shift * h, sign * (b - 0.25 * (a - c) * shift)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(shift: f64) -> ComplexField {
        let mut f = ComplexField::from_fn(-10.0, 10.0, 0.05, |x| Complex64::new((-(x - shift).powi(2) / 4.0).exp(), 0.0)).unwrap();
        f.normalize();
        f
    }

    #[test]
    fn field_grid_validation() {
        assert!(ComplexField::from_fn(-1.0, 1.0, 0.3, |_| Complex64::new(1.0, 0.0)).is_err());
        assert!(ComplexField::from_fn(1.0, -1.0, 0.1, |_| Complex64::new(1.0, 0.0)).is_err());
        let f = ComplexField::from_fn(-30.0, 30.0, 0.04, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(f.len(), 1501);
        assert_eq!(f.values[0], Complex64::new(0.0, 0.0));
        assert!((f.x(750)).abs() < 1e-12);
    }

    #[test]
    fn fidelity_properties() {
        let g = gaussian(0.0);
        assert!((fidelity(&g, &g).unwrap() - 1.0).abs() < 1e-12);
        let mut odd = ComplexField::from_fn(-10.0, 10.0, 0.05, |x| Complex64::new(x * (-x * x / 4.0).exp(), 0.0)).unwrap();
        odd.normalize();
        assert!(fidelity(&g, &odd).unwrap() < 1e-12);
        let other = ComplexField::from_fn(-10.0, 10.0, 0.1, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert!(matches!(fidelity(&g, &other), Err(Error::GridMismatch)));
        assert!(g.odd_part_norm() < 1e-12);
        assert!((odd.odd_part_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jump_node_takes_the_mean() {
        let f = ComplexField::from_fn(-2.0, 2.0, 0.25, |_| Complex64::new(0.0, 0.0)).unwrap();
        let v = sample_potential(&f, &StepPotential::new(-4.0, 1.0).unwrap());
        let trap = |i: usize| 0.25 * f.x(i).powi(2);
        assert_eq!(v[4] - trap(4), -2.0);
        assert_eq!(v[5] - trap(5), -4.0);
        assert_eq!(v[3] - trap(3), 0.0);
        assert_eq!(v[12] - trap(12), -2.0);
    }

    #[test]
    fn single_step_is_unitary() {
        let g = gaussian(1.0);
        let p = StepPotential::new(3.0, 0.5).unwrap();
        let next = cn_step(&g, &p, 0.01).unwrap();
        assert!((next.norm() - 1.0).abs() < 1e-12);
        assert!((next.time - 0.01).abs() < 1e-15);
        assert!(fidelity(&g, &next).unwrap() < 1.0);
    }

    #[test]
    fn extrema_refinement() {
        let t: Vec<f64> = (0..1000).map(|k| k as f64 * 0.01).collect();
        let v: Vec<f64> = t.iter().map(|t| (2.0 * t).cos()).collect();
        let period = oscillation_period(&t, &v).unwrap();
        assert!((period - std::f64::consts::PI).abs() < 1e-4);
        let minima = local_extrema(&t, &v, false);
        assert!((minima[0].0 - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
        assert!((minima[0].1 + 1.0).abs() < 1e-6);
    }
}
