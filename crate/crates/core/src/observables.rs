//! Densities, mean-square separation and correlation scans.

use log::warn;
use rayon::prelude::*;

use crate::analytic::{self, eigenvalue, PiecewiseSolution};
use crate::error::Result;
use crate::model::{ho_energy, ChannelSpec, Dimension, StepPotential};
use crate::numerov::GriddedSolution;

/// Drop below the zero-range energy that marks the critical range.
pub const CRITICAL_DROP: f64 = 0.05;
const TAIL_DENSITY: f64 = 1e-10;

/// Normalised wavefunction sampled on a grid.
pub trait Profile {
    /// Grid coordinate of each sample (x in 1D, r otherwise).
    fn coordinates(&self) -> &[f64];
    fn samples(&self) -> &[f64];
    /// Integral of g(|x|) |f|^2 over the represented space.
    fn weighted(&self, g: &dyn Fn(f64) -> f64) -> f64;
}

impl Profile for PiecewiseSolution {
    fn coordinates(&self) -> &[f64] {
        self.points()
    }

    fn samples(&self) -> &[f64] {
        &self.values
    }

    fn weighted(&self, g: &dyn Fn(f64) -> f64) -> f64 {
        self.expectation(|x| g(x.abs()))
    }
}

impl Profile for GriddedSolution {
    fn coordinates(&self) -> &[f64] {
        &self.radii
    }

    fn samples(&self) -> &[f64] {
        &self.values
    }

    fn weighted(&self, g: &dyn Fn(f64) -> f64) -> f64 {
        self.expectation(g)
    }
}

/// |f|^2 on the solution grid.
pub fn density(sol: &impl Profile) -> (Vec<f64>, Vec<f64>) {
    (sol.coordinates().to_vec(), sol.samples().iter().map(|v| v * v).collect())
}

/// <r^2> (or <x^2> over the whole line in 1D).
pub fn mean_square_separation(sol: &impl Profile) -> f64 {
    let d = sol.samples();
    let peak = d.iter().fold(0.0f64, |m, v| m.max(v * v));
    // the left end is only a tail on a full line
    let left = if sol.coordinates()[0] < 0.0 { d[0] * d[0] } else { 0.0 };
    let edge = left.max(d[d.len() - 1].powi(2));
    if edge > TAIL_DENSITY * peak {
        warn!("density at the grid edge is {:.1e} of its peak; <r^2> may be truncated", edge / peak);
    }
    sol.weighted(&|r| r * r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPoint {
    pub dim: Dimension,
    pub v0: f64,
    pub a: f64,
    /// sqrt(<r^2>)
    pub avg_separation: f64,
    pub energy: f64,
}

fn ground(dim: Dimension) -> ChannelSpec {
    ChannelSpec { dim, n: 0, l: 0 }
}

pub fn correlation_point(dim: Dimension, v0: f64, a: f64) -> Result<CorrelationPoint> {
    let sol = analytic::solve(ground(dim), StepPotential::new(v0, a)?)?;
    Ok(CorrelationPoint { dim, v0, a, avg_separation: mean_square_separation(&sol).sqrt(), energy: sol.energy })
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Ground-state separation and energy over a range of ranges. Failed points
/// are kept as errors.
pub fn correlation_scan(dim: Dimension, v0: f64, a_lo: f64, a_hi: f64, points: usize) -> Vec<Result<CorrelationPoint>> {
    linspace(a_lo, a_hi, points).into_par_iter().map(|a| correlation_point(dim, v0, a)).collect()
}

/// Ground-state energies only, for locating the critical range.
pub fn ground_energy_scan(dim: Dimension, v0: f64, a_lo: f64, a_hi: f64, points: usize) -> Vec<(f64, Result<f64>)> {
    linspace(a_lo, a_hi, points)
        .into_par_iter()
        .map(|a| (a, StepPotential::new(v0, a).and_then(|p| eigenvalue(ground(dim), p))))
        .collect()
}

/// Smallest scanned range whose ground energy lies more than `drop` below
/// the zero-range value (the free oscillator). `None` if it never does.
pub fn critical_range(dim: Dimension, scan: &[(f64, Result<f64>)], drop: f64) -> Option<f64> {
    let plateau = ho_energy(ground(dim));
    scan.iter().find(|(_, e)| matches!(e, Ok(e) if *e < plateau - drop)).map(|(a, _)| *a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_moments() {
        let s = analytic::solve(ground(Dimension::One), StepPotential::new(0.0, 1.0).unwrap()).unwrap();
        assert!((mean_square_separation(&s) - 1.0).abs() < 1e-10);
        let (x, d) = density(&s);
        let k = x.len() / 2;
        assert!((d[k] - (2.0 * std::f64::consts::PI).powf(-0.5)).abs() < 1e-10);
        let s = analytic::solve(ground(Dimension::Two), StepPotential::new(0.0, 1.0).unwrap()).unwrap();
        assert!((mean_square_separation(&s) - 2.0).abs() < 1e-9);
        let s = analytic::solve(ChannelSpec::one_d(1), StepPotential::new(0.0, 1.0).unwrap()).unwrap();
        let (x, d) = density(&s);
        let k = x.iter().position(|&v| v == 0.0).unwrap();
        assert_eq!(d[k], 0.0);
    }

    #[test]
    fn critical_range_picks_first_drop() {
        let scan = vec![(0.0, Ok(0.5)), (0.1, Ok(0.47)), (0.2, Ok(0.44)), (0.3, Ok(0.3))];
        assert_eq!(critical_range(Dimension::One, &scan, CRITICAL_DROP), Some(0.2));
        assert_eq!(critical_range(Dimension::One, &scan[..2], CRITICAL_DROP), None);
    }

    #[test]
    fn gridded_profile_moments() {
        use crate::analytic::EnergyWindow;
        use crate::numerov::{numerov_eigen, NumerovGrid};
        let c = ground(Dimension::Three);
        let p = StepPotential::free();
        let w = EnergyWindow::default_for(c, p);
        let (_, s) = numerov_eigen(c, &p, &NumerovGrid::default_radial_log(), w, 1).unwrap().remove(0);
        // 3D ground state: <r^2> = 3
        assert!((mean_square_separation(&s) - 3.0).abs() < 1e-6);
        let (_, d) = density(&s);
        assert!(d.iter().all(|v| *v >= 0.0));
    }
}
