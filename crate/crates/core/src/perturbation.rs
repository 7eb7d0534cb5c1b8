//! First-order correction from the step toward the Rydberg interaction.
//!
//! v_ryd = v_step + v_pert; the step problem is solved quasi-exactly and
//! v_pert is treated to first order.

use crate::analytic::{self, build_solution, default_extent, eigenvalues, EnergyWindow, PiecewiseSolution};
use crate::error::{Error, Result};
use crate::grid::SegmentedGrid;
use crate::model::{rydberg_value, step_value, ChannelSpec, Dimension, RydbergPotential, StepPotential};
use crate::numerov::{numerov_eigenvalue, NumerovGrid};

pub fn v_pert(q: RydbergPotential, p: StepPotential, r: f64) -> f64 {
    rydberg_value(q, r) - step_value(p, r)
}

/// Segments of the solution grid lying inside the step.
fn inside(grid: &SegmentedGrid, a: f64) -> impl Iterator<Item = usize> + '_ {
    (0..grid.segments()).filter(move |&k| {
        let (lo, hi) = grid.segment_bounds(k);
        grid.points[lo].abs() <= a && grid.points[hi].abs() <= a
    })
}

fn check_resolved(sol: &PiecewiseSolution) -> Result<()> {
    let a = sol.potential.a;
    if a == 0.0 {
        return Ok(());
    }
    let pts = sol.points();
    let spacing = (pts[pts.len() - 1] - pts[0]) / (pts.len() - 1) as f64;
    if !pts.iter().any(|&x| (x.abs() - a).abs() <= spacing) {
        return Err(Error::GridTooCoarse { a });
    }
    Ok(())
}

/// E1 = <f| v_pert |f> on the solution's own grid. The step part is
/// integrated segment by segment, so the jump at r = a costs no accuracy.
pub fn first_order_energy(sol: &PiecewiseSolution, q: RydbergPotential) -> Result<f64> {
    check_resolved(sol)?;
    let p = sol.potential;
    let density = |i: usize| sol.values[i] * sol.values[i];
    let smooth = sol.grid.integrate(|i, x| density(i) * rydberg_value(q, x.abs()));
    let trapped: f64 = inside(&sol.grid, p.a).map(|k| sol.grid.integrate_segment(k, |i, _| density(i))).sum();
    Ok(smooth - p.v0 * trapped)
}

/// Same integral by the trapezoid rule with the step sampled pointwise,
/// used to cross-check the quadrature.
pub fn first_order_energy_trapezoid(sol: &PiecewiseSolution, q: RydbergPotential) -> f64 {
    let pts = sol.points();
    let p = sol.potential;
    let density = |i: usize| sol.values[i] * sol.values[i];
    pts.windows(2)
        .enumerate()
        .map(|(i, w)| {
            // the step is constant on each interval since a is a node
            let step = step_value(p, (0.5 * (w[0] + w[1])).abs());
            let f = |j: usize, x: f64| density(j) * (rydberg_value(q, x.abs()) - step);
            0.5 * (w[1] - w[0]) * (f(i, w[0]) + f(i + 1, w[1]))
        })
        .sum()
}

/// Step energy, first-order corrected energy and the Numerov energy of the
/// Rydberg problem for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationReport {
    pub channel: ChannelSpec,
    pub step: StepPotential,
    pub rydberg: RydbergPotential,
    pub e_step: f64,
    pub e_corrected: f64,
    pub e_numerov: f64,
}

impl PerturbationReport {
    pub fn gap_before(&self) -> f64 {
        (self.e_step - self.e_numerov).abs()
    }

    pub fn gap_after(&self) -> f64 {
        (self.e_corrected - self.e_numerov).abs()
    }
}

pub fn compare(c: ChannelSpec, p: StepPotential, q: RydbergPotential) -> Result<PerturbationReport> {
    compare_on(c, p, q, &NumerovGrid::default_for(c.dim))
}

pub fn compare_on(c: ChannelSpec, p: StepPotential, q: RydbergPotential, grid: &NumerovGrid) -> Result<PerturbationReport> {
    let sol = analytic::solve(c, p)?;
    let e1 = first_order_energy(&sol, q)?;
    let w = EnergyWindow::bounding(c, q.g.min(0.0), q.g.max(0.0));
    let e_numerov = numerov_eigenvalue(c, &q, grid, w)?;
    Ok(PerturbationReport { channel: c, step: p, rydberg: q, e_step: sol.energy, e_corrected: sol.energy + e1, e_numerov })
}

/// First-order corrected eigenfunction, sum over `basis` unperturbed states
/// of the same symmetry class. Experimental: the correction does not
/// improve agreement with the exact Rydberg states.
pub fn first_order_state(c: ChannelSpec, p: StepPotential, q: RydbergPotential, basis: usize) -> Result<PiecewiseSolution> {
    let k = c.root_index();
    let top = ChannelSpec {
        n: match c.dim {
            Dimension::One => (2 * (basis.max(k + 1) - 1) + (c.n % 2) as usize) as u32,
            _ => (basis.max(k + 1) - 1) as u32,
        },
        ..c
    };
    let energies = eigenvalues(c, p, EnergyWindow::default_for(top, p), basis.max(k + 1))?;
    let r_max = default_extent(energies[energies.len() - 1], p.a);
    let n_grid = analytic::DEFAULT_GRID_POINTS;
    let states: Vec<PiecewiseSolution> = energies
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            let n = match c.dim {
                Dimension::One => 2 * j as u32 + c.n % 2,
                _ => j as u32,
            };
            build_solution(ChannelSpec { n, ..c }, p, e, r_max, n_grid)
        })
        .collect::<Result<_>>()?;
    let target = &states[k];
    let grid = &target.grid;
    let coupling = |m: &PiecewiseSolution| -> f64 {
        let smooth = grid.integrate(|i, x| m.values[i] * target.values[i] * rydberg_value(q, x.abs()));
        let trapped: f64 =
            inside(grid, p.a).map(|s| grid.integrate_segment(s, |i, _| m.values[i] * target.values[i])).sum();
        smooth - p.v0 * trapped
    };
    let mut values = target.values.clone();
    for (j, m) in states.iter().enumerate() {
        if j == k {
            continue;
        }
        let amp = coupling(m) / (target.energy - m.energy);
        for (v, mv) in values.iter_mut().zip(&m.values) {
            *v += amp * mv;
        }
    }
    let norm = grid.integrate(|i, _| values[i] * values[i]).sqrt();
    for v in values.iter_mut() {
        *v /= norm;
    }
    Ok(PiecewiseSolution { values, ..target.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_perturbation() {
        let q = RydbergPotential::new(5.0, 1.0).unwrap();
        let p = StepPotential::new(5.0, 1.0).unwrap();
        assert_eq!(v_pert(q, p, 0.0), 0.0);
        assert_eq!(v_pert(q, p, 1.0), -2.5);
        assert!((v_pert(q, p, 2.0) - 5.0 / 65.0).abs() < 1e-15);
    }

    #[test]
    fn vanishing_perturbation() {
        let sol = analytic::solve(ChannelSpec::one_d(0), StepPotential::new(0.0, 1.0).unwrap()).unwrap();
        let q = RydbergPotential::new(0.0, 1.0).unwrap();
        assert_eq!(first_order_energy(&sol, q).unwrap(), 0.0);
    }

    #[test]
    fn oscillator_expectation_of_the_rydberg_tail() {
        // int e^{-x^2/2}/sqrt(2 pi) 5/(1+x^6) dx, mpmath quad
        let want = 3.404_456_857_997_983;
        let sol = analytic::solve(ChannelSpec::one_d(0), StepPotential::new(0.0, 0.7).unwrap()).unwrap();
        let got = first_order_energy(&sol, RydbergPotential::new(5.0, 1.0).unwrap()).unwrap();
        assert!((got - want).abs() < 1e-8, "{got}");
    }

    #[test]
    fn quadratures_agree() {
        let p = StepPotential::new(5.0, 1.0).unwrap();
        let q = RydbergPotential::new(5.0, 1.0).unwrap();
        for c in [ChannelSpec::one_d(0), ChannelSpec::radial(Dimension::Two, 0, 2).unwrap()] {
            let sol = analytic::solve(c, p).unwrap();
            let a = first_order_energy(&sol, q).unwrap();
            // the trapezoid rule is second order, so give it a denser grid
            let dense = build_solution(c, p, sol.energy, default_extent(sol.energy, p.a), 16001).unwrap();
            let b = first_order_energy_trapezoid(&dense, q);
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn correction_closes_the_gap() {
        let p = StepPotential::new(5.0, 1.0).unwrap();
        let q = RydbergPotential::new(5.0, 1.0).unwrap();
        let r = compare(ChannelSpec::one_d(0), p, q).unwrap();
        assert!(r.gap_after() < r.gap_before(), "{r:?}");
    }
}
