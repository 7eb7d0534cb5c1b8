mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use steptrap::analytic::{eigenvalue, solve};
use steptrap::dynamics::{
    fidelity, local_extrema, oscillation_period, overlap, resample, run_quench, ComplexField, Propagator, QuenchScenario,
};
use steptrap::grid::interpolate;
use steptrap::model::{ChannelSpec, StepPotential};

fn step(v0: f64) -> StepPotential {
    StepPotential::new(v0, 1.0).unwrap()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn stationary_state_stays_put() {
    let mut s = QuenchScenario::new(step(-5.0), step(-5.0), 10.0);
    s.snapshot_times = vec![0.0, 10.0];
    let ts = run_quench(&s, ChannelSpec::one_d(0)).unwrap();
    assert_eq!(ts.times.len(), ts.fidelity.len());
    assert_eq!(ts.times.len(), 1001);
    assert_abs_diff_eq!(ts.fidelity[0], 1.0, epsilon = 1e-9);
    assert!(ts.fidelity.iter().all(|f| *f >= 1.0 - 1e-3));
    assert!(ts.norm.iter().all(|n| (n - 1.0).abs() <= 1e-6));
    let sep = ts.avg_separation[0];
    assert!(ts.avg_separation.iter().all(|s| (s - sep).abs() < 1e-3));
}

#[test]
fn stationary_density_on_a_fine_grid() {
    let mut s = QuenchScenario::new(step(-5.0), step(-5.0), 10.0);
    s.dx = 0.02;
    s.sample_every = 5000;
    s.snapshot_times = vec![0.0, 10.0];
    let ts = run_quench(&s, ChannelSpec::one_d(0)).unwrap();
    let (d0, d1) = (&ts.snapshots[0].1, &ts.snapshots[1].1);
    let worst = d0.iter().zip(d1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn norm_after_ten_thousand_steps() {
    let sol = solve(ChannelSpec::one_d(0), step(5.0)).unwrap();
    let mut psi = resample(&sol, -30.0, 30.0, 0.04).unwrap();
    let mut prop = Propagator::new(&psi, &step(-12.0), 0.0002).unwrap();
    for _ in 0..10_000 {
        prop.step(&mut psi);
    }
    assert!((psi.norm() - 1.0).abs() < 1e-6);
    assert_abs_diff_eq!(psi.time, 2.0, epsilon = 1e-9);
}

#[test]
fn stationary_phase_follows_the_energy() {
    let c = ChannelSpec::one_d(0);
    let e = eigenvalue(c, step(-5.0)).unwrap();
    let sol = solve(c, step(-5.0)).unwrap();
    let psi0 = resample(&sol, -30.0, 30.0, 0.04).unwrap();
    let mut psi = psi0.clone();
    let mut prop = Propagator::new(&psi, &step(-5.0), 0.0002).unwrap();
    for _ in 0..5000 {
        prop.step(&mut psi);
    }
    let phase = overlap(&psi0, &psi).unwrap().arg();
    let want = (-e * psi.time).rem_euclid(2.0 * PI);
    let diff = (phase.rem_euclid(2.0 * PI) - want + PI).rem_euclid(2.0 * PI) - PI;
    assert!(diff.abs() < 1e-3, "{phase} vs {want}");
}

#[test]
fn release_into_the_bare_trap() {
    let s = QuenchScenario::new(step(-5.0), step(0.0), 10.0);
    let ts = run_quench(&s, ChannelSpec::one_d(0)).unwrap();
    let sol = solve(ChannelSpec::one_d(0), step(-5.0)).unwrap();
    let coeffs = common::oscillator_coefficients(&sol.grid, &sol.values, 40);
    let captured: f64 = coeffs.iter().map(|c| c * c).sum();
    assert!((captured - 1.0).abs() < 1e-4, "{captured}");
    let oracle: Vec<f64> = ts.times.iter().map(|&t| common::free_mean_square(&coeffs, t).sqrt()).collect();
    let want = oscillation_period(&ts.times, &oracle).unwrap();
    let got = oscillation_period(&ts.times, &ts.avg_separation).unwrap();
    assert!((want - PI).abs() < 1e-3 * PI);
    assert!((got - want).abs() < 0.02 * want, "{got} vs {want}");
    // periodic about the oracle mean
    assert_abs_diff_eq!(mean(&ts.avg_separation), mean(&oracle), epsilon = 5e-3);
    for (a, b) in ts.avg_separation.iter().zip(&oracle) {
        assert!((a - b).abs() < 5e-3, "{a} vs {b}");
    }
}

#[test]
fn strong_repulsive_quench_delocalises() {
    let mut s = QuenchScenario::new(step(-5.0), step(12.0), 10.0);
    s.snapshot_times = vec![0.0, 1.0, 2.0, 5.0];
    let strong = run_quench(&s, ChannelSpec::one_d(0)).unwrap();
    let stationary = strong.avg_separation[0];
    let peak = strong.avg_separation.iter().cloned().fold(0.0, f64::max);
    assert!(peak > 2.0 * stationary, "{peak} vs {stationary}");
    let d0 = &strong.snapshots[0].1;
    for (_, d) in &strong.snapshots[1..] {
        let change = d.iter().zip(d0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(change > 0.1, "{change}");
    }
    // the weaker quench localises better
    s.quenched = step(5.0);
    let weak = run_quench(&s, ChannelSpec::one_d(0)).unwrap();
    assert!(mean(&strong.avg_separation) > mean(&weak.avg_separation));
    // the post-quench Hamiltonian is time independent
    let e0 = weak.energy[0];
    assert!(weak.energy.iter().all(|e| ((e - e0) / e0).abs() < 1e-5));
}

#[test]
fn parity_survives_evolution() {
    let s = QuenchScenario::new(step(-5.0), step(12.0), 2.0);
    let sol = solve(ChannelSpec::one_d(0), s.initial).unwrap();
    let mut psi = resample(&sol, -30.0, 30.0, 0.04).unwrap();
    let mut prop = Propagator::new(&psi, &s.quenched, s.dt).unwrap();
    for _ in 0..s.steps() {
        prop.step(&mut psi);
    }
    assert!(psi.odd_part_norm() < 1e-6);
    assert!(local_extrema(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0], true).len() == 1);
}

#[test]
fn overlap_of_ground_states() {
    let a = solve(ChannelSpec::one_d(0), step(-5.0)).unwrap();
    let b = solve(ChannelSpec::one_d(0), step(0.0)).unwrap();
    let direct = a.grid.integrate(|i, x| a.values[i] * interpolate(&b.grid, &b.values, x));
    let fa = resample(&a, -30.0, 30.0, 0.04).unwrap();
    let fb = resample(&b, -30.0, 30.0, 0.04).unwrap();
    let f = fidelity(&fa, &fb).unwrap();
    assert!(f > 0.0 && f < 1.0);
    assert_abs_diff_eq!(f, direct.abs(), epsilon = 1e-4);
    let odd = resample(&solve(ChannelSpec::one_d(1), step(-5.0)).unwrap(), -30.0, 30.0, 0.04).unwrap();
    assert!(fidelity(&fa, &odd).unwrap() < 1e-12);
}

#[test]
fn bad_scenarios_are_rejected() {
    let mut s = QuenchScenario::new(step(0.0), step(1.0), 1.0);
    s.dt = 0.0;
    assert!(run_quench(&s, ChannelSpec::one_d(0)).is_err());
    let s = QuenchScenario::new(step(0.0), step(1.0), 1.0);
    let c = ChannelSpec::radial(steptrap::model::Dimension::Two, 0, 0).unwrap();
    assert!(run_quench(&s, c).is_err());
    let f = ComplexField::from_fn(-1.0, 1.0, 0.1, |_| Complex64::new(1.0, 0.0)).unwrap();
    assert!(Propagator::new(&f, &step(1.0), -1.0).is_err());
}
