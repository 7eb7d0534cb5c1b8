//! Quasi-exact eigensolver for the step interaction.
//!
//! With z = r^2/2 every channel reduces to f = r^p e^{-r^2/4} w(z) where w
//! solves Kummer's equation with b = L + 1 and p = L + 1/2:
//!
//! | channel   | L        |
//! |-----------|----------|
//! | 1D even   | -1/2     |
//! | 1D odd    | 1/2      |
//! | 2D        | l        |
//! | 3D        | l + 1/2  |
//!
//! Inside the step w = M((b - E + v0)/2, b, z), which is regular at the
//! origin. Outside, w = U((b - E)/2, b, z) in 2D/3D and the decaying Weber
//! function D_{E-1/2}(x) in 1D. Eigenvalues are the zeros of the
//! normalised Wronskian of the two branches at r = a.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::grid::{count_nodes, SegmentedGrid};
use crate::model::{effective_l, ho_energy, ChannelSpec, Dimension, StepPotential};
use crate::specialfns::{kummer_m, kummer_m_dz, tricomi_u, tricomi_u_with_dz, weber_d, weber_d_dz, HypArgs};

pub const DEFAULT_SCAN_STEP: f64 = 0.01;
pub const DEFAULT_GRID_POINTS: usize = 4001;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOLERANCE: f64 = 1e-11;
const CONTINUITY_TOLERANCE: f64 = 1e-8;

/// Energy interval searched for sign changes of the matching determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    pub e_min: f64,
    pub e_max: f64,
    pub scan_step: f64,
}

impl EnergyWindow {
    pub fn new(e_min: f64, e_max: f64, scan_step: f64) -> Result<Self> {
        if !(e_min < e_max) || !(scan_step > 0.0) || !e_min.is_finite() || !e_max.is_finite() {
            return Err(domain(format!("bad energy window [{e_min}, {e_max}] step {scan_step}")));
        }
        Ok(EnergyWindow { e_min, e_max, scan_step })
    }

    /// Brackets every state of `c`'s symmetry class up to and including `c`:
    /// the spectrum is squeezed between the free one shifted by min(v0, 0)
    /// and by max(v0, 0).
    pub fn default_for(c: ChannelSpec, p: StepPotential) -> Self {
        Self::bounding(c, p.v0.min(0.0), p.v0.max(0.0))
    }

    /// Same bracket for any interaction with values in [v_min, v_max].
    pub fn bounding(c: ChannelSpec, v_min: f64, v_max: f64) -> Self {
        let n = if c.dim == Dimension::One { c.n % 2 } else { 0 };
        let lowest = ChannelSpec { n, ..c };
        EnergyWindow {
            e_min: ho_energy(lowest) + v_min.min(0.0) - 1.0,
            e_max: ho_energy(c) + v_max.max(0.0) + 1.0,
            scan_step: DEFAULT_SCAN_STEP,
        }
    }
}

/// Kummer parameters of one symmetry class.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Branch {
    beta: f64,
    power: f64,
    weber_outer: bool,
}

impl Branch {
    fn of(c: ChannelSpec) -> Result<Self> {
        match c.dim {
            Dimension::One => Ok(Self::one_d(c.is_odd_1d())),
            _ => Ok(Self::radial(effective_l(c.dim, c.l)?)),
        }
    }

    fn one_d(odd: bool) -> Self {
        let l_eff = if odd { 0.5 } else { -0.5 };
        Branch { beta: l_eff + 1.0, power: l_eff + 0.5, weber_outer: true }
    }

    fn radial(l_eff: f64) -> Self {
        Branch { beta: l_eff + 1.0, power: l_eff + 0.5, weber_outer: false }
    }

    /// r^p e^{-r^2/4}
    fn prefactor(&self, r: f64) -> f64 {
        if self.power == 0.0 {
            (-0.25 * r * r).exp()
        } else {
            (self.power * r.ln() - 0.25 * r * r).exp()
        }
    }

    /// (f, f') of the regular solution at r, divided by the prefactor.
    fn inner(&self, eps: f64, r: f64) -> Result<[f64; 2]> {
        let args = HypArgs::new(0.5 * (self.beta - eps), self.beta, 0.5 * r * r)?;
        let m = kummer_m(args)?;
        let dm = kummer_m_dz(args)?;
        Ok([m, m * (self.power / r - 0.5 * r) + r * dm])
    }

    /// (f, f') of the decaying solution at r, divided by the prefactor.
    fn outer(&self, e: f64, r: f64) -> Result<[f64; 2]> {
        if self.weber_outer {
            let nu = e - 0.5;
            let s = 1.0 / self.prefactor(r);
            return Ok([weber_d(nu, r)? * s, weber_d_dz(nu, r)? * s]);
        }
        let args = HypArgs::new(0.5 * (self.beta - e), self.beta, 0.5 * r * r)?;
        let (u, du) = tricomi_u_with_dz(args)?;
        Ok([u, u * (self.power / r - 0.5 * r) + r * du])
    }

    /// Decaying solution itself (not divided by the prefactor).
    fn outer_value(&self, e: f64, r: f64) -> Result<f64> {
        if self.weber_outer {
            return Ok(weber_d(e - 0.5, r)?);
        }
        let args = HypArgs::new(0.5 * (self.beta - e), self.beta, 0.5 * r * r)?;
        Ok(self.prefactor(r) * tricomi_u(args)?)
    }

    fn inner_value(&self, eps: f64, r: f64) -> Result<f64> {
        let args = HypArgs::new(0.5 * (self.beta - eps), self.beta, 0.5 * r * r)?;
        Ok(self.prefactor(r) * kummer_m(args)?)
    }
}

/// Where the branches are joined and the energy felt inside. A zero-range
/// step is no interaction at all, so the join is moved to r = 1.
fn matching_point(p: StepPotential, e: f64) -> (f64, f64) {
    if p.a > 0.0 {
        (p.a, e - p.v0)
    } else {
        (1.0, e)
    }
}

fn determinant(b: Branch, p: StepPotential, e: f64) -> Result<f64> {
    let (r, eps) = matching_point(p, e);
    let i = b.inner(eps, r)?;
    let o = b.outer(e, r)?;
    let norm = i[0].hypot(i[1]) * o[0].hypot(o[1]);
    if norm == 0.0 || !norm.is_finite() {
        return Err(domain(format!("degenerate matching vectors at E={e}")));
    }
    Ok((i[0] * o[1] - i[1] * o[0]) / norm)
}

/// Wronskian f_in f_out' - f_in' f_out at the step edge, divided by the
/// lengths of the two (f, f') vectors: the sine of the angle between them.
/// Vanishes exactly at eigenvalues and is continuous in E.
pub fn matching_determinant(c: ChannelSpec, p: StepPotential, e: f64) -> Result<f64> {
    determinant(Branch::of(c)?, p, e)
}

/// Matching determinant of the radial problem with parameter `l_eff`
/// (l in 2D, l + 1/2 in 3D).
pub fn radial_matching_determinant(l_eff: f64, p: StepPotential, e: f64) -> Result<f64> {
    determinant(Branch::radial(l_eff), p, e)
}

/// Lowest `count` zeros of `f` in the window, scanned upward at
/// `w.scan_step` and bisected.
pub(crate) fn scan_roots(f: impl Fn(f64) -> Result<f64>, w: EnergyWindow, count: usize, tol: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::with_capacity(count);
    let mut lo = w.e_min;
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        roots.push(lo);
    }
    let steps = ((w.e_max - w.e_min) / w.scan_step).ceil() as usize;
    for k in 1..=steps {
        if roots.len() >= count {
            break;
        }
        let hi = (w.e_min + k as f64 * w.scan_step).min(w.e_max);
        let f_hi = f(hi)?;
        if f_hi == 0.0 {
            roots.push(hi);
        } else if f_lo != 0.0 && f_lo.signum() != f_hi.signum() {
            roots.push(bisect(&f, lo, hi, f_lo, tol)?);
        }
        lo = hi;
        f_lo = f_hi;
    }
    if roots.len() < count {
        return Err(Error::WindowTooNarrow { e_min: w.e_min, e_max: w.e_max, found: roots.len(), requested: count });
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> Result<f64> {
    let tol = tol.max(4.0 * f64::EPSILON * hi.abs().max(lo.abs()));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lowest `count` eigenvalues of the symmetry class of `c` (the parity of n
/// in 1D, the angular momentum l otherwise). The k-th entry is the state
/// with k radial nodes; in 1D it is n = 2k + parity.
pub fn eigenvalues(c: ChannelSpec, p: StepPotential, w: EnergyWindow, count: usize) -> Result<Vec<f64>> {
    match c.dim {
        Dimension::One => {
            let b = Branch::of(c)?;
            scan_roots(|e| determinant(b, p, e), w, count, ROOT_TOLERANCE)
        }
        _ => radial_eigenvalues(effective_l(c.dim, c.l)?, p, w, count),
    }
}

/// Radial eigenvalues for parameter `l_eff`; 2D and 3D channels both land
/// here.
pub fn radial_eigenvalues(l_eff: f64, p: StepPotential, w: EnergyWindow, count: usize) -> Result<Vec<f64>> {
    let b = Branch::radial(l_eff);
    scan_roots(|e| determinant(b, p, e), w, count, ROOT_TOLERANCE)
}

/// Energy of the single state `c`, searched in the default window.
pub fn eigenvalue(c: ChannelSpec, p: StepPotential) -> Result<f64> {
    let k = c.root_index();
    let roots = eigenvalues(c, p, EnergyWindow::default_for(c, p), k + 1)?;
    Ok(roots[k])
}

/// Eigenfunction sampled on a grid with a node at the step edge.
///
/// 1D: `values` is phi(x) on [-x_max, x_max], normalised over the line.
/// 2D/3D: `values` is f(r) on [0, r_max] with the Jacobian absorbed, so
/// int f^2 dr = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSolution {
    pub channel: ChannelSpec,
    pub potential: StepPotential,
    pub energy: f64,
    /// Multiplies r^p e^{-r^2/4} M inside the step.
    pub inner_coeff: f64,
    /// Multiplies D_nu (1D) or r^p e^{-r^2/4} U (2D/3D) outside.
    pub outer_coeff: f64,
    /// Relative mismatch of (f, f') at the join.
    pub continuity_residual: f64,
    pub grid: SegmentedGrid,
    pub values: Vec<f64>,
}

impl PiecewiseSolution {
    pub fn points(&self) -> &[f64] {
        &self.grid.points
    }

    pub fn nodes(&self) -> usize {
        count_nodes(&self.values)
    }

    /// Integral of g(r) |f|^2 over the represented space.
    pub fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.grid.integrate(|i, x| g(x) * self.values[i] * self.values[i])
    }
}

/// Default outer extent: past the classical turning point by eight lengths.
pub fn default_extent(e: f64, a: f64) -> f64 {
    2.0 * e.max(0.0).sqrt().max(0.5 * a) + 8.0
}

/// Assembles and normalises the eigenfunction at an eigenvalue `e`.
pub fn build_solution(c: ChannelSpec, p: StepPotential, e: f64, r_max: f64, n_grid: usize) -> Result<PiecewiseSolution> {
    let b = Branch::of(c)?;
    if !(r_max > p.a) {
        return Err(domain(format!("grid extent {r_max} must exceed the range {}", p.a)));
    }
    let (rm, eps) = matching_point(p, e);
    let i = b.inner(eps, rm)?;
    let o = b.outer(e, rm)?;
    let scale = (o[0] * i[0] + o[1] * i[1]) / (o[0] * o[0] + o[1] * o[1]);
    let residual = (i[0] - scale * o[0]).hypot(i[1] - scale * o[1]) / i[0].hypot(i[1]);
    if !(residual <= CONTINUITY_TOLERANCE) {
        return Err(Error::NotAnEigenvalue { energy: e, residual });
    }
    let mut outer_coeff = scale;
    let mut inner_coeff = 1.0;

    let one_d = c.dim == Dimension::One;
    let breaks: Vec<f64> = if one_d {
        vec![-r_max, -p.a, 0.0, p.a, r_max]
    } else {
        vec![0.0, p.a, r_max]
    };
    let grid = SegmentedGrid::new(&breaks, n_grid)?;

    let half = |r: f64| -> Result<f64> {
        if r == 0.0 {
            return Ok(if b.power == 0.0 { inner_coeff } else { 0.0 });
        }
        if r <= p.a || (p.a == 0.0 && r <= rm) {
            Ok(inner_coeff * b.inner_value(eps, r)?)
        } else {
            Ok(outer_coeff * b.outer_value(e, r)?)
        }
    };
    let odd = c.is_odd_1d();
    let mut values: Vec<f64> = grid
        .points
        .par_iter()
        .map(|&x| {
            let v = half(x.abs())?;
            Ok(if odd && x < 0.0 { -v } else { v })
        })
        .collect::<Result<_>>()?;

    let norm = grid.integrate(|k, _| values[k] * values[k]).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(domain(format!("eigenfunction at E={e} cannot be normalised")));
    }
    for v in values.iter_mut() {
        *v /= norm;
    }
    inner_coeff /= norm;
    outer_coeff /= norm;
    Ok(PiecewiseSolution {
        channel: c,
        potential: p,
        energy: e,
        inner_coeff,
        outer_coeff,
        continuity_residual: residual,
        grid,
        values,
    })
}

/// Finds the eigenvalue of `c` and builds its eigenfunction on the default
/// grid.
pub fn solve(c: ChannelSpec, p: StepPotential) -> Result<PiecewiseSolution> {
    let e = eigenvalue(c, p)?;
    build_solution(c, p, e, default_extent(e, p.a), DEFAULT_GRID_POINTS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    V0,
    Range,
}

/// One-parameter sweep: `axis` runs over `points` values in [lo, hi] while
/// the other parameter is held at `fixed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub axis: ScanAxis,
    pub fixed: f64,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl ScanSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n).map(|k| self.lo + (self.hi - self.lo) * k as f64 / (n - 1) as f64).collect(),
        }
    }

    pub fn potential_at(&self, value: f64) -> Result<StepPotential> {
        match self.axis {
            ScanAxis::V0 => StepPotential::new(value, self.fixed),
            ScanAxis::Range => StepPotential::new(self.fixed, value),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub scan_value: f64,
    pub channel: ChannelSpec,
    pub energy: Result<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub spec: ScanSpec,
    /// Ordered by scan value, then by the order of the requested channels.
    pub rows: Vec<ScanRow>,
}

/// Energies of `channels` along the sweep. Channels sharing a symmetry
/// class are taken from one root search, so each level is identified by its
/// node count and branches never swap. Failed points are kept as errors.
pub fn spectrum_scan(channels: &[ChannelSpec], scan: &ScanSpec, scan_step: f64) -> ScanResult {
    let values = scan.values();
    let rows = values
        .par_iter()
        .flat_map_iter(|&value| scan_point(channels, scan, value, scan_step))
        .collect();
    ScanResult { spec: *scan, rows }
}

fn same_class(a: &ChannelSpec, b: &ChannelSpec) -> bool {
    a.dim == b.dim && a.l == b.l && (a.dim != Dimension::One || a.n % 2 == b.n % 2)
}

fn scan_point(channels: &[ChannelSpec], scan: &ScanSpec, value: f64, scan_step: f64) -> Vec<ScanRow> {
    let p = scan.potential_at(value);
    let mut energies: Vec<Option<Result<f64>>> = vec![None; channels.len()];
    for (i, c) in channels.iter().enumerate() {
        if energies[i].is_some() {
            continue;
        }
        let class: Vec<usize> = (i..channels.len()).filter(|&j| same_class(c, &channels[j])).collect();
        let top = class.iter().map(|&j| channels[j]).max_by_key(|c| c.n).unwrap_or(*c);
        let roots = p.clone().and_then(|p| {
            let w = EnergyWindow { scan_step, ..EnergyWindow::default_for(top, p) };
            eigenvalues(top, p, w, top.root_index() + 1)
        });
        for &j in &class {
            energies[j] = Some(match &roots {
                Ok(r) => Ok(r[channels[j].root_index()]),
                Err(e) => Err(e.clone()),
            });
        }
    }
    channels
        .iter()
        .zip(energies)
        .map(|(&channel, energy)| ScanRow { scan_value: value, channel, energy: energy.expect("every channel visited") })
        .collect()
}
