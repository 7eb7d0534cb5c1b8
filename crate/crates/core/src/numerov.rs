//! Numerov shooting solver for arbitrary central interactions.
//!
//! Every mode is brought to y'' = Q y on a uniform lattice:
//! - 1D: y = phi(x) on the half line, Q = x^2/4 + v - E, with parity fixing
//!   the value or slope at the origin;
//! - radial linear: y = f(r), Q = (L^2 - 1/4)/r^2 + r^2/4 + v - E;
//! - radial log: r = e^s, f = r^{1/2} u(s), Q = L^2 + r^2 (r^2/4 + v - E).
//!
//! Sweeps run outward from the origin and inward from the far end and meet
//! at the outermost classical turning point.

use crate::analytic::{scan_roots, EnergyWindow};
use crate::error::{domain, Error, Result};
use crate::grid::count_nodes;
use crate::model::{effective_l, ChannelSpec, Dimension, RadialPotential};

pub const ROOT_TOLERANCE: f64 = 1e-10;
const RENORM_EVERY: usize = 100;
const RENORM_ABOVE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    Linear1d,
    RadialLinear,
    RadialLog,
}

/// Uniform lattice. In `RadialLog` mode the bounds are values of s = ln r.
/// `Linear1d` represents [-x_max, x_max] but only the half line [0, x_max]
/// is integrated, with `n_points` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumerovGrid {
    pub mode: GridMode,
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl NumerovGrid {
    pub fn new(mode: GridMode, x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 1000 {
            return Err(domain(format!("Numerov grid needs at least 1000 points, got {n_points}")));
        }
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(domain(format!("bad Numerov interval [{x_min}, {x_max}]")));
        }
        match mode {
            GridMode::Linear1d if x_min != -x_max => return Err(domain("1D grid must be symmetric about 0")),
            GridMode::RadialLinear if x_min < 0.0 => return Err(domain("radial grid must start at r >= 0")),
            _ => {}
        }
        Ok(NumerovGrid { mode, x_min, x_max, n_points })
    }

    pub fn default_1d() -> Self {
        NumerovGrid { mode: GridMode::Linear1d, x_min: -15.0, x_max: 15.0, n_points: 6001 }
    }

    pub fn default_radial_log() -> Self {
        NumerovGrid { mode: GridMode::RadialLog, x_min: 1e-4f64.ln(), x_max: 20f64.ln(), n_points: 8001 }
    }

    pub fn default_for(dim: Dimension) -> Self {
        match dim {
            Dimension::One => Self::default_1d(),
            _ => Self::default_radial_log(),
        }
    }

    /// Same extent with the lattice spacing halved.
    pub fn refined(&self) -> Self {
        NumerovGrid { n_points: 2 * self.n_points - 1, ..*self }
    }

    fn start(&self) -> f64 {
        match self.mode {
            GridMode::Linear1d => 0.0,
            _ => self.x_min,
        }
    }

    fn to_coordinate(&self, r: f64) -> f64 {
        match self.mode {
            GridMode::RadialLog => r.ln(),
            _ => r,
        }
    }
}

/// Eigenfunction on the lattice actually used (stored in `coords`), with
/// f(r) (or phi(x) for x >= 0) in `values`, normalised as the analytic
/// solutions: over the whole line in 1D, with int f^2 dr = 1 otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedSolution {
    pub grid: NumerovGrid,
    pub channel: ChannelSpec,
    pub energy: f64,
    /// Lattice coordinate: x, r or s = ln r.
    pub coords: Vec<f64>,
    /// Physical radius |x| or r of each node.
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Quadrature weights for integrals over the represented space.
    pub weights: Vec<f64>,
    /// Outward and inward log-derivatives at the join, y(m+1)/y(m).
    pub join_ratio: (f64, f64),
}

impl GriddedSolution {
    pub fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.radii.iter().zip(&self.values).zip(&self.weights).map(|((&r, &f), &w)| w * g(r) * f * f).sum()
    }

    pub fn nodes(&self) -> usize {
        // 1D values cover the half line only
        let half = count_nodes(&self.values);
        match self.channel.dim {
            Dimension::One => 2 * half + self.channel.is_odd_1d() as usize,
            _ => half,
        }
    }
}

/// Lattice with the interaction and centrifugal parts of Q precomputed,
/// Q_i(E) = base_i - E * e_weight_i.
struct Lattice {
    h: f64,
    coords: Vec<f64>,
    radii: Vec<f64>,
    base: Vec<f64>,
    e_weight: Vec<f64>,
    /// Energy-independent part of the small-r behaviour.
    power: f64,
    beta: f64,
    v_origin: f64,
    mode: GridMode,
    odd: bool,
    /// Node on the discontinuity and the jump Q(a+) - Q(a-) there.
    jump: Option<(usize, f64)>,
    /// Jump of dQ/ds at that node (the r^2 factor of log mode makes Q' jump
    /// too).
    jump_slope: f64,
}

impl Lattice {
    fn new(c: ChannelSpec, v: &dyn RadialPotential, g: &NumerovGrid) -> Result<Self> {
        let l_eff = match (g.mode, c.dim) {
            (GridMode::Linear1d, Dimension::One) => if c.is_odd_1d() { 0.5 } else { -0.5 },
            (GridMode::Linear1d, _) | (_, Dimension::One) => {
                return Err(domain("1D channels need the 1D grid and radial channels a radial grid"))
            }
            _ => effective_l(c.dim, c.l)?,
        };
        let start = g.start();
        let n = g.n_points;
        let mut h = (g.x_max - start) / (n - 1) as f64;
        // put a lattice node on the discontinuity
        let jump = v.jump_at().map(|a| g.to_coordinate(a)).filter(|&s| s > start && s < g.x_max);
        if let Some(s) = jump {
            let k = ((s - start) / h).round().max(1.0);
            h = (s - start) / k;
        }
        let coords: Vec<f64> = (0..n).map(|i| start + i as f64 * h).collect();
        let jump_index = jump.map(|s| ((s - start) / h).round() as usize);
        let radii: Vec<f64> = match g.mode {
            GridMode::RadialLog => coords.iter().map(|s| s.exp()).collect(),
            _ => coords.clone(),
        };
        let mut base = Vec::with_capacity(n);
        let mut e_weight = Vec::with_capacity(n);
        let centrifugal = l_eff * l_eff - 0.25;
        let mut jump = None;
        for (i, &r) in radii.iter().enumerate() {
            let vv = match (jump_index, v.jump_at()) {
                (Some(k), Some(a)) if k == i => {
                    let (left, right) = (v.value(a * (1.0 - 1e-12)), v.value(a * (1.0 + 1e-12)));
                    let scale = if g.mode == GridMode::RadialLog { r * r } else { 1.0 };
                    if k >= 2 && k + 2 < n {
                        jump = Some((k, (right - left) * scale));
                    }
                    0.5 * (left + right)
                }
                _ => v.value(r),
            };
            let (b, w) = match g.mode {
                GridMode::Linear1d => (0.25 * r * r + vv, 1.0),
                GridMode::RadialLinear => {
                    let cf = if centrifugal == 0.0 { 0.0 } else { centrifugal / (r * r) };
                    (cf + 0.25 * r * r + vv, 1.0)
                }
                GridMode::RadialLog => (l_eff * l_eff + r * r * (0.25 * r * r + vv), r * r),
            };
            base.push(b);
            e_weight.push(w);
        }
        Ok(Lattice {
            h,
            coords,
            radii,
            base,
            e_weight,
            power: l_eff + 0.5,
            beta: l_eff + 1.0,
            v_origin: v.value(0.0),
            mode: g.mode,
            odd: c.is_odd_1d(),
            jump,
            jump_slope: match (g.mode, jump) {
                (GridMode::RadialLog, Some((_, dq))) => 2.0 * dq,
                _ => 0.0,
            },
        })
    }

    fn len(&self) -> usize {
        self.coords.len()
    }

    fn q(&self, i: usize, e: f64) -> f64 {
        self.base[i] - e * self.e_weight[i]
    }

    /// Outermost node where Q turns from negative to positive, else the
    /// middle of the lattice.
    fn matching_index(&self, e: f64) -> usize {
        let n = self.len();
        let m = (1..n - 2).rev().find(|&i| self.q(i, e) < 0.0 && self.q(i + 1, e) >= 0.0).unwrap_or(n / 2);
        // keep the join clear of the jump node and its neighbours
        match self.jump {
            Some((k, _)) if m + 2 >= k && m <= k + 1 => k + 2,
            _ => m,
        }
    }

    /// Regular behaviour near the origin, r^p (1 - eps r^2 / (4 b)) with the
    /// local energy eps = E - v(0), converted to the lattice variable.
    fn regular_seed(&self, i: usize, e: f64) -> f64 {
        let r = self.radii[i];
        if r == 0.0 {
            return 0.0;
        }
        let eps = e - self.v_origin;
        let f = (self.power * r.ln()).exp() * (1.0 - eps * r * r / (4.0 * self.beta));
        match self.mode {
            GridMode::RadialLog => f / r.sqrt(),
            _ => f,
        }
    }

    /// Where Q jumps at a node, the one-sided Taylor terms no longer cancel
    /// and the Numerov relation misses h^3/12 (dQ y' + dQ' y); restoring it
    /// keeps the local error at fourth order.
    fn jump_defect(&self, dq: f64, y: f64, slope: f64) -> f64 {
        self.h.powi(3) / 12.0 * (dq * slope + self.jump_slope * y)
    }

    /// Numerov factor of node `i` in the relation centred on `centre`. The
    /// jump node stores the mean of its one-sided values; its neighbours need
    /// the limit from their own side.
    fn seen(&self, f: &[f64], i: usize, centre: usize) -> f64 {
        match self.jump {
            Some((k, dq)) if i == k && centre != k => {
                let half = self.h * self.h / 24.0 * dq;
                if centre > k {
                    f[k] - half
                } else {
                    f[k] + half
                }
            }
            _ => f[i],
        }
    }

    fn factors(&self, e: f64) -> Vec<f64> {
        let h2 = self.h * self.h / 12.0;
        (0..self.len()).map(|i| 1.0 - h2 * self.q(i, e)).collect()
    }

    /// Outward sweep over nodes 0..=m+1.
    fn outward(&self, e: f64, f: &[f64], m: usize) -> Result<Vec<f64>> {
        let mut y = vec![0.0; m + 2];
        match self.mode {
            GridMode::Linear1d if self.odd => {
                y[0] = 0.0;
                y[1] = self.h;
            }
            GridMode::Linear1d => {
                y[0] = 1.0;
                // mirror symmetry y(-h) = y(h)
                y[1] = (6.0 - 5.0 * f[0]) * y[0] / f[1];
            }
            _ => {
                y[0] = self.regular_seed(0, e);
                y[1] = self.regular_seed(1, e);
            }
        }
        // a node at r = 0 with a singular Q contributes nothing
        let w0 = |y0: f64, f0: f64| if y0 == 0.0 { 0.0 } else { y0 * f0 };
        for i in 1..=m {
            let mut rhs = (12.0 - 10.0 * f[i]) * y[i] - w0(y[i - 1], self.seen(f, i - 1, i));
            if let Some((k, dq)) = self.jump.filter(|j| j.0 == i) {
                let slope = (3.0 * y[k] - 4.0 * y[k - 1] + y[k - 2]) / (2.0 * self.h);
                rhs += self.jump_defect(dq, y[k], slope);
            }
            let next = rhs / self.seen(f, i + 1, i);
            y[i + 1] = next;
            if i % RENORM_EVERY == 0 {
                renormalise(&mut y[..=i + 1]);
            }
            if !next.is_finite() {
                return Err(Error::Overflow { energy: e });
            }
        }
        Ok(y)
    }

    /// Inward sweep over nodes m..=n-1, returned indexed from m.
    fn inward(&self, e: f64, f: &[f64], m: usize) -> Result<Vec<f64>> {
        let n = self.len();
        let mut y = vec![0.0; n - m];
        let top = n - 1 - m;
        y[top] = 0.0;
        y[top - 1] = 1.0;
        let mut steps = 0;
        for j in (1..top).rev() {
            let i = j + m;
            let mut rhs = (12.0 - 10.0 * f[i]) * y[j] - self.seen(f, i + 1, i) * y[j + 1];
            if let Some((_, dq)) = self.jump.filter(|jp| jp.0 == i) {
                let slope = (-3.0 * y[j] + 4.0 * y[j + 1] - y[j + 2]) / (2.0 * self.h);
                rhs += self.jump_defect(dq, y[j], slope);
            }
            y[j - 1] = rhs / self.seen(f, i - 1, i);
            steps += 1;
            if steps % RENORM_EVERY == 0 {
                renormalise(&mut y[j - 1..]);
            }
            if !y[j - 1].is_finite() {
                return Err(Error::Overflow { energy: e });
            }
        }
        renormalise(&mut y);
        Ok(y)
    }

    /// Normalised Casoratian of the two sweeps in the Numerov variable
    /// w = (1 - h^2 Q / 12) y, which is exactly conserved by the recurrence,
    /// so its sign does not depend on the join.
    fn mismatch(&self, e: f64) -> Result<(f64, Sweeps)> {
        let f = self.factors(e);
        let m = self.matching_index(e);
        let out = self.outward(e, &f, m)?;
        let inn = self.inward(e, &f, m)?;
        let (o0, o1) = (out[m] * f[m], out[m + 1] * f[m + 1]);
        let (i0, i1) = (inn[0] * f[m], inn[1] * f[m + 1]);
        let norm = o0.hypot(o1) * i0.hypot(i1);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Overflow { energy: e });
        }
        Ok(((o0 * i1 - o1 * i0) / norm, Sweeps { m, out, inn }))
    }
}

struct Sweeps {
    m: usize,
    out: Vec<f64>,
    inn: Vec<f64>,
}

fn renormalise(y: &mut [f64]) {
    let peak = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > RENORM_ABOVE || (peak > 0.0 && peak < 1.0 / RENORM_ABOVE) {
        for v in y.iter_mut() {
            *v /= peak;
        }
    }
}

/// Scaled mismatch of the outward and inward sweeps at energy `e`; zero at
/// eigenvalues of the lattice problem.
pub fn numerov_sweep(c: ChannelSpec, v: &dyn RadialPotential, g: &NumerovGrid, e: f64) -> Result<f64> {
    Ok(Lattice::new(c, v, g)?.mismatch(e)?.0)
}

/// Lowest `count` eigenpairs of `c`'s symmetry class in the window.
pub fn numerov_eigen(
    c: ChannelSpec,
    v: &dyn RadialPotential,
    g: &NumerovGrid,
    w: EnergyWindow,
    count: usize,
) -> Result<Vec<(f64, GriddedSolution)>> {
    let lattice = Lattice::new(c, v, g)?;
    let energies = scan_roots(|e| Ok(lattice.mismatch(e)?.0), w, count, ROOT_TOLERANCE)?;
    energies
        .into_iter()
        .enumerate()
        .map(|(k, e)| {
            let n = match c.dim {
                Dimension::One => 2 * k as u32 + c.n % 2,
                _ => k as u32,
            };
            let channel = ChannelSpec { n, ..c };
            Ok((e, stitch(&lattice, *g, channel, e)?))
        })
        .collect()
}

/// Eigenvalue of the single state `c`.
pub fn numerov_eigenvalue(c: ChannelSpec, v: &dyn RadialPotential, g: &NumerovGrid, w: EnergyWindow) -> Result<f64> {
    let lattice = Lattice::new(c, v, g)?;
    let k = c.root_index();
    let roots = scan_roots(|e| Ok(lattice.mismatch(e)?.0), w, k + 1, ROOT_TOLERANCE)?;
    Ok(roots[k])
}

fn stitch(lattice: &Lattice, grid: NumerovGrid, channel: ChannelSpec, e: f64) -> Result<GriddedSolution> {
    let (_, Sweeps { m, out, inn }) = lattice.mismatch(e)?;
    let n = lattice.len();
    // join on whichever of the two nodes is further from zero
    let k = if out[m].abs() >= out[m + 1].abs() { 0 } else { 1 };
    let scale = out[m + k] / inn[k];
    let mut y: Vec<f64> = out[..=m].to_vec();
    y.extend(inn[1..].iter().map(|v| v * scale));
    let join_ratio = (out[m + 1] / out[m], inn[1] / inn[0]);

    let h = lattice.h;
    let mut weights = simpson_weights(n, h);
    let values: Vec<f64> = match lattice.mode {
        GridMode::RadialLog => y.iter().zip(&lattice.radii).map(|(u, r)| u * r.sqrt()).collect(),
        _ => y,
    };
    match lattice.mode {
        GridMode::RadialLog => {
            // dr = r ds
            for (w, r) in weights.iter_mut().zip(&lattice.radii) {
                *w *= r;
            }
        }
        GridMode::Linear1d => {
            for w in weights.iter_mut() {
                *w *= 2.0;
            }
        }
        GridMode::RadialLinear => {}
    }
    let norm: f64 = values.iter().zip(&weights).map(|(f, w)| w * f * f).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Overflow { energy: e });
    }
    // positive near the origin
    let sign = values.iter().find(|v| v.abs() > 1e-12 * norm).map_or(1.0, |v| v.signum());
    let values = values.iter().map(|v| sign * v / norm).collect();
    Ok(GriddedSolution {
        grid: NumerovGrid { x_max: lattice.coords[n - 1], ..grid },
        channel,
        energy: e,
        coords: lattice.coords.clone(),
        radii: lattice.radii.iter().map(|r| r.abs()).collect(),
        values,
        weights,
        join_ratio,
    })
}

/// Composite Simpson weights on n uniform nodes; a trailing odd interval
/// gets the trapezoid rule.
fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    let pairs = (n - 1) / 2;
    for p in 0..pairs {
        let i = 2 * p;
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (n - 1) % 2 == 1 {
        w[n - 2] += 0.5 * h;
        w[n - 1] += 0.5 * h;
    }
    w
}
