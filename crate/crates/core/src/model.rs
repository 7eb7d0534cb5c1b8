//! Interaction potentials, trap units and channel bookkeeping.
//!
//! Energies are in units of the trap quantum, lengths in oscillator lengths.
//! The relative equation is -f'' + (centrifugal + r^2/4 + v(r)) f = E f.

use crate::error::{domain, Result};

/// A central interaction v(r), r >= 0.
pub trait RadialPotential: Sync {
    fn value(&self, r: f64) -> f64;

    /// Position of a discontinuity, if any. Grid-based solvers place a node
    /// there and use the mean of the one-sided limits.
    fn jump_at(&self) -> Option<f64> {
        None
    }
}

impl<F: Fn(f64) -> f64 + Sync> RadialPotential for F {
    fn value(&self, r: f64) -> f64 {
        self(r)
    }
}

/// v(r) = v0 for r <= a, 0 beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPotential {
    pub v0: f64,
    pub a: f64,
}

impl StepPotential {
    pub fn new(v0: f64, a: f64) -> Result<Self> {
        if !v0.is_finite() || !a.is_finite() || a < 0.0 {
            return Err(domain(format!("step potential needs finite v0 and a >= 0, got v0={v0}, a={a}")));
        }
        Ok(StepPotential { v0, a })
    }

    pub fn free() -> Self {
        StepPotential { v0: 0.0, a: 0.0 }
    }
}

impl RadialPotential for StepPotential {
    fn value(&self, r: f64) -> f64 {
        step_value(*self, r)
    }

    fn jump_at(&self) -> Option<f64> {
        (self.a > 0.0 && self.v0 != 0.0).then_some(self.a)
    }
}

/// v(r) = g / (1 + (r/Rc)^6).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RydbergPotential {
    pub g: f64,
    pub rc: f64,
}

impl RydbergPotential {
    pub fn new(g: f64, rc: f64) -> Result<Self> {
        if !g.is_finite() || !(rc > 0.0 && rc.is_finite()) {
            return Err(domain(format!("Rydberg potential needs finite g and Rc > 0, got g={g}, Rc={rc}")));
        }
        Ok(RydbergPotential { g, rc })
    }

    /// Step with the same height and range.
    pub fn as_step(&self) -> StepPotential {
        StepPotential { v0: self.g, a: self.rc }
    }
}

impl RadialPotential for RydbergPotential {
    fn value(&self, r: f64) -> f64 {
        rydberg_value(*self, r)
    }
}

pub fn step_value(p: StepPotential, r: f64) -> f64 {
    if r <= p.a {
        p.v0
    } else {
        0.0
    }
}

pub fn rydberg_value(p: RydbergPotential, r: f64) -> f64 {
    let x = r / p.rc;
    let x3 = x * x * x;
    p.g / (1.0 + x3 * x3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    One,
    Two,
    Three,
}

impl Dimension {
    pub fn from_int(d: u32) -> Result<Self> {
        match d {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(domain(format!("dimension must be 1, 2 or 3, got {d}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

/// One eigenchannel: dimension, node count n and angular momentum l.
/// In 1D, l is zero and the parity is that of n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelSpec {
    pub dim: Dimension,
    pub n: u32,
    pub l: u32,
}

impl ChannelSpec {
    pub fn new(dim: Dimension, n: u32, l: u32) -> Result<Self> {
        if dim == Dimension::One && l != 0 {
            return Err(domain("l must be 0 in one dimension"));
        }
        Ok(ChannelSpec { dim, n, l })
    }

    pub fn one_d(n: u32) -> Self {
        ChannelSpec { dim: Dimension::One, n, l: 0 }
    }

    pub fn radial(dim: Dimension, n: u32, l: u32) -> Result<Self> {
        if dim == Dimension::One {
            return Err(domain("radial channel needs dimension 2 or 3"));
        }
        Self::new(dim, n, l)
    }

    /// Odd 1D states vanish at the origin.
    pub fn is_odd_1d(&self) -> bool {
        self.dim == Dimension::One && self.n % 2 == 1
    }

    /// Position of this state among the roots of its symmetry class
    /// (1D roots come in one parity at a time).
    pub fn root_index(&self) -> usize {
        match self.dim {
            Dimension::One => (self.n / 2) as usize,
            _ => self.n as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryLabel {
    Bosonic,
    Fermionic,
}

impl SymmetryLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryLabel::Bosonic => "bosonic",
            SymmetryLabel::Fermionic => "fermionic",
        }
    }
}

pub fn symmetry_of(c: ChannelSpec) -> SymmetryLabel {
    let k = match c.dim {
        Dimension::One => c.n,
        _ => c.l,
    };
    if k % 2 == 0 {
        SymmetryLabel::Bosonic
    } else {
        SymmetryLabel::Fermionic
    }
}

/// Parameter of the radial substitution: l in 2D, l + 1/2 in 3D.
pub fn effective_l(dim: Dimension, l: u32) -> Result<f64> {
    match dim {
        Dimension::One => Err(domain("effective l is undefined in one dimension")),
        Dimension::Two => Ok(l as f64),
        Dimension::Three => Ok(l as f64 + 0.5),
    }
}

/// Step height emulating a contact interaction of strength g_hc at range a.
pub fn delta_scaling(g_hc: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain(format!("contact scaling needs a > 0, got {a}")));
    }
    Ok(2.0 * g_hc * a)
}

/// Non-interacting energy of a channel.
pub fn ho_energy(c: ChannelSpec) -> f64 {
    let (n, l) = (c.n as f64, c.l as f64);
    match c.dim {
        Dimension::One => n + 0.5,
        Dimension::Two => 2.0 * n + l + 1.0,
        Dimension::Three => 2.0 * n + l + 1.5,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_values() {
        let s = StepPotential::new(5.0, 1.0).unwrap();
        assert_eq!(step_value(s, 0.5), 5.0);
        assert_eq!(step_value(s, 2.0), 0.0);
        assert_eq!(step_value(StepPotential::new(-5.0, 1.0).unwrap(), 1.0), -5.0);
        let q = RydbergPotential::new(5.0, 1.0).unwrap();
        assert_eq!(rydberg_value(q, 0.0), 5.0);
        assert_eq!(rydberg_value(q, 1.0), 2.5);
        assert!((rydberg_value(q, 2.0) - 5.0 / 65.0).abs() < 1e-15);
    }

    #[test]
    fn labels_and_mappings() {
        assert_eq!(effective_l(Dimension::Two, 3).unwrap(), 3.0);
        assert_eq!(effective_l(Dimension::Three, 0).unwrap(), 0.5);
        assert_eq!(effective_l(Dimension::Three, 2).unwrap(), 2.5);
        assert!(effective_l(Dimension::One, 0).is_err());
        assert_eq!(symmetry_of(ChannelSpec::one_d(0)), SymmetryLabel::Bosonic);
        assert_eq!(symmetry_of(ChannelSpec::one_d(3)), SymmetryLabel::Fermionic);
        let c = ChannelSpec::new(Dimension::Three, 2, 1).unwrap();
        assert_eq!(symmetry_of(c), SymmetryLabel::Fermionic);
        assert!(ChannelSpec::new(Dimension::One, 0, 1).is_err());
    }

    #[test]
    fn contact_scaling() {
        assert_eq!(delta_scaling(2.0, 0.5).unwrap(), 2.0);
        assert_eq!(delta_scaling(2.0, 1.0).unwrap(), 4.0);
        assert_eq!(delta_scaling(0.0, 1.0).unwrap(), 0.0);
        assert!(delta_scaling(2.0, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StepPotential::new(1.0, -0.1).is_err());
        assert!(StepPotential::new(f64::NAN, 1.0).is_err());
        assert!(RydbergPotential::new(1.0, 0.0).is_err());
    }
}
