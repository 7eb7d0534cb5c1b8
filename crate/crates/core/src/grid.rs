//! Piecewise-uniform grids with composite Simpson weights, plus helpers
//! shared by the solvers.

use crate::error::{domain, Result};

/// Points and quadrature weights on [breaks[0], breaks[last]]. Every
/// breakpoint is a node and every segment holds an even number of intervals,
/// so integrands that are smooth between breakpoints integrate to O(h^4).
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedGrid {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Index of each breakpoint in `points`.
    pub break_index: Vec<usize>,
}

impl SegmentedGrid {
    /// Distributes roughly `n_points` nodes over the segments in proportion
    /// to their lengths. Zero-length segments are dropped.
    pub fn new(breaks: &[f64], n_points: usize) -> Result<Self> {
        let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len());
        for &b in breaks {
            if !b.is_finite() {
                return Err(domain("non-finite grid breakpoint"));
            }
            match cuts.last() {
                Some(&last) if b < last => return Err(domain("grid breakpoints must increase")),
                Some(&last) if b == last => {}
                _ => cuts.push(b),
            }
        }
        if cuts.len() < 2 {
            return Err(domain("grid needs a non-empty interval"));
        }
        let total = cuts[cuts.len() - 1] - cuts[0];
        let intervals = n_points.saturating_sub(1).max(2) as f64;

        let mut points = vec![cuts[0]];
        let mut weights = vec![0.0];
        let mut break_index = vec![0];
        for pair in cuts.windows(2) {
            let len = pair[1] - pair[0];
            let mut m = ((intervals * len / total) / 2.0).round() as usize * 2;
            m = m.max(2);
            let h = len / m as f64;
            let start = points.len() - 1;
            for k in 1..=m {
                points.push(if k == m { pair[1] } else { pair[0] + k as f64 * h });
                weights.push(0.0);
            }
            for k in 0..=m {
                let w = if k == 0 || k == m {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                weights[start + k] += w * h / 3.0;
            }
            break_index.push(points.len() - 1);
        }
        Ok(SegmentedGrid { points, weights, break_index })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segments(&self) -> usize {
        self.break_index.len() - 1
    }

    /// (first, last) node of segment `seg`.
    pub fn segment_bounds(&self, seg: usize) -> (usize, usize) {
        (self.break_index[seg], self.break_index[seg + 1])
    }

    /// Simpson rule over one segment alone; the endpoint values can then be
    /// one-sided limits of a function that jumps at the breakpoints.
    pub fn integrate_segment(&self, seg: usize, f: impl Fn(usize, f64) -> f64) -> f64 {
        let (lo, hi) = self.segment_bounds(seg);
        let h = (self.points[hi] - self.points[lo]) / (hi - lo) as f64;
        let mut sum = 0.0;
        for i in lo..=hi {
            let w = if i == lo || i == hi {
                1.0
            } else if (i - lo) % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w * f(i, self.points[i]);
        }
        sum * h / 3.0
    }

    pub fn integrate(&self, f: impl Fn(usize, f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).enumerate().map(|(i, (&x, &w))| w * f(i, x)).sum()
    }
}

/// Sign changes of `values`, ignoring entries below `1e-10` of the largest
/// magnitude.
pub fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-10 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && last.signum() != v.signum() {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

/// Cubic Lagrange interpolation through the four nodes nearest to `x`, kept
/// inside the segment that contains `x` so kinks at breakpoints are not
/// smeared. Outside the grid the function is taken to be zero.
pub fn interpolate(grid: &SegmentedGrid, values: &[f64], x: f64) -> f64 {
    let pts = &grid.points;
    if x < pts[0] || x > pts[pts.len() - 1] {
        return 0.0;
    }
    let i = pts.partition_point(|&p| p <= x).saturating_sub(1).min(pts.len() - 2);
    let seg = grid.break_index.partition_point(|&b| b <= i).max(1);
    let (lo, hi) = (grid.break_index[seg - 1], grid.break_index[seg.min(grid.break_index.len() - 1)]);
    let start = i.saturating_sub(1).max(lo).min(hi.saturating_sub(3).max(lo));
    let end = (start + 3).min(hi);
    let mut sum = 0.0;
    for j in start..=end {
        let mut basis = 1.0;
        for k in start..=end {
            if k != j {
                basis *= (x - pts[k]) / (pts[j] - pts[k]);
            }
        }
        sum += basis * values[j];
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakpoints_are_nodes_and_weights_integrate_cubics_exactly() {
        let g = SegmentedGrid::new(&[-2.0, -0.3, 0.3, 5.0], 401).unwrap();
        for &b in &[-2.0, -0.3, 0.3, 5.0] {
            assert!(g.points.contains(&b));
        }
        let got = g.integrate(|_, x| x * x * x - 2.0 * x + 1.0);
        let want = (5f64.powi(4) - 16.0) / 4.0 - (25.0 - 4.0) + 7.0;
        assert!((got - want).abs() < 1e-10);
        assert!(g.integrate(|_, x| (-x * x).exp()) > 0.0);
        let split: f64 = (0..g.segments()).map(|k| g.integrate_segment(k, |_, x| x * x)).sum();
        assert!((split - g.integrate(|_, x| x * x)).abs() < 1e-10);
    }

    #[test]
    fn node_counter_skips_tiny_values() {
        assert_eq!(count_nodes(&[1.0, 0.5, -0.2, -1.0, 1e-14, -1e-13, 0.3]), 2);
        assert_eq!(count_nodes(&[0.0, 1.0, 2.0, 0.0]), 0);
    }

    #[test]
    fn interpolation_respects_segments() {
        let g = SegmentedGrid::new(&[0.0, 1.0, 3.0], 201).unwrap();
        let kinked = |x: f64| if x <= 1.0 { x } else { 2.0 - x };
        let vals: Vec<f64> = g.points.iter().map(|&x| kinked(x)).collect();
        for &x in &[0.0, 0.37, 0.999, 1.0, 1.001, 2.5, 3.0] {
            let want = kinked(x);
            assert!((interpolate(&g, &vals, x) - want).abs() < 1e-12, "{x}");
        }
        assert_eq!(interpolate(&g, &vals, 3.5), 0.0);
    }
}
