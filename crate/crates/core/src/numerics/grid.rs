use serde::{Deserialize, Serialize};

use super::point::Point;
use crate::error::{FracError, Result};

/// Uniform rectilinear discretisation of a box in ℝⁿ.
///
/// Axis `i` is split into `counts[i]` cells of width
/// `h_i = (upper_i − lower_i) / counts_i`. Periodic grids carry samples at
/// the left cell edges `lower + k·h`; non-periodic grids at cell centres
/// `lower + (k + ½)·h`, so that plain sums are midpoint rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    lower: [f64; 3],
    upper: [f64; 3],
    counts: [usize; 3],
    periodic: bool,
}

impl GridSpec {
    pub fn new(lower: &[f64], upper: &[f64], counts: &[usize], periodic: bool) -> Result<Self> {
        let dim = lower.len();
        if dim == 0 || dim > 3 {
            return Err(FracError::config(format!("grid dimension must be 1..=3, got {dim}")));
        }
        if upper.len() != dim || counts.len() != dim {
            return Err(FracError::config("grid bounds and counts disagree in length"));
        }
        let mut spec = GridSpec {
            dim,
            lower: [0.0; 3],
            upper: [1.0; 3],
            counts: [1; 3],
            periodic,
        };
        for i in 0..dim {
            if !(lower[i] < upper[i]) || !lower[i].is_finite() || !upper[i].is_finite() {
                return Err(FracError::config(format!(
                    "axis {i}: need finite lower < upper, got [{}, {}]",
                    lower[i], upper[i]
                )));
            }
            if counts[i] < 4 {
                return Err(FracError::config(format!(
                    "axis {i}: need at least 4 samples, got {}",
                    counts[i]
                )));
            }
            spec.lower[i] = lower[i];
            spec.upper[i] = upper[i];
            spec.counts[i] = counts[i];
        }
        Ok(spec)
    }

    /// Cube `[c − side/2, c + side/2)ⁿ` with `count` cells per axis.
    pub fn cube(dim: usize, center: &Point, side: f64, count: usize, periodic: bool) -> Result<Self> {
        let lo: Vec<f64> = (0..dim).map(|i| center[i] - side / 2.0).collect();
        let hi: Vec<f64> = (0..dim).map(|i| center[i] + side / 2.0).collect();
        Self::new(&lo, &hi, &vec![count; dim], periodic)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self, axis: usize) -> f64 {
        self.lower[axis]
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.upper[axis]
    }

    pub fn count(&self, axis: usize) -> usize {
        self.counts[axis]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts[..self.dim]
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.side(axis) / self.counts[axis] as f64
    }

    /// Volume of one cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|i| self.spacing(i)).product()
    }

    pub fn len(&self) -> usize {
        self.counts().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn center(&self) -> Point {
        let mut c = [0.0; 3];
        for (i, ci) in c.iter_mut().enumerate().take(self.dim) {
            *ci = 0.5 * (self.lower[i] + self.upper[i]);
        }
        c
    }

    fn offset(&self) -> f64 {
        if self.periodic {
            0.0
        } else {
            0.5
        }
    }

    /// Coordinate of sample `k` along `axis`.
    pub fn coord(&self, axis: usize, k: usize) -> f64 {
        self.lower[axis] + (k as f64 + self.offset()) * self.spacing(axis)
    }

    /// Multi-index of the flat (row-major, last axis fastest) index.
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.counts[axis];
            flat /= self.counts[axis];
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize; 3]) -> usize {
        let mut flat = 0;
        for (axis, &i) in idx.iter().enumerate().take(self.dim) {
            flat = flat * self.counts[axis] + i;
        }
        flat
    }

    pub fn point(&self, flat: usize) -> Point {
        let idx = self.unravel(flat);
        let mut p = [0.0; 3];
        for (axis, pa) in p.iter_mut().enumerate().take(self.dim) {
            *pa = self.coord(axis, idx[axis]);
        }
        p
    }

    /// All sample points in flat order.
    pub fn points(&self) -> Vec<Point> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Whether `x` lies in the closed box.
    pub fn contains(&self, x: &Point) -> bool {
        (0..self.dim).all(|i| x[i] >= self.lower[i] && x[i] <= self.upper[i])
    }

    /// Multilinear interpolation of row-major `values` at `x`.
    ///
    /// Periodic grids wrap; non-periodic grids return 0 outside the hull of
    /// the cell centres' box (the grid is read as the field's support).
    pub fn interpolate(&self, values: &[f64], x: &Point) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        let mut base = [0usize; 3];
        let mut upper_idx = [0usize; 3];
        let mut frac = [0.0; 3];
        for axis in 0..self.dim {
            let n = self.counts[axis];
            let h = self.spacing(axis);
            let t = (x[axis] - self.lower[axis]) / h - self.offset();
            if self.periodic {
                let f = t.floor();
                let i0 = (f as i64).rem_euclid(n as i64) as usize;
                base[axis] = i0;
                upper_idx[axis] = (i0 + 1) % n;
                frac[axis] = t - f;
            } else {
                if x[axis] < self.lower[axis] || x[axis] > self.upper[axis] {
                    return 0.0;
                }
                let t = t.clamp(0.0, (n - 1) as f64);
                let i0 = (t.floor() as usize).min(n - 2);
                base[axis] = i0;
                upper_idx[axis] = i0 + 1;
                frac[axis] = t - i0 as f64;
            }
        }
        let corners = 1usize << self.dim;
        let mut acc = 0.0;
        for corner in 0..corners {
            let mut idx = [0usize; 3];
            let mut w = 1.0;
            for axis in 0..self.dim {
                if corner >> axis & 1 == 1 {
                    idx[axis] = upper_idx[axis];
                    w *= frac[axis];
                } else {
                    idx[axis] = base[axis];
                    w *= 1.0 - frac[axis];
                }
            }
            if w != 0.0 {
                acc += w * values[self.ravel(&idx)];
            }
        }
        acc
    }
}

/// Scalar samples over a [`GridSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSamples {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl GridSamples {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(FracError::config(format!(
                "grid has {} samples but {} values were given",
                spec.len(),
                values.len()
            )));
        }
        Ok(GridSamples { spec, values })
    }

    pub fn sample(spec: GridSpec, f: impl Fn(&Point) -> f64) -> Self {
        let values = (0..spec.len()).map(|k| f(&spec.point(k))).collect();
        GridSamples { spec, values }
    }

    pub fn interpolate(&self, x: &Point) -> f64 {
        self.spec.interpolate(&self.values, x)
    }

    /// Midpoint-rule integral over the grid box.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.cell_volume()
    }

    pub fn integral_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.spec.cell_volume()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_axes() {
        assert!(GridSpec::new(&[0.0], &[0.0], &[8], false).is_err());
        assert!(GridSpec::new(&[0.0], &[1.0], &[3], false).is_err());
        assert!(GridSpec::new(&[0.0, 0.0], &[1.0], &[8, 8], false).is_err());
        assert!(GridSpec::new(&[0.0; 4], &[1.0; 4], &[8; 4], false).is_err());
    }

    #[test]
    fn ravel_roundtrip() {
        let g = GridSpec::new(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0], &[4, 5, 6], false).unwrap();
        for k in 0..g.len() {
            assert_eq!(g.ravel(&g.unravel(k)), k);
        }
        assert!((g.spacing(1) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn interpolation_is_exact_for_affine() {
        let g = GridSpec::new(&[-1.0, -1.0], &[1.0, 1.0], &[8, 8], false).unwrap();
        let s = GridSamples::sample(g, |x| 2.0 * x[0] - 3.0 * x[1] + 0.5);
        for p in [[0.1, 0.2, 0.0], [-0.7, 0.33, 0.0], [0.8, -0.8, 0.0]] {
            let v = s.interpolate(&p);
            assert!((v - (2.0 * p[0] - 3.0 * p[1] + 0.5)).abs() < 1e-12);
        }
        assert_eq!(s.interpolate(&[2.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn periodic_interpolation_wraps() {
        let g = GridSpec::new(&[0.0], &[1.0], &[16], true).unwrap();
        let s = GridSamples::sample(g, |x| (2.0 * std::f64::consts::PI * x[0]).cos());
        let a = s.interpolate(&[0.03, 0.0, 0.0]);
        let b = s.interpolate(&[1.03, 0.0, 0.0]);
        assert!((a - b).abs() < 1e-14);
        assert!((s.interpolate(&[0.25, 0.0, 0.0])).abs() < 1e-12);
    }
}
