use serde::{Deserialize, Serialize};

use super::grid::GridSamples;
use super::point::{self, Point};
use crate::error::{FracError, Result};

/// Finite signed Radon measure: weighted atoms plus an optional density
/// with respect to Lebesgue measure, sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadonMeasure {
    dim: usize,
    atoms: Vec<(Point, f64)>,
    density: Option<GridSamples>,
}

impl RadonMeasure {
    pub fn empty(dim: usize) -> Self {
        RadonMeasure { dim, atoms: Vec::new(), density: None }
    }

    /// Atomic measure. Atom locations must be pairwise distinct and weights finite.
    pub fn from_atoms(dim: usize, atoms: Vec<(Point, f64)>) -> Result<Self> {
        for (i, (p, w)) in atoms.iter().enumerate() {
            if !w.is_finite() || p.iter().any(|c| !c.is_finite()) {
                return Err(FracError::domain(format!("atom {i} is not finite")));
            }
            if atoms[..i].iter().any(|(q, _)| q == p) {
                return Err(FracError::domain(format!("atom {i} duplicates an earlier location")));
            }
        }
        Ok(RadonMeasure { dim, atoms, density: None })
    }

    pub fn with_density(mut self, density: GridSamples) -> Result<Self> {
        if density.spec.dim() != self.dim {
            return Err(FracError::config("density grid dimension differs from measure dimension"));
        }
        if density.values.iter().any(|v| !v.is_finite()) {
            return Err(FracError::domain("density has non-finite samples"));
        }
        self.density = Some(density);
        Ok(self)
    }

    /// `δ_y − δ_z`.
    pub fn dipole(dim: usize, y: Point, z: Point) -> Result<Self> {
        Self::from_atoms(dim, vec![(y, 1.0), (z, -1.0)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[(Point, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&GridSamples> {
        self.density.as_ref()
    }

    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w.abs()).sum::<f64>()
            + self.density.as_ref().map_or(0.0, |d| d.integral_abs())
    }

    /// μ(ℝⁿ).
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum::<f64>()
            + self.density.as_ref().map_or(0.0, |d| d.integral())
    }

    /// ∫ φ dμ for a continuous `φ` (density part by the midpoint rule).
    pub fn integrate(&self, phi: impl Fn(&Point) -> f64) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|(p, w)| w * phi(p)).sum();
        let dens = self.density.as_ref().map_or(0.0, |d| {
            let spec = &d.spec;
            (0..spec.len()).map(|k| d.values[k] * phi(&spec.point(k))).sum::<f64>() * spec.cell_volume()
        });
        atoms + dens
    }

    /// Measure of the open ball `B_r(center)`.
    ///
    /// Density cells wholly inside count fully; cells cut by the sphere are
    /// weighted by the fraction of 4ⁿ sub-samples falling inside.
    pub fn ball_mass(&self, center: &Point, r: f64) -> f64 {
        let r2 = r * r;
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|(p, _)| point::norm2(&point::sub(p, center)) < r2)
            .map(|(_, w)| w)
            .sum();
        let Some(d) = &self.density else {
            return atoms;
        };
        let spec = &d.spec;
        let dim = spec.dim();
        let h: Vec<f64> = (0..dim).map(|i| spec.spacing(i)).collect();
        let half_diag = 0.5 * h.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sub = 4usize;
        let nsub = sub.pow(dim as u32);
        let mut mass = 0.0;
        for k in 0..spec.len() {
            let c = spec.point(k);
            let dc = point::dist(&c, center);
            let frac = if dc + half_diag < r {
                1.0
            } else if dc - half_diag >= r {
                0.0
            } else {
                let mut inside = 0usize;
                for s in 0..nsub {
                    let mut q = c;
                    let mut rem = s;
                    for (axis, ha) in h.iter().enumerate() {
                        let j = rem % sub;
                        rem /= sub;
                        q[axis] += ((j as f64 + 0.5) / sub as f64 - 0.5) * ha;
                    }
                    if point::norm2(&point::sub(&q, center)) < r2 {
                        inside += 1;
                    }
                }
                inside as f64 / nsub as f64
            };
            mass += frac * d.values[k];
        }
        atoms + mass * spec.cell_volume()
    }

    /// Total variation of the ball, |μ|(B_r(center)).
    pub fn ball_variation(&self, center: &Point, r: f64) -> f64 {
        let abs = RadonMeasure {
            dim: self.dim,
            atoms: self.atoms.iter().map(|(p, w)| (*p, w.abs())).collect(),
            density: self.density.as_ref().map(|d| GridSamples {
                spec: d.spec.clone(),
                values: d.values.iter().map(|v| v.abs()).collect(),
            }),
        };
        abs.ball_mass(center, r)
    }

    /// Push-forward under translation `y ↦ y + v`.
    pub fn translated(&self, v: &Point) -> Result<Self> {
        if self.density.is_some() {
            return Err(FracError::config("translation of density parts is not supported"));
        }
        Self::from_atoms(self.dim, self.atoms.iter().map(|(p, w)| (point::add(p, v), *w)).collect())
    }
}

/// Free function form of [`RadonMeasure::ball_mass`].
pub fn measure_ball_mass(mu: &RadonMeasure, center: &Point, r: f64) -> f64 {
    mu.ball_mass(center, r)
}
