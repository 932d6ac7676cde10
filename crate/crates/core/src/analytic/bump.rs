//! Compactly supported C^∞ bumps.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::numerics::field::{ScalarField, SupportHint};
use crate::numerics::point::{self, Point};
use crate::numerics::smooth::bump_profile;
use crate::numerics::special::check_dim;

/// A·e·exp(1/(|x − c|²/R² − 1)) on B_R(c): peak A at the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactBump {
    pub dim: usize,
    pub center: Point,
    pub radius: f64,
    pub amplitude: f64,
}

impl CompactBump {
    pub fn new(dim: usize, center: Point, radius: f64, amplitude: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(FracError::domain(format!("bump radius must be positive, got {radius}")));
        }
        Ok(CompactBump { dim, center, radius, amplitude })
    }

    pub fn eval(&self, x: &Point) -> f64 {
        let t = point::dist2(x, &self.center) / (self.radius * self.radius);
        self.amplitude * std::f64::consts::E * bump_profile(t)
    }

    /// max |d/dr| of the profile, by sampling.
    fn lipschitz(&self) -> f64 {
        let mut best: f64 = 0.0;
        let m = 2000;
        for k in 1..m {
            let r = k as f64 / m as f64;
            let t = r * r;
            let f = std::f64::consts::E * bump_profile(t);
            best = best.max(f * 2.0 * r / ((1.0 - t) * (1.0 - t)));
        }
        1.01 * best * self.amplitude.abs() / self.radius
    }

    pub fn field(&self) -> ScalarField {
        let b = *self;
        ScalarField::closed(self.dim, "bump", move |x| b.eval(x))
            .with_support(SupportHint::Compact { center: self.center, radius: self.radius })
            .with_lipschitz(self.lipschitz())
            .with_sup_norm(self.amplitude.abs())
    }
}
