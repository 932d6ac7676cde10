use serde::{Deserialize, Serialize};

use super::radial::RadialRules;
use crate::error::{FracError, Result};
use crate::numerics::gauss::GaussRule;

/// Resolution and splitting parameters of the direct engine.
///
/// Lengths are absolute. The far cut-off `R` is measured from the
/// evaluation point: by default it is the distance to the field's centre
/// plus its support radius, plus `far_margin` for fields that only decay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Near-field radius δ.
    pub near_radius: f64,
    pub near_order: usize,
    pub mid_panels: usize,
    pub mid_order: usize,
    /// Circle nodes (n = 2) or azimuthal nodes (n = 3).
    pub angular_nodes: usize,
    /// Explicit far cut-off R; overrides the support-based default.
    pub far_radius: Option<f64>,
    pub far_margin: f64,
    pub far_order: usize,
    pub far_panels: usize,
    /// Target tolerance τ.
    pub tolerance: f64,
    /// Integrate the decaying tail on a compactified variable (on) or
    /// truncate at R and add a bound of the discarded part to the error (off).
    pub tail_model: bool,
    /// Run the coarse pass that produces the error estimate.
    pub error_estimate: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            near_radius: 0.05,
            near_order: 10,
            mid_panels: 14,
            mid_order: 8,
            angular_nodes: 48,
            far_radius: None,
            far_margin: 6.0,
            far_order: 12,
            far_panels: 3,
            tolerance: 1e-4,
            tail_model: true,
            error_estimate: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.near_radius > 0.0) || !self.near_radius.is_finite() {
            return Err(FracError::config("near_radius must be positive"));
        }
        if let Some(r) = self.far_radius {
            if !(r > self.near_radius) {
                return Err(FracError::config("far_radius must exceed near_radius"));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(FracError::config("tolerance must be positive"));
        }
        if self.near_order == 0 || self.mid_order == 0 || self.far_order == 0 {
            return Err(FracError::config("quadrature orders must be positive"));
        }
        if self.mid_panels == 0 || self.far_panels == 0 {
            return Err(FracError::config("panel counts must be positive"));
        }
        if self.angular_nodes < 4 {
            return Err(FracError::config("need at least 4 angular nodes"));
        }
        if !(self.far_margin >= 0.0) {
            return Err(FracError::config("far_margin must be non-negative"));
        }
        Ok(())
    }

    /// Same config with every resolution parameter scaled by `factor`
    /// (used by convergence sweeps and the oracle runs).
    pub fn refined(&self, factor: f64) -> Self {
        let s = |v: usize| ((v as f64 * factor).round() as usize).max(1);
        QuadratureConfig {
            mid_panels: s(self.mid_panels),
            angular_nodes: s(self.angular_nodes).max(4).div_ceil(4) * 4,
            far_panels: s(self.far_panels),
            ..self.clone()
        }
    }

    /// A cheaper config for inner integrals of nested computations.
    pub fn without_estimate(&self) -> Self {
        QuadratureConfig { error_estimate: false, ..self.clone() }
    }

    pub(crate) fn rules(&self, coarse: bool) -> (RadialRules, usize) {
        let panels = if coarse { self.mid_panels.div_ceil(2) } else { self.mid_panels };
        let angular = if coarse { (self.angular_nodes / 2).max(4) } else { self.angular_nodes };
        (
            RadialRules {
                near: GaussRule::new(self.near_order),
                mid: GaussRule::new(self.mid_order),
                far: GaussRule::new(self.far_order),
                mid_panels: panels,
                far_panels: self.far_panels,
            },
            angular,
        )
    }
}
