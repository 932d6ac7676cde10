//! Direct evaluation of the non-local operators as singular integrals.
//!
//! Every operator is written in polar coordinates around the evaluation
//! point `x`, `y = x + rθ`, and symmetrised over antipodal directions so
//! that the `f(x)` term of the increment cancels exactly. The radial
//! integral is split into a near field (power substitution), a graded
//! mid field and a compactified far field (see [`radial`]). Every result
//! carries an error estimate: the difference to a run with half the angular
//! nodes and half the mid-field panels, plus any truncated tail bound.

mod config;
mod norms;
mod operators;
pub(crate) mod radial;
pub mod sphere;
mod whole_space;

pub use config::QuadratureConfig;
pub use norms::{besov_seminorm, lp_norm, lp_norm_vector};
pub use operators::{
    evaluate_batch, frac_divergence, frac_gradient, nl_divergence, nl_gradient, riesz_potential,
    riesz_transform, BatchItem,
};
pub(crate) use operators::polar_integral;
pub use whole_space::{integrate_ball, integrate_whole_space, OuterSpec};

use serde::{Deserialize, Serialize};

use crate::numerics::point::Point;

/// Value of an operator at one point plus a non-negative error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorResult<T> {
    pub value: T,
    pub error: f64,
}

impl<T> OperatorResult<T> {
    pub fn new(value: T, error: f64) -> Self {
        OperatorResult { value, error }
    }
}

impl OperatorResult<Point> {
    /// Zero vector with zero error (exact results).
    pub fn zero_vector() -> Self {
        OperatorResult { value: [0.0; 3], error: 0.0 }
    }
}

impl OperatorResult<f64> {
    pub fn zero_scalar() -> Self {
        OperatorResult { value: 0.0, error: 0.0 }
    }
}

/// Values that can be accumulated by the quadrature loops.
pub trait Accum: Copy + Send + Sync {
    fn zero() -> Self;
    fn add_scaled(&mut self, w: f64, v: &Self);
    fn dist(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl Accum for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn add_scaled(&mut self, w: f64, v: &Self) {
        *self += w * v;
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Accum for Point {
    #[inline]
    fn zero() -> Self {
        [0.0; 3]
    }
    #[inline]
    fn add_scaled(&mut self, w: f64, v: &Self) {
        self[0] += w * v[0];
        self[1] += w * v[1];
        self[2] += w * v[2];
    }
    fn dist(&self, other: &Self) -> f64 {
        crate::numerics::point::dist(self, other)
    }
    fn magnitude(&self) -> f64 {
        crate::numerics::point::norm(self)
    }
}
