//! Fractional vector calculus on ℝⁿ (n ≤ 3).
//!
//! Two independent engines evaluate the fractional gradient, divergence,
//! Riesz potential, Riesz transform and the non-local pairings:
//!
//! * [`quadrature`] integrates the singular kernels directly in polar
//!   coordinates around the evaluation point;
//! * [`spectral`] applies the corresponding Fourier multipliers on a
//!   periodic box.
//!
//! [`analytic`] carries closed-form fields whose fractional divergence is
//! known exactly, and [`verify`] assembles the integration-by-parts,
//! Leibniz, decay and total-mass identities into [`verify::VerifyReport`]s.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod convergence;
pub mod error;
pub mod exec;
pub mod numerics;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use error::{FracError, Result};
pub use numerics::field::{ScalarField, SupportHint, VectorField};
pub use numerics::grid::GridSpec;
pub use numerics::measure::RadonMeasure;
pub use numerics::params::{FracParams, Regime};
pub use numerics::point::Point;
pub use quadrature::{OperatorResult, QuadratureConfig};
