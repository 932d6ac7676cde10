//! Closed-form fields, measures and indicator-type objects with their
//! fractional derivatives or divergence-measures known exactly.

mod ball;
mod bump;
mod cantor;
mod delta_pair;
mod gaussian;

pub use ball::{cutoff_annulus, grad_chi_ball, grad_cutoff_annulus, indicator_ball, mollified_indicator, BallGradient};
pub use bump::CompactBump;
pub use cantor::{cantor_dimension, cantor_measure, loglog_slope, MAX_CANTOR_LEVEL};
pub use delta_pair::{ConvolvedField, DeltaPairField, LpRange, MollifiedDeltaPair};
pub use gaussian::GaussianBump;
