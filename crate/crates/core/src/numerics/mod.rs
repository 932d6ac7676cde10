//! Grids, fields, measures, special functions and the smooth auxiliary
//! profiles (mollifiers, cut-offs) shared by both engines.

pub mod field;
pub mod gauss;
pub mod grid;
pub mod measure;
pub mod params;
pub mod point;
pub mod smooth;
pub mod special;

pub use special::{gamma_fn, mu_const, omega_const};
