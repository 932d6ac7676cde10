//! Finite-level middle-thirds Cantor measure.

use crate::error::{FracError, Result};
use crate::numerics::measure::RadonMeasure;
use crate::numerics::point::Point;

pub const MAX_CANTOR_LEVEL: u32 = 12;

/// log 2 / log 3.
pub fn cantor_dimension() -> f64 {
    2f64.ln() / 3f64.ln()
}

/// 2^k atoms of mass 2^{−k} at the left endpoints of the level-k intervals
/// of the middle-thirds construction on [0, 1] × {0}^{n−1}.
pub fn cantor_measure(level: u32, dim: usize) -> Result<RadonMeasure> {
    if level > MAX_CANTOR_LEVEL {
        return Err(FracError::domain(format!("Cantor level must be at most {MAX_CANTOR_LEVEL}, got {level}")));
    }
    if !(1..=2).contains(&dim) {
        return Err(FracError::domain(format!("Cantor measure lives in dimension 1 or 2, got {dim}")));
    }
    let count = 1u64 << level;
    let denom = 3f64.powi(level as i32);
    let weight = 1.0 / count as f64;
    let atoms = (0..count)
        .map(|idx| {
            // binary digits of idx select ternary digits 0 or 2
            let mut m: u64 = 0;
            for bit in (0..level).rev() {
                m = 3 * m + 2 * ((idx >> bit) & 1);
            }
            let p: Point = [m as f64 / denom, 0.0, 0.0];
            (p, weight)
        })
        .collect();
    RadonMeasure::from_atoms(dim, atoms)
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
