//! Resolution sweeps of ∇^α at one point for both engines.
//!
//! Each level is compared with the finest one; the observed order between
//! successive levels is `ln(e_k/e_{k+1}) / ln(h_k/h_{k+1})`. Pairs whose finer
//! error has reached round-off are left out of the summary order.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::numerics::field::ScalarField;
use crate::numerics::point::{self, Point};
use crate::quadrature::{frac_gradient, QuadratureConfig};
use crate::spectral;

/// Errors below `FLOOR × |value|` count as round-off.
pub const FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub level: usize,
    /// Grid spacing (spectral) or inverse refinement factor (direct).
    pub h: f64,
    /// |∇^α f(x)| at this level.
    pub value: f64,
    /// Distance to the finest level's vector; 0 on the finest row.
    pub error: f64,
    /// Order against the next finer level, when both errors are resolved.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub engine: String,
    pub rows: Vec<ConvergenceRow>,
    /// Smallest resolved successive order, `None` if no pair was resolved.
    pub observed_order: Option<f64>,
}

fn tabulate(engine: &str, hs: &[f64], values: &[Point]) -> ConvergenceTable {
    let finest = values[values.len() - 1];
    let scale = point::norm(&finest).max(f64::MIN_POSITIVE);
    let errors: Vec<f64> = values.iter().map(|v| point::dist(v, &finest)).collect();
    let last = values.len() - 1;
    let mut rows = Vec::with_capacity(values.len());
    let mut observed: Option<f64> = None;
    for k in 0..values.len() {
        let order = (k + 1 < last && errors[k + 1] > FLOOR * scale)
            .then(|| (errors[k] / errors[k + 1]).ln() / (hs[k] / hs[k + 1]).ln());
        if let Some(o) = order {
            observed = Some(observed.map_or(o, |m: f64| m.min(o)));
        }
        rows.push(ConvergenceRow { level: k, h: hs[k], value: point::norm(&values[k]), error: errors[k], order });
    }
    ConvergenceTable { engine: engine.to_string(), rows, observed_order: observed }
}

fn check_levels(n: usize) -> Result<()> {
    if n < 2 {
        return Err(FracError::config(format!("a convergence sweep needs at least 2 levels, got {n}")));
    }
    Ok(())
}

/// Spectral ∇^α f at `x` on boxes of side `side` centred at `x`, one per
/// resolution (increasing). `x` is a node of every grid.
pub fn spectral_sweep(f: &ScalarField, alpha: f64, x: &Point, side: f64, resolutions: &[usize]) -> Result<ConvergenceTable> {
    check_levels(resolutions.len())?;
    if resolutions.windows(2).any(|w| w[1] <= w[0]) || resolutions.iter().any(|n| n % 2 != 0) {
        return Err(FracError::config("resolutions must be even and strictly increasing"));
    }
    let mut hs = Vec::new();
    let mut values = Vec::new();
    for &n in resolutions {
        let pf = spectral::embed_at(f, x, side, n)?;
        let g = spectral::spectral_frac_gradient(&pf, alpha)?;
        let k = ravel_centre(&pf, n);
        let mut v = [0.0; 3];
        for (j, c) in v.iter_mut().enumerate().take(f.dim()) {
            *c = g.component(j)[k];
        }
        hs.push(side / n as f64);
        values.push(v);
    }
    Ok(tabulate("spectral", &hs, &values))
}

fn ravel_centre(pf: &spectral::PeriodicField, n: usize) -> usize {
    let mut idx = [0usize; 3];
    for i in idx.iter_mut().take(pf.dim()) {
        *i = n / 2;
    }
    pf.spec().ravel(&idx)
}

/// Direct ∇^α f at `x` with `base` refined by each factor (increasing).
pub fn direct_sweep(f: &ScalarField, alpha: f64, x: &Point, base: &QuadratureConfig, factors: &[f64]) -> Result<ConvergenceTable> {
    check_levels(factors.len())?;
    if factors.windows(2).any(|w| w[1] <= w[0]) || factors.iter().any(|s| !(*s > 0.0)) {
        return Err(FracError::config("refinement factors must be positive and strictly increasing"));
    }
    let mut hs = Vec::new();
    let mut values = Vec::new();
    for &s in factors {
        let cfg = base.refined(s).without_estimate();
        values.push(frac_gradient(f, alpha, x, &cfg)?.value);
        hs.push(1.0 / s);
    }
    Ok(tabulate("direct", &hs, &values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::GaussianBump;

    #[test]
    fn single_level_rejected() {
        let f = GaussianBump::standard(2).field();
        assert!(spectral_sweep(&f, 0.5, &[0.0; 3], 16.0, &[64]).is_err());
        assert!(direct_sweep(&f, 0.5, &[0.0; 3], &QuadratureConfig::default(), &[1.0]).is_err());
    }

    #[test]
    fn finest_row_has_zero_error() {
        let f = GaussianBump::standard(2).field();
        let t = spectral_sweep(&f, 0.5, &[0.3, 0.1, 0.0], 16.0, &[32, 64, 128]).unwrap();
        assert_eq!(t.rows.last().unwrap().error, 0.0);
        assert!(t.rows.last().unwrap().order.is_none());
    }
}
