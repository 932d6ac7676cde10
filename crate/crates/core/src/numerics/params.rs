use serde::{Deserialize, Serialize};

use super::special::check_dim;
use crate::error::{FracError, Result};

/// Integrability regime of a DM^{α,p} field, which decides what absolute
/// continuity its fractional divergence-measure can have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// p < n/(n−α): no absolute continuity at all.
    Subcritical,
    /// n/(n−α) ≤ p < n/(1−α).
    Intermediate,
    /// p ≥ n/(1−α).
    Supercritical,
}

/// Order, dimension and integrability exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    pub alpha: f64,
    pub n: usize,
    pub p: f64,
    pub q: f64,
}

impl FracParams {
    pub fn new(alpha: f64, n: usize, p: f64) -> Result<Self> {
        check_dim(n)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(FracError::domain(format!("order must lie in (0, 1], got {alpha}")));
        }
        if !(p >= 1.0) {
            return Err(FracError::domain(format!("p must lie in [1, ∞], got {p}")));
        }
        Ok(FracParams { alpha, n, p, q: conjugate(p) })
    }

    pub fn regime(&self) -> Regime {
        let n = self.n as f64;
        if self.p < n / (n - self.alpha) {
            Regime::Subcritical
        } else if self.alpha < 1.0 && self.p < n / (1.0 - self.alpha) {
            Regime::Intermediate
        } else {
            Regime::Supercritical
        }
    }

    /// Dimension of the Hausdorff measure that |div^α F| is absolutely
    /// continuous with respect to (intermediate: null on σ-finite sets).
    pub fn hausdorff_dim(&self) -> Option<f64> {
        let n = self.n as f64;
        let (a, p) = (self.alpha, self.p);
        match self.regime() {
            Regime::Subcritical => None,
            Regime::Intermediate => Some(n - p / (p - 1.0 + (1.0 - a) * p / n)),
            Regime::Supercritical => Some(if p.is_infinite() { n - a } else { n - a - n / p }),
        }
    }

    /// Exponent n/q − α of the ball decay estimate |div^α F|(B_r) ≲ r^{n/q−α}.
    pub fn decay_exponent(&self) -> f64 {
        self.n as f64 / self.q - self.alpha
    }

    /// β_{n,q,α} = (α + n − n/q)/q.
    pub fn leibniz_beta(&self) -> f64 {
        let n = self.n as f64;
        (self.alpha + n - n / self.q) / self.q
    }

    /// γ_{n,q,α} = n/(n + (1−α)q).
    pub fn leibniz_gamma(&self) -> f64 {
        let n = self.n as f64;
        n / (n + (1.0 - self.alpha) * self.q)
    }
}

/// Hölder conjugate, with 1 ↔ ∞.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes_for_planar_half_order() {
        // thresholds n/(n−α) = 4/3 and n/(1−α) = 4
        let r = |p| FracParams::new(0.5, 2, p).unwrap().regime();
        assert_eq!(r(1.0), Regime::Subcritical);
        assert_eq!(r(1.3), Regime::Subcritical);
        assert_eq!(r(4.0 / 3.0), Regime::Intermediate);
        assert_eq!(r(3.9), Regime::Intermediate);
        assert_eq!(r(4.0), Regime::Supercritical);
        assert_eq!(r(f64::INFINITY), Regime::Supercritical);
    }

    #[test]
    fn conjugates_and_exponents() {
        let f = FracParams::new(0.5, 2, f64::INFINITY).unwrap();
        assert_eq!(f.q, 1.0);
        assert!((f.decay_exponent() - 1.5).abs() < 1e-15);
        assert_eq!(f.hausdorff_dim(), Some(1.5));
        let g = FracParams::new(0.5, 2, 2.0).unwrap();
        assert_eq!(g.q, 2.0);
        assert!(FracParams::new(0.0, 2, 2.0).is_err());
        assert!(FracParams::new(0.5, 4, 2.0).is_err());
        assert!(FracParams::new(0.5, 2, 0.5).is_err());
    }
}
