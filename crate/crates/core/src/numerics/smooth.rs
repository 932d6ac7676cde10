//! Standard mollifier and radial cut-off.

use std::sync::Arc;

use super::field::{ScalarField, SupportHint};
use super::gauss::GaussRule;
use super::point::{self, Point};
use super::special::{check_dim, sphere_area};
use crate::error::{FracError, Result};

/// The unnormalised bump exp(1/(t − 1)) of t = |x|², zero for t ≥ 1.
#[inline]
pub fn bump_profile(t: f64) -> f64 {
    if t < 1.0 {
        (1.0 / (t - 1.0)).exp()
    } else {
        0.0
    }
}

/// ∫_{B_1} exp(1/(|x|² − 1)) dx in ℝⁿ.
pub fn bump_mass(n: usize) -> f64 {
    let g = GaussRule::new(24);
    let radial = g.integrate_composite(0.0, 1.0, 32, |r| bump_profile(r * r) * r.powi(n as i32 - 1));
    sphere_area(n) * radial
}

/// Standard mollifier with its normalisation computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct Mollifier {
    dim: usize,
    eps: f64,
    norm: f64,
}

impl Mollifier {
    pub fn new(dim: usize, eps: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(FracError::domain(format!("mollifier radius must be positive, got {eps}")));
        }
        Ok(Mollifier { dim, eps, norm: 1.0 / bump_mass(dim) })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// ρ_ε(x) = ε^{−n} ρ(x/ε).
    #[inline]
    pub fn eval(&self, x: &Point) -> f64 {
        let t = point::norm2(x) / (self.eps * self.eps);
        self.norm * bump_profile(t) * self.eps.powi(-(self.dim as i32))
    }

    /// Value at the origin, ε^{−n} c_n e^{−1}.
    pub fn peak(&self) -> f64 {
        self.eval(&point::ORIGIN)
    }

    pub fn to_field(&self) -> ScalarField {
        let m = self.clone();
        let peak = m.peak();
        ScalarField::closed(self.dim, "mollifier", move |x| m.eval(x))
            .with_support(SupportHint::Compact { center: point::ORIGIN, radius: self.eps })
            .with_sup_norm(peak)
    }
}

/// ρ_ε as a [`ScalarField`].
pub fn mollifier(dim: usize, eps: f64) -> Result<ScalarField> {
    Ok(Mollifier::new(dim, eps)?.to_field())
}

/// C^∞ step: 1 for s ≤ 0, 0 for s ≥ 1, strictly decreasing in between.
#[inline]
pub fn smooth_step_down(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / (1.0 - s)).exp();
        let b = (-1.0 / s).exp();
        a / (a + b)
    }
}

/// η_R: 1 on B_R, 0 outside B_{2R}, radially non-increasing.
pub fn cutoff(dim: usize, radius: f64) -> Result<ScalarField> {
    cutoff_at(dim, point::ORIGIN, radius)
}

/// [`cutoff`] centred at `center`.
pub fn cutoff_at(dim: usize, center: Point, radius: f64) -> Result<ScalarField> {
    check_dim(dim)?;
    if !(radius > 0.0) {
        return Err(FracError::domain(format!("cutoff radius must be positive, got {radius}")));
    }
    let eval = Arc::new(move |x: &Point| smooth_step_down(point::dist(x, &center) / radius - 1.0));
    Ok(ScalarField::closed(dim, "cutoff", move |x| eval(x))
        .with_support(SupportHint::Compact { center, radius: 2.0 * radius })
        .with_lipschitz(2.0 / radius)
        .with_sup_norm(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tensor_integral(dim: usize, half: f64, f: impl Fn(&Point) -> f64) -> f64 {
        let g = GaussRule::new(20);
        let panels = 16;
        let h = 2.0 * half / panels as f64;
        let mut nodes = Vec::new();
        for k in 0..panels {
            let a = -half + k as f64 * h;
            nodes.extend(g.on(a, a + h));
        }
        let mut acc = 0.0;
        match dim {
            1 => {
                for &(x, w) in &nodes {
                    acc += w * f(&[x, 0.0, 0.0]);
                }
            }
            2 => {
                for &(x, wx) in &nodes {
                    for &(y, wy) in &nodes {
                        acc += wx * wy * f(&[x, y, 0.0]);
                    }
                }
            }
            _ => {
                for &(x, wx) in &nodes {
                    for &(y, wy) in &nodes {
                        for &(z, wz) in &nodes {
                            acc += wx * wy * wz * f(&[x, y, z]);
                        }
                    }
                }
            }
        }
        acc
    }

    #[test]
    fn mollifier_unit_mass() {
        for dim in 1..=3 {
            for eps in [0.1, 0.3, 1.0] {
                let m = Mollifier::new(dim, eps).unwrap();
                let mass = tensor_integral(dim, eps, |x| m.eval(x));
                assert!((mass - 1.0).abs() < 1e-8, "dim {dim} eps {eps}: {mass}");
            }
        }
    }

    #[test]
    fn mollifier_support_and_scaling() {
        let m = Mollifier::new(2, 0.3).unwrap();
        assert_eq!(m.eval(&[0.3, 0.0, 0.0]), 0.0);
        assert_eq!(m.eval(&[0.25, 0.25, 0.0]), 0.0);
        let unit = Mollifier::new(2, 1.0).unwrap();
        assert!((m.peak() - unit.peak() / 0.09).abs() < 1e-12 * m.peak());
        assert!(Mollifier::new(2, 0.0).is_err());
    }

    #[test]
    fn cutoff_shape() {
        let eta = cutoff(2, 1.5).unwrap();
        assert_eq!(eta.eval(&[0.0; 3]), 1.0);
        assert_eq!(eta.eval(&[1.5, 0.0, 0.0]), 1.0);
        assert_eq!(eta.eval(&[3.0, 0.0, 0.0]), 0.0);
        assert_eq!(eta.eval(&[0.0, 3.5, 0.0]), 0.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let r = 1.5 + 1.5 * i as f64 / 100.0;
            let v = eta.eval(&[r, 0.0, 0.0]);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }
}
