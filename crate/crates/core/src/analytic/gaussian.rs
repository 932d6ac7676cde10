//! Gaussian bumps A·exp(−π|x − c|²/w²) with closed-form fractional
//! derivatives and Riesz potentials through Kummer's function.
//!
//! With a = π/w², I_β e^{−a|x|²} = Γ((n−β)/2)/(2^β Γ(n/2)) a^{−β/2}
//! M((n−β)/2, n/2, −a|x|²), and ∇^α = ∇I_{1−α}.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::numerics::field::{ScalarField, SupportHint, VectorField};
use crate::numerics::point::{self, Point};
use crate::numerics::special::{check_dim, kummer_m, ln_gamma_pos};

/// Radius, in widths, beyond which the bump is treated as negligible.
const SUPPORT_WIDTHS: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBump {
    pub dim: usize,
    pub center: Point,
    pub width: f64,
    pub amplitude: f64,
}

impl GaussianBump {
    pub fn new(dim: usize, center: Point, width: f64, amplitude: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(width > 0.0) || !width.is_finite() {
            return Err(FracError::domain(format!("Gaussian width must be positive, got {width}")));
        }
        if !amplitude.is_finite() {
            return Err(FracError::domain("Gaussian amplitude must be finite"));
        }
        Ok(GaussianBump { dim, center, width, amplitude })
    }

    /// e^{−π|x|²}
    pub fn standard(dim: usize) -> Self {
        GaussianBump { dim, center: point::ORIGIN, width: 1.0, amplitude: 1.0 }
    }

    fn a(&self) -> f64 {
        std::f64::consts::PI / (self.width * self.width)
    }

    pub fn eval(&self, x: &Point) -> f64 {
        self.amplitude * (-self.a() * point::dist2(x, &self.center)).exp()
    }

    /// Decay hint |f(y)| ≤ B·|y − c|^{−s} beyond `SUPPORT_WIDTHS` widths.
    pub fn support_hint(&self) -> SupportHint {
        let s = 2.0 * self.dim as f64 + 4.0;
        let r = SUPPORT_WIDTHS * self.width;
        // r lies beyond the maximiser sqrt(s/2a) of e^{−ar²}r^s
        let bound = self.amplitude.abs() * (-self.a() * r * r + s * r.ln()).exp();
        SupportHint::Decaying { center: self.center, radius: r, bound, exponent: s }
    }

    pub fn field(&self) -> ScalarField {
        let g = *self;
        ScalarField::closed(self.dim, "gaussian", move |x| g.eval(x))
            .with_support(self.support_hint())
            .with_lipschitz(self.amplitude.abs() * (2.0 * self.a()).sqrt() * (-0.5f64).exp())
            .with_sup_norm(self.amplitude.abs())
    }

    /// The vector field f·v for a constant vector v.
    pub fn vector_field(&self, v: Point) -> VectorField {
        VectorField::scalar_times_vector(&self.field(), v)
    }

    pub fn gradient(&self, x: &Point) -> Point {
        let d = point::sub(x, &self.center);
        point::scale(&d, -2.0 * self.a() * self.eval(x))
    }

    /// I_β f(x) for β ∈ (0, n).
    pub fn riesz_potential(&self, beta: f64, x: &Point) -> Result<f64> {
        let n = self.dim as f64;
        if !(beta > 0.0 && beta < n) {
            return Err(FracError::domain(format!("Riesz order must lie in (0, {n}), got {beta}")));
        }
        let a = self.a();
        let c = (ln_gamma_pos((n - beta) / 2.0) - ln_gamma_pos(n / 2.0)).exp() * 2f64.powf(-beta) * a.powf(-beta / 2.0);
        Ok(self.amplitude * c * kummer_m((n - beta) / 2.0, n / 2.0, -a * point::dist2(x, &self.center)))
    }

    /// ∇I_β f(x) for β ∈ [0, n); β = 0 gives the classical gradient.
    fn grad_potential(&self, beta: f64, x: &Point) -> Point {
        let n = self.dim as f64;
        let a = self.a();
        let ap = (n - beta) / 2.0;
        let bp = n / 2.0;
        let c = (ln_gamma_pos(ap) - ln_gamma_pos(bp)).exp() * 2f64.powf(-beta) * a.powf(-beta / 2.0);
        let d = point::sub(x, &self.center);
        let m = kummer_m(ap + 1.0, bp + 1.0, -a * point::norm2(&d));
        point::scale(&d, -2.0 * a * self.amplitude * c * ap / bp * m)
    }

    /// ∇^α f(x) for α ∈ [0, 1]; α = 0 is the Riesz transform, α = 1 the gradient.
    pub fn frac_gradient(&self, alpha: f64, x: &Point) -> Result<Point> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FracError::domain(format!("order must lie in [0, 1], got {alpha}")));
        }
        Ok(self.grad_potential(1.0 - alpha, x))
    }

    /// Riesz transform R f(x).
    pub fn riesz_transform(&self, x: &Point) -> Point {
        self.grad_potential(1.0, x)
    }

    /// div^α(f·v)(x) = v·∇^α f(x).
    pub fn frac_divergence_along(&self, v: &Point, alpha: f64, x: &Point) -> Result<f64> {
        Ok(point::dot(v, &self.frac_gradient(alpha, x)?))
    }

    /// ∫ f = A·w^n.
    pub fn mass(&self) -> f64 {
        self.amplitude * self.width.powi(self.dim as i32)
    }

    /// ‖f‖_{L^p} = |A|·w^{n/p}·p^{−n/(2p)}.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.amplitude.abs();
        }
        let n = self.dim as f64;
        self.amplitude.abs() * self.width.powf(n / p) * p.powf(-n / (2.0 * p))
    }
}
