//! Indicators of balls, their piecewise-linear and mollified versions, and
//! the fractional gradient of χ_B as a surface integral:
//! ∇^α χ_{B_r(x₀)}(y) = μ_{n,α}/(n+α−1) ∫_{∂B_r} ν_in(z)|z − y|^{1−n−α} dH^{n−1}(z).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::numerics::field::{Interface, ScalarField, SupportHint};
use crate::numerics::gauss::GaussRule;
use crate::numerics::point::{self, Point};
use crate::numerics::smooth::Mollifier;
use crate::numerics::special::{check_dim, mu_const};
use crate::quadrature::QuadratureConfig;

/// Surface integral value plus an accuracy warning when `y` hugs the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallGradient {
    pub value: Point,
    pub warning: Option<String>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::domain(format!("order must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Panel edges on [0, π] graded geometrically towards 0 from scale `sigma`.
fn graded_edges(sigma: f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut e = sigma.clamp(1e-14, std::f64::consts::FRAC_PI_4);
    while e < std::f64::consts::PI {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(std::f64::consts::PI);
    edges
}

/// ∇^α χ_{B_r(x0)}(y) by Gauss quadrature over the polar angle measured from
/// the direction of y (the azimuthal integral is done exactly). `nodes` is
/// the Gauss order per graded panel.
pub fn grad_chi_ball(dim: usize, r: f64, x0: &Point, alpha: f64, y: &Point, nodes: usize) -> Result<BallGradient> {
    check_dim(dim)?;
    check_alpha(alpha)?;
    if !(r > 0.0) {
        return Err(FracError::domain("ball radius must be positive"));
    }
    let n = dim as f64;
    let c = mu_const(dim, alpha)? / (n + alpha - 1.0);
    let d = point::sub(y, x0);
    let rho = point::norm(&d);
    let gap = (rho - r).abs();
    if gap == 0.0 {
        return Err(FracError::Precondition("point lies on the sphere".into()));
    }
    let warning = (gap < 1e-3 * r).then(|| format!("point is within {gap:.3e} of the sphere; surface quadrature loses accuracy"));
    if rho == 0.0 {
        return Ok(BallGradient { value: [0.0; 3], warning });
    }
    let u = point::scale(&d, 1.0 / rho);
    let p = 1.0 - n - alpha;
    let along = match dim {
        1 => {
            // ν_in = −1 at x0 + r, +1 at x0 − r
            -(r - rho).abs().powf(p) + (r + rho).powf(p)
        }
        _ => {
            let rule = GaussRule::new(nodes.max(2));
            let sigma = 0.5 * gap / (r * rho).sqrt();
            let edges = graded_edges(sigma);
            let mut acc = 0.0;
            for w in edges.windows(2) {
                for (phi, wt) in rule.on(w[0], w[1]) {
                    let half = (0.5 * phi).sin();
                    let dist2 = (r - rho) * (r - rho) + 4.0 * r * rho * half * half;
                    let jac = if dim == 2 { 2.0 * r } else { 2.0 * std::f64::consts::PI * r * r * phi.sin() };
                    acc += wt * jac * phi.cos() * dist2.powf(p / 2.0);
                }
            }
            -acc
        }
    };
    Ok(BallGradient { value: point::scale(&u, c * along), warning })
}

/// ∇^α h_{ε,r,x}(y) = (1/ε)∫_r^{r+ε} ∇^α χ_{B_s(x)}(y) ds, where h is 1 on
/// B_r(x), 0 outside B_{r+ε}(x) and linear in |· − x| between.
pub fn grad_cutoff_annulus(dim: usize, eps: f64, r: f64, x: &Point, alpha: f64, y: &Point, cfg: &QuadratureConfig) -> Result<Point> {
    if !(eps > 0.0 && r > 0.0) {
        return Err(FracError::domain("annulus parameters must be positive"));
    }
    let rho = point::dist(x, y);
    let (a, b) = (r, r + eps);
    let mut edges = vec![a, b];
    if rho > a && rho < b {
        // the surface integral blows up like |s − ρ|^{−α}
        edges.push(rho);
        let mut w = 1e-9 * eps;
        while w < eps {
            for e in [rho - w, rho + w] {
                if e > a && e < b {
                    edges.push(e);
                }
            }
            w *= 2.0;
        }
    }
    edges.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let rule = GaussRule::new(cfg.mid_order.max(8));
    let nodes = cfg.near_order.max(16);
    let mut acc = [0.0; 3];
    for w in edges.windows(2) {
        for (s, wt) in rule.on(w[0], w[1]) {
            if s == rho {
                continue;
            }
            let g = grad_chi_ball(dim, s, x, alpha, y, nodes)?;
            acc = point::axpy(&acc, wt / eps, &g.value);
        }
    }
    Ok(acc)
}

/// χ_{B_r(center)}.
pub fn indicator_ball(dim: usize, center: Point, r: f64) -> Result<ScalarField> {
    check_dim(dim)?;
    if !(r > 0.0) {
        return Err(FracError::domain("ball radius must be positive"));
    }
    Ok(ScalarField::closed(dim, "indicator-ball", move |x| if point::dist2(x, &center) < r * r { 1.0 } else { 0.0 })
        .with_support(SupportHint::Compact { center, radius: r })
        .with_sup_norm(1.0)
        .with_interface(Interface { center, radius: r, width: 0.0 }))
}

/// h_{ε,r,x}: 1 on B_r(x), 0 outside B_{r+ε}(x), linear in between.
pub fn cutoff_annulus(dim: usize, center: Point, r: f64, eps: f64) -> Result<ScalarField> {
    check_dim(dim)?;
    if !(eps > 0.0 && r > 0.0) {
        return Err(FracError::domain("annulus parameters must be positive"));
    }
    Ok(ScalarField::closed(dim, "cutoff-annulus", move |x| {
        let s = point::dist(x, &center);
        (1.0 - (s - r) / eps).clamp(0.0, 1.0)
    })
    .with_support(SupportHint::Compact { center, radius: r + eps })
    .with_sup_norm(1.0)
    .with_lipschitz(1.0 / eps)
    .with_interface(Interface { center, radius: r, width: 0.0 })
    .with_interface(Interface { center, radius: r + eps, width: 0.0 }))
}

/// ρ_ε ∗ χ_{B_r(center)}, via a tabulated radial profile on [r − ε, r + ε].
pub fn mollified_indicator(dim: usize, center: Point, r: f64, eps: f64) -> Result<ScalarField> {
    check_dim(dim)?;
    if !(eps > 0.0 && r > eps) {
        return Err(FracError::domain("mollified indicator needs 0 < ε < r"));
    }
    let m = Mollifier::new(dim, eps)?;
    let rule = GaussRule::new(8);
    let panels = 96;
    let n_tab = 801;
    let lo = r - eps;
    let h = 2.0 * eps / (n_tab - 1) as f64;
    let area = |s: f64, t: f64| -> f64 {
        // measure of directions θ with |s e₁ − tθ| < r
        let c = if s == 0.0 || t == 0.0 {
            if s * s + t * t < r * r { -2.0 } else { 2.0 }
        } else {
            (s * s + t * t - r * r) / (2.0 * s * t)
        };
        match dim {
            1 => (((s - t).abs() < r) as u8 + ((s + t).abs() < r) as u8) as f64,
            2 => 2.0 * c.clamp(-1.0, 1.0).acos(),
            _ => 2.0 * std::f64::consts::PI * (1.0 - c.clamp(-1.0, 1.0)),
        }
    };
    let table: Vec<f64> = (0..n_tab)
        .map(|k| {
            let s = lo + k as f64 * h;
            let mut acc = 0.0;
            let dt = eps / panels as f64;
            for j in 0..panels {
                for (t, w) in rule.on(j as f64 * dt, (j + 1) as f64 * dt) {
                    acc += w * m.eval(&[t, 0.0, 0.0]) * t.powi(dim as i32 - 1) * area(s, t);
                }
            }
            acc
        })
        .collect();
    let table = Arc::new(table);
    let eval = move |x: &Point| -> f64 {
        let s = point::dist(x, &center);
        if s <= lo {
            return 1.0;
        }
        if s >= r + eps {
            return 0.0;
        }
        let u = (s - lo) / h;
        let k = (u.floor() as usize).clamp(1, n_tab - 3);
        let idx = [k - 1, k, k + 1, k + 2];
        let mut out = 0.0;
        for &i in &idx {
            let mut l = 1.0;
            for &j in &idx {
                if j != i {
                    l *= (u - j as f64) / (i as f64 - j as f64);
                }
            }
            out += l * table[i];
        }
        out
    };
    Ok(ScalarField::closed(dim, "mollified-indicator", eval)
        .with_support(SupportHint::Compact { center, radius: r + eps })
        .with_sup_norm(1.0)
        .with_interface(Interface { center, radius: r - eps, width: 0.0 })
        .with_interface(Interface { center, radius: r, width: eps / 4.0 })
        .with_interface(Interface { center, radius: r + eps, width: 0.0 }))
}
