use serde::{Deserialize, Serialize};

use super::radial::{self, Break, RadialSpec};
use super::sphere::SphereRule;
use super::{Accum, OperatorResult, QuadratureConfig};
use crate::error::{FracError, Result};
use crate::exec::{self, Execution};
use crate::numerics::field::{FieldMeta, Interface, Pole, ScalarField, SupportHint, VectorField};
use crate::numerics::point::{self, Point};
use crate::numerics::smooth::smooth_step_down;
use crate::numerics::special::{mu_const, riesz_potential_const, riesz_transform_const, sphere_area};

/// How the symmetrised radial integrand behaves: near the origin it is
/// `H(r)·r^{γ−1}` with bounded `H`; far away it is the field increment
/// times `r^{kernel_power}`.
#[derive(Debug, Clone, Copy)]
struct Kernel {
    gamma: f64,
    kernel_power: f64,
}

/// Far-field treatment resolved for one evaluation point.
#[derive(Debug, Clone, Copy)]
struct Far {
    r_max: f64,
    kappa: Option<f64>,
    /// Bound of the part discarded by truncation (per unit of prefactor).
    truncation: f64,
}

fn resolve_far(
    support: &SupportHint,
    sup_norm: Option<f64>,
    x: &Point,
    kernel: Kernel,
    increments: f64,
    cfg: &QuadratureConfig,
) -> Result<Far> {
    let dist_c = support.center().map(|c| point::dist(x, &c)).unwrap_or(0.0);
    let default_r = match support {
        SupportHint::Compact { radius, .. } => dist_c + radius,
        SupportHint::Decaying { radius, .. } => dist_c + radius + cfg.far_margin,
        SupportHint::Unknown => {
            if cfg.tail_model && cfg.far_radius.is_none() {
                return Err(FracError::config(
                    "field has no support or decay hint; the tail model needs one",
                ));
            }
            cfg.far_margin.max(1.0)
        }
    };
    let r_max = cfg.far_radius.unwrap_or(default_r).max(cfg.near_radius * 1.5);
    if support.vanishes_beyond(x, r_max) {
        return Ok(Far { r_max, kappa: None, truncation: 0.0 });
    }
    if cfg.tail_model {
        if let Some(s) = support.exponent() {
            let kappa = s - kernel.kernel_power - 1.0;
            if kappa <= 0.0 {
                return Err(FracError::Divergence(format!(
                    "decay exponent {s} is too small for this kernel (needs > {})",
                    kernel.kernel_power + 1.0
                )));
            }
            return Ok(Far { r_max, kappa: Some(kappa), truncation: 0.0 });
        }
    }
    // Truncate: ∫_R^∞ increments·M·r^{p} dr with M the sup of |f| beyond R.
    let m = support.sup_beyond(x, r_max).or(sup_norm).unwrap_or(f64::INFINITY);
    let p = kernel.kernel_power;
    let truncation = if p < -1.0 {
        increments * m * r_max.powf(p + 1.0) / (-p - 1.0)
    } else if m == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(Far { r_max, kappa: None, truncation })
}

fn ray_breaks(x: &Point, theta: &Point, ifaces: &[Interface], out: &mut Vec<Break>) {
    out.clear();
    for s in ifaces {
        let v = point::sub(x, &s.center);
        let b = point::dot(theta, &v);
        let disc = b * b - (point::norm2(&v) - s.radius * s.radius);
        if disc < 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        for t in [-b - sq, -b + sq] {
            if t != 0.0 {
                out.push(Break { at: t.abs(), width: s.width });
            }
        }
    }
}

/// Radial nodes along the ray `center + rθ`, split where it crosses interfaces.
pub(crate) fn polar_nodes(
    center: &Point,
    theta: &Point,
    ifaces: &[Interface],
    spec: &RadialSpec,
    rules: &radial::RadialRules,
    breaks: &mut Vec<Break>,
    nodes: &mut Vec<(f64, f64)>,
) {
    ray_breaks(center, theta, ifaces, breaks);
    radial::build(spec, rules, breaks, nodes);
}

/// Σ_θ w_θ Σ_r w_r h(θ, r) over a half (symmetric) or full sphere rule.
#[allow(clippy::too_many_arguments)]
fn polar_sum<T: Accum>(
    cfg: &QuadratureConfig,
    coarse: bool,
    dim: usize,
    center: &Point,
    spec: RadialSpec,
    ifaces: &[Interface],
    half: bool,
    h: &impl Fn(&Point, f64) -> T,
) -> T {
    let (rules, angular) = cfg.rules(coarse);
    let sphere = if half { SphereRule::half(dim, angular) } else { SphereRule::full(dim, angular) };
    let mut nodes = Vec::new();
    let mut breaks = Vec::new();
    if ifaces.is_empty() {
        radial::build(&spec, &rules, &[], &mut nodes);
    }
    let mut total = T::zero();
    for (theta, wt) in sphere.dirs.iter().zip(&sphere.weights) {
        if !ifaces.is_empty() {
            polar_nodes(center, theta, ifaces, &spec, &rules, &mut breaks, &mut nodes);
        }
        let mut acc = T::zero();
        for &(r, w) in &nodes {
            acc.add_scaled(w, &h(theta, r));
        }
        total.add_scaled(*wt, &acc);
    }
    total
}

/// Fine pass plus (optionally) the coarse pass for the error estimate.
#[allow(clippy::too_many_arguments)]
pub(crate) fn polar_integral<T: Accum>(
    cfg: &QuadratureConfig,
    dim: usize,
    center: &Point,
    spec: RadialSpec,
    ifaces: &[Interface],
    half: bool,
    scale: f64,
    h: impl Fn(&Point, f64) -> T,
) -> OperatorResult<T> {
    let mut fine = polar_sum(cfg, false, dim, center, spec, ifaces, half, &h);
    let mut err = 0.0;
    if cfg.error_estimate {
        let coarse = polar_sum(cfg, true, dim, center, spec, ifaces, half, &h);
        err = fine.dist(&coarse) * scale.abs();
    }
    let mut out = T::zero();
    out.add_scaled(scale, &fine);
    fine = out;
    OperatorResult::new(fine, err)
}

/// Difference quotients are evaluated no closer than this to the centre;
/// below it the increment is pure roundoff. The quotient is Lipschitz in r,
/// so the substitution costs O(floor).
fn increment_floor(cfg: &QuadratureConfig) -> f64 {
    1e-6 * cfg.near_radius
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::domain(format!("order must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn check_point_dim(dim: usize, x: &Point) -> Result<()> {
    if x[dim..].iter().any(|c| *c != 0.0) {
        return Err(FracError::domain(format!("point {x:?} has coordinates beyond dimension {dim}")));
    }
    Ok(())
}

/// Ratio `|x − c|/ρ` beyond which an evaluation point counts as detached
/// from a field carried by `B_ρ(c)`.
const DETACH: f64 = 1.25;
/// Below this ratio the plain polar rule around `x` is used.
const SPLIT_MIN: f64 = 0.25;

/// The ball carrying essentially all of a field (beyond it |f| ≤ 1e-15·sup).
/// `None` for fields with poles or without a usable hint.
fn carrier_ball(meta: &FieldMeta) -> Option<(Point, f64)> {
    if !meta.poles.is_empty() {
        return None;
    }
    let (c, rho) = match meta.support {
        SupportHint::Compact { center, radius } => (center, radius),
        SupportHint::Decaying { center, radius, bound, exponent } => {
            let sup = meta.sup_norm?;
            if !(bound * radius.powf(-exponent) <= 1e-15 * sup) {
                return None;
            }
            (center, radius)
        }
        SupportHint::Unknown => return None,
    };
    (rho > 0.0).then_some((c, rho))
}

fn union_ball(a: Option<(Point, f64)>, b: Option<(Point, f64)>) -> Option<(Point, f64)> {
    let ((ca, ra), (cb, rb)) = (a?, b?);
    Some((ca, ra.max(point::dist(&ca, &cb) + rb)))
}

/// How an operator integral is laid out for one evaluation point.
enum Route {
    /// Polar rule around `x`.
    Centred,
    /// `x` outside the carrier ball: regular integral over the ball.
    Detached((Point, f64)),
    /// Smoothly cut local part around `x` (radius 2s) plus the remainder
    /// integrated around the ball centre.
    Split((Point, f64), f64),
}

fn route(ball: Option<(Point, f64)>, x: &Point) -> Route {
    match ball {
        None => Route::Centred,
        Some((c, rho)) => {
            let d = point::dist(x, &c);
            if d >= DETACH * rho {
                Route::Detached((c, rho))
            } else if d >= SPLIT_MIN * rho {
                Route::Split((c, rho), d / 4.0)
            } else {
                Route::Centred
            }
        }
    }
}

/// Local part with the symmetrised integrand `h` weighted by η(r/s − 1),
/// plus `remote` (the integrand without the `f(x)` terms, which integrate to
/// zero against the odd kernels) weighted by 1 − η.
#[allow(clippy::too_many_arguments)]
fn split_integral<T: Accum>(
    cfg: &QuadratureConfig,
    dim: usize,
    x: &Point,
    ball: (Point, f64),
    s: f64,
    gamma: f64,
    ifaces: &[Interface],
    scale: f64,
    h: impl Fn(&Point, f64) -> T,
    remote: impl Fn(&Point) -> T,
) -> OperatorResult<T> {
    let spec = RadialSpec { gamma, delta: cfg.near_radius.min(0.5 * s), r_max: 2.0 * s, far_kappa: None };
    let mut res = polar_integral(cfg, dim, x, spec, ifaces, true, scale, |theta, r| {
        let mut out = T::zero();
        let w = smooth_step_down(r / s - 1.0);
        if w > 0.0 {
            out.add_scaled(w, &h(theta, r));
        }
        out
    });
    let xc = *x;
    let mut remote_ifaces = ifaces.to_vec();
    remote_ifaces.extend([s, 2.0 * s].map(|radius| Interface { center: xc, radius, width: 0.0 }));
    let inner = 0.5 * point::dist(x, &ball.0);
    let fine = QuadratureConfig { angular_nodes: 2 * cfg.angular_nodes, ..cfg.clone() };
    let rest = detached_integral(&fine, dim, ball, inner, &remote_ifaces, scale, |y| {
        let mut out = T::zero();
        let w = 1.0 - smooth_step_down(point::dist(y, &xc) / s - 1.0);
        if w > 0.0 {
            out.add_scaled(w, &remote(y));
        }
        out
    });
    res.value.add_scaled(1.0, &rest.value);
    res.error += rest.error;
    res
}

/// `scale·∫_{B_ρ(c)} v(y) dy` in polar coordinates around `c`; the first
/// radial panel ends at `inner` or ρ/4, whichever is smaller.
fn detached_integral<T: Accum>(
    cfg: &QuadratureConfig,
    dim: usize,
    ball: (Point, f64),
    inner: f64,
    ifaces: &[Interface],
    scale: f64,
    v: impl Fn(&Point) -> T,
) -> OperatorResult<T> {
    let (c, rho) = ball;
    let spec = RadialSpec { gamma: 1.0, delta: (0.25 * rho).min(inner), r_max: rho, far_kappa: None };
    polar_integral(cfg, dim, &c, spec, ifaces, false, scale, |theta, r| {
        let mut out = T::zero();
        out.add_scaled(r.powi(dim as i32 - 1), &v(&point::axpy(&c, r, theta)));
        out
    })
}

/// Smooth partition isolating the poles of a field from the evaluation point.
struct PoleSplit {
    cuts: Vec<(Point, f64, f64)>,
}

impl PoleSplit {
    fn new(poles: &[Pole], x: &Point) -> Result<Self> {
        let mut cuts = Vec::with_capacity(poles.len());
        for (i, p) in poles.iter().enumerate() {
            let d = point::dist(x, &p.at);
            if d < 1e-9 {
                return Err(FracError::Precondition(format!(
                    "evaluation point {x:?} coincides with a singularity of the field"
                )));
            }
            let mut rho = d / 3.0;
            for (j, q) in poles.iter().enumerate() {
                if j != i {
                    rho = rho.min(point::dist(&p.at, &q.at) / 4.0);
                }
            }
            cuts.push((p.at, rho, p.order));
        }
        Ok(PoleSplit { cuts })
    }

    fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    /// Weight of the part kept in the regular integral.
    #[inline]
    fn outer_weight(&self, y: &Point) -> f64 {
        let mut w = 1.0;
        for (p, rho, _) in &self.cuts {
            w -= smooth_step_down(point::dist(y, p) / rho - 1.0);
        }
        w
    }

    fn interfaces(&self) -> Vec<Interface> {
        self.cuts
            .iter()
            .map(|(p, rho, _)| Interface { center: *p, radius: 1.5 * rho, width: 0.25 * rho })
            .collect()
    }

    /// Σ_p ∫ η_p(y) v(y) dy over the balls B_{2ρ}(p), in polar coordinates
    /// around each pole. `v` may be singular like |y − p|^{−order}.
    fn local<T: Accum>(&self, dim: usize, cfg: &QuadratureConfig, v: impl Fn(&Point) -> T) -> OperatorResult<T> {
        let mut total = T::zero();
        let mut err = 0.0;
        for (p, rho, order) in &self.cuts {
            let gamma = (dim as f64 - order).max(1e-3);
            let spec = RadialSpec { gamma, delta: 0.5 * rho, r_max: 2.0 * rho, far_kappa: None };
            let pc = *p;
            let rho = *rho;
            let local_cfg = QuadratureConfig { mid_panels: cfg.mid_panels.min(6), ..cfg.clone() };
            let res = polar_integral(&local_cfg, dim, &pc, spec, &[], false, 1.0, |theta, t| {
                let y = point::axpy(&pc, t, theta);
                let eta = smooth_step_down(t / rho - 1.0);
                let mut out = T::zero();
                if eta > 0.0 {
                    // H = integrand · t^{n−1} · t^{1−γ}
                    out.add_scaled(eta * t.powf(dim as f64 - gamma), &v(&y));
                }
                out
            });
            total.add_scaled(1.0, &res.value);
            err += res.error;
        }
        OperatorResult::new(total, err)
    }
}

/// Fractional α-gradient
/// ∇^α ξ(x) = μ_{n,α} ∫ (ξ(y) − ξ(x))(y − x)/|y − x|^{n+α+1} dy.
pub fn frac_gradient(xi: &ScalarField, alpha: f64, x: &Point, cfg: &QuadratureConfig) -> Result<OperatorResult<Point>> {
    check_order(alpha)?;
    gradient_like(xi, x, cfg, mu_const(xi.dim(), alpha)?, Kernel { gamma: 1.0 - alpha, kernel_power: -1.0 - alpha })
}

/// Vector Riesz transform, principal value with kernel y/|y|^{n+1}
/// realised by symmetric cancellation of `f(x)`.
pub fn riesz_transform(f: &ScalarField, x: &Point, cfg: &QuadratureConfig) -> Result<OperatorResult<Point>> {
    gradient_like(f, x, cfg, riesz_transform_const(f.dim()), Kernel { gamma: 1.0, kernel_power: -1.0 })
}

fn gradient_like(xi: &ScalarField, x: &Point, cfg: &QuadratureConfig, c: f64, kernel: Kernel) -> Result<OperatorResult<Point>> {
    cfg.validate()?;
    let dim = xi.dim();
    check_point_dim(dim, x)?;
    if xi.is_constant() {
        return Ok(OperatorResult::zero_vector());
    }
    let meta = xi.meta();
    let xc = *x;
    let np = dim as f64 - kernel.kernel_power;
    // (y − x)/|y − x|^{n+1−p}
    let kern = |y: &Point, v: f64| {
        let d = point::sub(y, &xc);
        point::scale(&d, v * point::norm(&d).powf(-np))
    };
    let gp = kernel.gamma - 1.0 - kernel.kernel_power;
    let floor = increment_floor(cfg);
    match route(carrier_ball(meta), x) {
        Route::Detached(ball) => return Ok(detached_integral(cfg, dim, ball, f64::INFINITY, &meta.interfaces, c, |y| kern(y, xi.eval(y)))),
        Route::Split(ball, s) => {
            let h = |theta: &Point, r: f64| {
                let r = r.max(floor);
                let d = xi.eval(&point::axpy(&xc, r, theta)) - xi.eval(&point::axpy(&xc, -r, theta));
                point::scale(theta, d * r.powf(-gp))
            };
            return Ok(split_integral(cfg, dim, x, ball, s, kernel.gamma, &meta.interfaces, c, h, |y| kern(y, xi.eval(y))));
        }
        Route::Centred => {}
    }
    let far = resolve_far(&meta.support, meta.sup_norm, x, kernel, 2.0, cfg)?;
    let spec = RadialSpec { gamma: kernel.gamma, delta: cfg.near_radius, r_max: far.r_max, far_kappa: far.kappa };
    let split = PoleSplit::new(&meta.poles, x)?;
    let mut ifaces = meta.interfaces.clone();
    ifaces.extend(split.interfaces());
    let g = |y: &Point| -> f64 {
        if split.is_empty() {
            return xi.eval(y);
        }
        let w = split.outer_weight(y);
        if w <= 0.0 {
            0.0
        } else {
            w * xi.eval(y)
        }
    };
    let mut res = polar_integral(cfg, dim, &xc, spec, &ifaces, true, c, |theta, r| {
        let r = r.max(floor);
        let d = g(&point::axpy(&xc, r, theta)) - g(&point::axpy(&xc, -r, theta));
        // H = D·r^{kernel_power + 1 − γ}
        point::scale(theta, d * r.powf(-gp))
    });
    if !split.is_empty() {
        let local = split.local(dim, cfg, |y: &Point| kern(y, xi.eval(y)));
        res.value.add_scaled(c, &local.value);
        res.error += c.abs() * local.error;
    }
    res.error += c.abs() * sphere_area(dim) * far.truncation;
    Ok(res)
}

/// Fractional α-divergence
/// div^α F(x) = μ_{n,α} ∫ (F(y) − F(x))·(y − x)/|y − x|^{n+α+1} dy.
pub fn frac_divergence(f: &VectorField, alpha: f64, x: &Point, cfg: &QuadratureConfig) -> Result<OperatorResult<f64>> {
    check_order(alpha)?;
    cfg.validate()?;
    let dim = f.dim();
    check_point_dim(dim, x)?;
    if f.is_constant() {
        return Ok(OperatorResult::zero_scalar());
    }
    let kernel = Kernel { gamma: 1.0 - alpha, kernel_power: -1.0 - alpha };
    let meta = f.meta();
    let mu = mu_const(dim, alpha)?;
    let xc = *x;
    let remote = |y: &Point| {
        let v = point::sub(y, &xc);
        point::dot(&f.eval(y), &v) * point::norm(&v).powf(-(dim as f64) - alpha - 1.0)
    };
    let floor = increment_floor(cfg);
    match route(carrier_ball(meta), x) {
        Route::Detached(ball) => return Ok(detached_integral(cfg, dim, ball, f64::INFINITY, &meta.interfaces, mu, remote)),
        Route::Split(ball, s) => {
            let h = |theta: &Point, r: f64| {
                let r = r.max(floor);
                let d = point::sub(&f.eval(&point::axpy(&xc, r, theta)), &f.eval(&point::axpy(&xc, -r, theta)));
                point::dot(theta, &d) / r
            };
            return Ok(split_integral(cfg, dim, x, ball, s, kernel.gamma, &meta.interfaces, mu, h, remote));
        }
        Route::Centred => {}
    }
    let far = resolve_far(&meta.support, meta.sup_norm, x, kernel, 2.0, cfg)?;
    let spec = RadialSpec { gamma: kernel.gamma, delta: cfg.near_radius, r_max: far.r_max, far_kappa: far.kappa };
    let split = PoleSplit::new(&meta.poles, x)?;
    let mut ifaces = meta.interfaces.clone();
    ifaces.extend(split.interfaces());
    let g = |y: &Point| -> Point {
        if split.is_empty() {
            return f.eval(y);
        }
        let w = split.outer_weight(y);
        if w <= 0.0 {
            [0.0; 3]
        } else {
            point::scale(&f.eval(y), w)
        }
    };
    let mut res = polar_integral(cfg, dim, &xc, spec, &ifaces, true, mu, |theta, r| {
        let r = r.max(floor);
        let d = point::sub(&g(&point::axpy(&xc, r, theta)), &g(&point::axpy(&xc, -r, theta)));
        point::dot(theta, &d) / r
    });
    if !split.is_empty() {
        let local = split.local(dim, cfg, remote);
        res.value += mu * local.value;
        res.error += mu * local.error;
    }
    res.error += mu * sphere_area(dim) * far.truncation;
    Ok(res)
}

fn two_field_far(a: &FieldMeta, b: &FieldMeta, x: &Point, kernel: Kernel, cfg: &QuadratureConfig) -> Result<Far> {
    let support = a.support.combine(1.0, &b.support, 1.0);
    let sup = match (a.sup_norm, b.sup_norm) {
        (Some(s), Some(t)) => Some(s * t),
        _ => None,
    };
    resolve_far(&support, sup, x, kernel, 4.0, cfg)
}

fn check_no_poles(meta: &FieldMeta) -> Result<()> {
    if meta.poles.is_empty() {
        Ok(())
    } else {
        Err(FracError::Precondition(format!(
            "non-local pairings need bounded fields; {} has point singularities",
            meta.label
        )))
    }
}

/// Non-local fractional gradient
/// μ_{n,α} ∫ (f(y) − f(x))(g(y) − g(x))(y − x)/|y − x|^{n+α+1} dy.
pub fn nl_gradient(f: &ScalarField, g: &ScalarField, alpha: f64, x: &Point, cfg: &QuadratureConfig) -> Result<OperatorResult<Point>> {
    check_order(alpha)?;
    cfg.validate()?;
    let dim = f.dim();
    check_point_dim(dim, x)?;
    if f.is_constant() || g.is_constant() {
        return Ok(OperatorResult::zero_vector());
    }
    check_no_poles(f.meta())?;
    check_no_poles(g.meta())?;
    let kernel = Kernel { gamma: 1.0 - alpha, kernel_power: -1.0 - alpha };
    let mut ifaces = f.meta().interfaces.clone();
    ifaces.extend(g.meta().interfaces.iter().copied());
    let mu = mu_const(dim, alpha)?;
    let (f0, g0) = (f.eval(x), g.eval(x));
    let xc = *x;
    let floor = increment_floor(cfg);
    let h = |theta: &Point, r: f64| {
        let r = r.max(floor);
        let yp = point::axpy(&xc, r, theta);
        let ym = point::axpy(&xc, -r, theta);
        let d = (f.eval(&yp) - f0) * (g.eval(&yp) - g0) - (f.eval(&ym) - f0) * (g.eval(&ym) - g0);
        point::scale(theta, d / r)
    };
    // f·g − f(x)·g − g(x)·f; the constant f(x)g(x) integrates to zero
    let remote = |y: &Point| {
        let (fy, gy) = (f.eval(y), g.eval(y));
        let v = point::sub(y, &xc);
        point::scale(&v, (fy * gy - f0 * gy - g0 * fy) * point::norm(&v).powf(-(dim as f64) - alpha - 1.0))
    };
    match route(union_ball(carrier_ball(f.meta()), carrier_ball(g.meta())), x) {
        Route::Detached(ball) => return Ok(detached_integral(cfg, dim, ball, f64::INFINITY, &ifaces, mu, remote)),
        Route::Split(ball, s) => return Ok(split_integral(cfg, dim, x, ball, s, kernel.gamma, &ifaces, mu, h, remote)),
        Route::Centred => {}
    }
    let far = two_field_far(f.meta(), g.meta(), x, kernel, cfg)?;
    let spec = RadialSpec { gamma: kernel.gamma, delta: cfg.near_radius, r_max: far.r_max, far_kappa: far.kappa };
    let mut res = polar_integral(cfg, dim, &xc, spec, &ifaces, true, mu, h);
    res.error += mu * sphere_area(dim) * far.truncation;
    Ok(res)
}

/// Non-local fractional divergence of the couple (g, F)
/// μ_{n,α} ∫ (g(y) − g(x))(F(y) − F(x))·(y − x)/|y − x|^{n+α+1} dy.
pub fn nl_divergence(g: &ScalarField, f: &VectorField, alpha: f64, x: &Point, cfg: &QuadratureConfig) -> Result<OperatorResult<f64>> {
    check_order(alpha)?;
    cfg.validate()?;
    let dim = f.dim();
    check_point_dim(dim, x)?;
    if f.is_constant() || g.is_constant() {
        return Ok(OperatorResult::zero_scalar());
    }
    check_no_poles(f.meta())?;
    check_no_poles(g.meta())?;
    let kernel = Kernel { gamma: 1.0 - alpha, kernel_power: -1.0 - alpha };
    let mut ifaces = f.meta().interfaces.clone();
    ifaces.extend(g.meta().interfaces.iter().copied());
    let mu = mu_const(dim, alpha)?;
    let (f0, g0) = (f.eval(x), g.eval(x));
    let xc = *x;
    let floor = increment_floor(cfg);
    let h = |theta: &Point, r: f64| {
        let r = r.max(floor);
        let yp = point::axpy(&xc, r, theta);
        let ym = point::axpy(&xc, -r, theta);
        let dp = (g.eval(&yp) - g0) * point::dot(theta, &point::sub(&f.eval(&yp), &f0));
        let dm = (g.eval(&ym) - g0) * point::dot(theta, &point::sub(&f.eval(&ym), &f0));
        (dp - dm) / r
    };
    let remote = |y: &Point| {
        let (fy, gy) = (f.eval(y), g.eval(y));
        let v = point::sub(y, &xc);
        let k = point::norm(&v).powf(-(dim as f64) - alpha - 1.0);
        (gy * point::dot(&fy, &v) - g0 * point::dot(&fy, &v) - gy * point::dot(&f0, &v)) * k
    };
    match route(union_ball(carrier_ball(g.meta()), carrier_ball(f.meta())), x) {
        Route::Detached(ball) => return Ok(detached_integral(cfg, dim, ball, f64::INFINITY, &ifaces, mu, remote)),
        Route::Split(ball, s) => return Ok(split_integral(cfg, dim, x, ball, s, kernel.gamma, &ifaces, mu, h, remote)),
        Route::Centred => {}
    }
    let far = two_field_far(g.meta(), f.meta(), x, kernel, cfg)?;
    let spec = RadialSpec { gamma: kernel.gamma, delta: cfg.near_radius, r_max: far.r_max, far_kappa: far.kappa };
    let mut res = polar_integral(cfg, dim, &xc, spec, &ifaces, true, mu, h);
    res.error += mu * sphere_area(dim) * far.truncation;
    Ok(res)
}

/// Riesz potential of order β ∈ (0, n),
/// I_β f(x) = c_{n,β} ∫ f(y)|x − y|^{β−n} dy.
pub fn riesz_potential(f: &ScalarField, beta: f64, x: &Point, cfg: &QuadratureConfig) -> Result<OperatorResult<f64>> {
    cfg.validate()?;
    let dim = f.dim();
    check_point_dim(dim, x)?;
    let c = riesz_potential_const(dim, beta)?;
    check_no_poles(f.meta())?;
    let kernel = Kernel { gamma: beta, kernel_power: beta - 1.0 };
    let meta = f.meta();
    if let Some(s) = meta.support.exponent() {
        if s <= beta {
            return Err(FracError::Divergence(format!(
                "Riesz potential of order {beta} needs decay faster than |x|^-{s}, field decays like |x|^-{s}"
            )));
        }
    }
    if matches!(meta.support, SupportHint::Unknown) {
        return Err(FracError::Divergence("Riesz potential needs a support or decay hint".into()));
    }
    let xc = *x;
    let h = |theta: &Point, r: f64| f.eval(&point::axpy(&xc, r, theta)) + f.eval(&point::axpy(&xc, -r, theta));
    let remote = |y: &Point| f.eval(y) * point::dist(y, &xc).powf(beta - dim as f64);
    match route(carrier_ball(meta), x) {
        Route::Detached(ball) => return Ok(detached_integral(cfg, dim, ball, f64::INFINITY, &meta.interfaces, c, remote)),
        Route::Split(ball, s) => return Ok(split_integral(cfg, dim, x, ball, s, beta, &meta.interfaces, c, h, remote)),
        Route::Centred => {}
    }
    let far = resolve_far(&meta.support, meta.sup_norm, x, kernel, 2.0, cfg)?;
    let spec = RadialSpec { gamma: beta, delta: cfg.near_radius, r_max: far.r_max, far_kappa: far.kappa };
    let mut res = polar_integral(cfg, dim, &xc, spec, &meta.interfaces, true, c, h);
    res.error += c * sphere_area(dim) * far.truncation;
    Ok(res)
}

/// One entry of a batch evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchItem<T> {
    pub point: Point,
    pub value: T,
    pub error: f64,
}

/// Evaluate an operator at many points; independent points run in parallel
/// under [`Execution::Parallel`].
pub fn evaluate_batch<T, F>(execution: Execution, points: &[Point], op: F) -> Result<Vec<BatchItem<T>>>
where
    T: Send,
    F: Fn(&Point) -> Result<OperatorResult<T>> + Sync + Send,
{
    exec::map(execution, points, |x| {
        op(x).map(|r| BatchItem { point: *x, value: r.value, error: r.error })
    })
    .into_iter()
    .collect()
}
