//! Outer integrals ∫_{ℝⁿ} h and ∫_{B_r} h of integrands that are themselves
//! expensive (typically an operator evaluated pointwise), with directions
//! distributed over workers.

use super::operators::polar_nodes;
use super::radial::{Break, RadialSpec};
use super::sphere::SphereRule;
use super::{Accum, OperatorResult, QuadratureConfig};
use crate::error::{FracError, Result};
use crate::exec::{self, Execution};
use crate::numerics::field::{FieldMeta, Interface, Pole, SupportHint};
use crate::numerics::point::{self, Point};
use crate::numerics::smooth::smooth_step_down;
use crate::numerics::special::sphere_area;

/// Geometry of an outer integrand: where it lives, where it is only
/// piecewise smooth and where it has integrable point singularities.
#[derive(Debug, Clone)]
pub struct OuterSpec {
    pub dim: usize,
    pub center: Point,
    pub support: SupportHint,
    pub interfaces: Vec<Interface>,
    pub poles: Vec<Pole>,
}

impl OuterSpec {
    pub fn new(dim: usize, center: Point, support: SupportHint) -> Self {
        OuterSpec { dim, center, support, interfaces: Vec::new(), poles: Vec::new() }
    }

    /// Geometry of a field, polar centre at its support centre.
    pub fn from_meta(meta: &FieldMeta) -> Self {
        OuterSpec {
            dim: meta.dim,
            center: meta.support.center().unwrap_or(point::ORIGIN),
            support: meta.support,
            interfaces: meta.interfaces.clone(),
            poles: meta.poles.clone(),
        }
    }

    pub fn with_center(mut self, c: Point) -> Self {
        self.center = c;
        self
    }

    pub fn with_interfaces(mut self, ifaces: impl IntoIterator<Item = Interface>) -> Self {
        self.interfaces.extend(ifaces);
        self
    }

    pub fn with_poles(mut self, poles: impl IntoIterator<Item = Pole>) -> Self {
        self.poles.extend(poles);
        self
    }
}

struct Cut {
    at: Point,
    rho: f64,
    order: f64,
}

fn pole_cuts(poles: &[Pole]) -> Vec<Cut> {
    poles
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rho: f64 = 0.5;
            for (j, q) in poles.iter().enumerate() {
                if i != j {
                    rho = rho.min(point::dist(&p.at, &q.at) / 4.0);
                }
            }
            Cut { at: p.at, rho, order: p.order }
        })
        .collect()
}

fn outer_weight(cuts: &[Cut], y: &Point) -> f64 {
    let mut w = 1.0;
    for c in cuts {
        w -= smooth_step_down(point::dist(y, &c.at) / c.rho - 1.0);
    }
    w
}

/// Σ_θ w_θ Σ_r w_r·r^{n−1}·weight(y)·h(y) on a full sphere around `center`.
#[allow(clippy::too_many_arguments)]
fn polar_pass<T, F>(
    cfg: &QuadratureConfig,
    coarse: bool,
    exec: Execution,
    dim: usize,
    center: &Point,
    spec: RadialSpec,
    ifaces: &[Interface],
    jac_power: f64,
    weight: &(dyn Fn(&Point, f64) -> f64 + Sync),
    h: &F,
) -> Result<(T, f64)>
where
    T: Accum,
    F: Fn(&Point) -> Result<OperatorResult<T>> + Sync,
{
    let (rules, angular) = cfg.rules(coarse);
    let sphere = SphereRule::full(dim, angular);
    let parts = exec::map_range(exec, sphere.dirs.len(), |k| -> Result<(T, f64)> {
        let theta = sphere.dirs[k];
        let mut breaks: Vec<Break> = Vec::new();
        let mut nodes = Vec::new();
        polar_nodes(center, &theta, ifaces, &spec, &rules, &mut breaks, &mut nodes);
        let mut acc = T::zero();
        let mut err = 0.0;
        for &(r, w) in &nodes {
            let y = point::axpy(center, r, &theta);
            let wy = weight(&y, r);
            if wy == 0.0 {
                continue;
            }
            let v = h(&y)?;
            let ww = w * wy * r.powf(jac_power);
            acc.add_scaled(ww, &v.value);
            err += ww.abs() * v.error;
        }
        Ok((acc, err))
    });
    let mut total = T::zero();
    let mut err = 0.0;
    for (part, wt) in parts.into_iter().zip(&sphere.weights) {
        let (a, e) = part?;
        total.add_scaled(*wt, &a);
        err += wt * e;
    }
    Ok((total, err))
}

#[allow(clippy::too_many_arguments)]
fn polar_with_estimate<T, F>(
    cfg: &QuadratureConfig,
    exec: Execution,
    dim: usize,
    center: &Point,
    spec: RadialSpec,
    ifaces: &[Interface],
    jac_power: f64,
    weight: &(dyn Fn(&Point, f64) -> f64 + Sync),
    h: &F,
) -> Result<OperatorResult<T>>
where
    T: Accum,
    F: Fn(&Point) -> Result<OperatorResult<T>> + Sync,
{
    let (fine, inner) = polar_pass(cfg, false, exec, dim, center, spec, ifaces, jac_power, weight, h)?;
    let mut err = inner;
    if cfg.error_estimate {
        let (coarse, _) = polar_pass(cfg, true, exec, dim, center, spec, ifaces, jac_power, weight, h)?;
        err += fine.dist(&coarse);
    }
    Ok(OperatorResult::new(fine, err))
}

/// ∫_{ℝⁿ} h(y) dy. `h` returns its own error, which is integrated into the
/// reported estimate.
pub fn integrate_whole_space<T, F>(spec: &OuterSpec, cfg: &QuadratureConfig, exec: Execution, h: F) -> Result<OperatorResult<T>>
where
    T: Accum,
    F: Fn(&Point) -> Result<OperatorResult<T>> + Sync,
{
    cfg.validate()?;
    let dim = spec.dim;
    let n = dim as f64;
    let c = spec.center;
    let (r_max, kappa, truncation) = match spec.support {
        SupportHint::Compact { center, radius } => (point::dist(&c, &center) + radius, None, 0.0),
        SupportHint::Decaying { center, radius, bound, exponent } => {
            let d = point::dist(&c, &center);
            let r = cfg.far_radius.unwrap_or(d + radius + cfg.far_margin);
            let kappa = exponent - n;
            if kappa <= 0.0 {
                return Err(FracError::Divergence(format!(
                    "integrand decays like |y|^-{exponent}, not integrable in dimension {dim}"
                )));
            }
            if cfg.tail_model {
                (r, Some(kappa), 0.0)
            } else {
                // ∫_{|y−c|>R} bound·(|y − c| − d)^{−s} dy
                let t = sphere_area(dim) * bound * (r / (r - d)).powf(n - 1.0) * (r - d).powf(-kappa) / kappa;
                (r, None, t)
            }
        }
        SupportHint::Unknown => {
            return Err(FracError::config("outer integrand needs a support or decay hint"));
        }
    };
    let cuts = pole_cuts(&spec.poles);
    let mut ifaces = spec.interfaces.clone();
    for cut in &cuts {
        ifaces.push(Interface { center: cut.at, radius: 1.5 * cut.rho, width: 0.25 * cut.rho });
    }
    let radial = RadialSpec { gamma: 1.0, delta: (0.1 * r_max).min(1.0), r_max, far_kappa: kappa };
    let weight = |y: &Point, _r: f64| if cuts.is_empty() { 1.0 } else { outer_weight(&cuts, y).max(0.0) };
    let mut res = polar_with_estimate(cfg, exec, dim, &c, radial, &ifaces, n - 1.0, &weight, &h)?;
    for cut in &cuts {
        let gamma = (n - cut.order).max(1e-3);
        let rho = cut.rho;
        let local = RadialSpec { gamma, delta: 0.5 * rho, r_max: 2.0 * rho, far_kappa: None };
        let lcfg = QuadratureConfig { mid_panels: cfg.mid_panels.min(6), ..cfg.clone() };
        let at = cut.at;
        let w = move |y: &Point, _r: f64| smooth_step_down(point::dist(y, &at) / rho - 1.0);
        let part = polar_with_estimate(&lcfg, exec, dim, &cut.at, local, &spec.interfaces, n - gamma, &w, &h)?;
        res.value.add_scaled(1.0, &part.value);
        res.error += part.error;
    }
    res.error += truncation;
    Ok(res)
}

/// ∫_{B_radius(center)} h(y) dy, with `spec` supplying interfaces and poles
/// (poles must lie off the sphere).
pub fn integrate_ball<T, F>(spec: &OuterSpec, radius: f64, cfg: &QuadratureConfig, exec: Execution, h: F) -> Result<OperatorResult<T>>
where
    T: Accum,
    F: Fn(&Point) -> Result<OperatorResult<T>> + Sync,
{
    cfg.validate()?;
    if !(radius > 0.0) {
        return Err(FracError::domain("ball radius must be positive"));
    }
    let dim = spec.dim;
    let n = dim as f64;
    let c = spec.center;
    let cuts = pole_cuts(&spec.poles);
    let mut ifaces = spec.interfaces.clone();
    for cut in &cuts {
        if (point::dist(&cut.at, &c) - radius).abs() < 2.0 * cut.rho {
            return Err(FracError::Precondition("singularity too close to the ball boundary".into()));
        }
        ifaces.push(Interface { center: cut.at, radius: 1.5 * cut.rho, width: 0.25 * cut.rho });
    }
    let radial = RadialSpec { gamma: 1.0, delta: 0.1 * radius, r_max: radius, far_kappa: None };
    let weight = |y: &Point, _r: f64| if cuts.is_empty() { 1.0 } else { outer_weight(&cuts, y).max(0.0) };
    let mut res = polar_with_estimate(cfg, exec, dim, &c, radial, &ifaces, n - 1.0, &weight, &h)?;
    for cut in cuts.iter().filter(|cut| point::dist(&cut.at, &c) < radius) {
        let gamma = (n - cut.order).max(1e-3);
        let rho = cut.rho;
        let local = RadialSpec { gamma, delta: 0.5 * rho, r_max: 2.0 * rho, far_kappa: None };
        let lcfg = QuadratureConfig { mid_panels: cfg.mid_panels.min(6), ..cfg.clone() };
        let at = cut.at;
        let w = move |y: &Point, _r: f64| smooth_step_down(point::dist(y, &at) / rho - 1.0);
        let part = polar_with_estimate(&lcfg, exec, dim, &cut.at, local, &spec.interfaces, n - gamma, &w, &h)?;
        res.value.add_scaled(1.0, &part.value);
        res.error += part.error;
    }
    Ok(res)
}
