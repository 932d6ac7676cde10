//! Lebesgue norms on boxes and the Besov seminorm [g]_{B^α_{q,1}}.

use super::sphere::SphereRule;
use super::{OperatorResult, QuadratureConfig};
use crate::error::{FracError, Result};
use crate::exec::{self, Execution};
use crate::numerics::field::{ScalarField, SupportHint, VectorField};
use crate::numerics::gauss::GaussRule;
use crate::numerics::grid::GridSpec;
use crate::numerics::point::{self, Point};
use crate::numerics::special::sphere_area;

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(FracError::domain(format!("Lebesgue exponent must be ≥ 1, got {p}")));
    }
    Ok(())
}

/// Bound of ∫ |f|^p outside the box from the support hint; an error when
/// the hint does not reach inside the box.
fn tail_power(support: &SupportHint, p: f64, domain: &GridSpec) -> Result<f64> {
    let dim = domain.dim();
    let inscribed = |center: &Point| {
        (0..dim).fold(f64::INFINITY, |m, i| m.min(center[i] - domain.lower(i)).min(domain.upper(i) - center[i]))
    };
    match *support {
        SupportHint::Unknown => Ok(0.0),
        SupportHint::Compact { center, radius } => {
            if inscribed(&center) < radius {
                return Err(FracError::domain("the norm domain does not contain the field's support"));
            }
            Ok(0.0)
        }
        SupportHint::Decaying { center, radius, bound, exponent } => {
            let r_in = inscribed(&center);
            let n = dim as f64;
            let sp = exponent * p;
            if r_in < radius || sp <= n {
                return Err(FracError::domain(format!(
                    "the norm domain must contain the decay radius {radius} around the field's centre"
                )));
            }
            Ok(sphere_area(dim) * bound.powf(p) * r_in.powf(n - sp) / (sp - n))
        }
    }
}

fn golden_max(f: &impl Fn(&Point) -> f64, start: Point, h: &[f64], dim: usize) -> f64 {
    const PHI: f64 = 0.618_033_988_749_895;
    let mut x = start;
    let mut best = f(&x);
    for _sweep in 0..3 {
        for axis in 0..dim {
            let (mut a, mut b) = (x[axis] - h[axis], x[axis] + h[axis]);
            let at = |t: f64| {
                let mut y = x;
                y[axis] = t;
                f(&y)
            };
            let mut c = b - PHI * (b - a);
            let mut d = a + PHI * (b - a);
            let (mut fc, mut fd) = (at(c), at(d));
            for _ in 0..30 {
                if fc > fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - PHI * (b - a);
                    fc = at(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + PHI * (b - a);
                    fd = at(d);
                }
            }
            let t = 0.5 * (a + b);
            let v = at(t);
            if v > best {
                best = v;
                x[axis] = t;
            }
        }
    }
    best
}

fn norm_of(abs: impl Fn(&Point) -> f64, support: &SupportHint, p: f64, domain: &GridSpec) -> Result<f64> {
    check_exponent(p)?;
    let dim = domain.dim();
    if p.is_infinite() {
        let (mut best, mut arg) = (0.0, 0);
        for k in 0..domain.len() {
            let v = abs(&domain.point(k));
            if v > best {
                best = v;
                arg = k;
            }
        }
        let h: Vec<f64> = (0..dim).map(|i| domain.spacing(i)).collect();
        return Ok(golden_max(&abs, domain.point(arg), &h, dim).max(best));
    }
    let mut sum = 0.0;
    for k in 0..domain.len() {
        sum += abs(&domain.point(k)).powf(p);
    }
    sum *= domain.cell_volume();
    sum += tail_power(support, p, domain)?;
    Ok(sum.powf(1.0 / p))
}

/// ‖f‖_{L^p}: midpoint rule over `domain` plus the decay-hint tail bound
/// (the domain must cover the support hint);
/// `p = ∞` takes the sample maximum refined around the best cell.
pub fn lp_norm(f: &ScalarField, p: f64, domain: &GridSpec) -> Result<f64> {
    norm_of(|y| f.eval(y).abs(), f.support(), p, domain)
}

/// ‖F‖_{L^p} with the Euclidean norm pointwise.
pub fn lp_norm_vector(f: &VectorField, p: f64, domain: &GridSpec) -> Result<f64> {
    norm_of(|y| point::norm(&f.eval(y)), f.support(), p, domain)
}

struct Translates<'a> {
    g: &'a ScalarField,
    center: Point,
    half: f64,
    base: usize,
    q: f64,
    far_norm: f64,
}

impl Translates<'_> {
    /// ‖g(· + h) − g‖_{L^q}
    fn norm(&self, h: &Point) -> f64 {
        let dim = self.g.dim();
        if (0..dim).any(|i| h[i].abs() >= 2.0 * self.half) {
            return self.far_norm;
        }
        let mut lower = [0.0; 3];
        let mut upper = [0.0; 3];
        let mut counts = [1usize; 3];
        for i in 0..dim {
            lower[i] = (self.center[i] - self.half).min(self.center[i] - self.half - h[i]);
            upper[i] = (self.center[i] + self.half).max(self.center[i] + self.half - h[i]);
            let side = upper[i] - lower[i];
            counts[i] = ((self.base as f64) * side / (2.0 * self.half)).ceil() as usize;
        }
        let mut spacing = [0.0; 3];
        let mut cell = 1.0;
        for i in 0..dim {
            spacing[i] = (upper[i] - lower[i]) / counts[i] as f64;
            cell *= spacing[i];
        }
        let total: usize = counts[..dim].iter().product();
        let mut sum = 0.0;
        let mut x = [0.0; 3];
        for k in 0..total {
            let mut rem = k;
            for i in (0..dim).rev() {
                let j = rem % counts[i];
                rem /= counts[i];
                x[i] = lower[i] + (j as f64 + 0.5) * spacing[i];
            }
            let d = self.g.eval(&point::add(&x, h)) - self.g.eval(&x);
            sum += d.abs().powf(self.q);
        }
        (sum * cell).powf(1.0 / self.q)
    }
}

const DECADE_LO: i32 = -4;
const DECADE_HI: i32 = 3;

fn besov_pass(t: &Translates, alpha: f64, dirs: &SphereRule, order: usize, exec: Execution) -> (f64, f64) {
    let rule = GaussRule::new(order);
    let mut nodes = Vec::new();
    for k in DECADE_LO..DECADE_HI {
        let (a, b) = ((10f64).powi(k).ln(), (10f64).powi(k + 1).ln());
        for (s, w) in rule.on(a, b) {
            nodes.push((s.exp(), w));
        }
    }
    let jobs: Vec<(usize, f64, f64)> = (0..dirs.dirs.len())
        .flat_map(|d| nodes.iter().map(move |&(r, w)| (d, r, w)))
        .collect();
    let vals = exec::map(exec, &jobs, |&(d, r, _)| t.norm(&point::scale(&dirs.dirs[d], r)));
    let mut body = 0.0;
    for ((d, r, w), v) in jobs.iter().zip(&vals) {
        // dh = r^{n−1} dr dθ = r^n dt dθ, kernel r^{−n−α}
        body += 2.0 * dirs.weights[*d] * w * v * r.powf(-alpha);
    }
    // linear model for |h| < h₀ through the smallest node
    let h0 = (10f64).powi(DECADE_LO);
    let mut near = 0.0;
    for (d, wd) in dirs.weights.iter().enumerate() {
        near += 2.0 * wd * t.norm(&point::scale(&dirs.dirs[d], h0)) * h0.powf(-alpha) / (1.0 - alpha);
    }
    (body, near)
}

/// Besov seminorm ∫_{ℝⁿ} ‖g(· + h) − g‖_{L^q}/|h|^{n+α} dh with radial
/// quadrature in log |h| over [1e−4, 1e3]; the inner norm uses a midpoint
/// rule on the translated support box.
pub fn besov_seminorm(g: &ScalarField, alpha: f64, q: f64, cfg: &QuadratureConfig, exec: Execution) -> Result<OperatorResult<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::domain(format!("order must lie in (0, 1), got {alpha}")));
    }
    check_exponent(q)?;
    if q.is_infinite() {
        return Err(FracError::domain("Besov seminorm needs a finite inner exponent"));
    }
    cfg.validate()?;
    if !g.meta().poles.is_empty() {
        return Err(FracError::domain("Besov seminorm needs a bounded function"));
    }
    if g.is_constant() {
        return Ok(OperatorResult::zero_scalar());
    }
    let dim = g.dim();
    let (center, half) = match g.support() {
        SupportHint::Compact { center, radius } | SupportHint::Decaying { center, radius, .. } => (*center, *radius),
        SupportHint::Unknown => return Err(FracError::config("Besov seminorm needs a support or decay hint")),
    };
    let base = match dim {
        1 => 4096,
        2 => 128,
        _ => 32,
    };
    let mut t = Translates { g, center, half, base, q, far_norm: 0.0 };
    // ‖g‖_q on the support box
    let mut lower = vec![0.0; dim];
    let mut upper = vec![0.0; dim];
    for i in 0..dim {
        lower[i] = center[i] - half;
        upper[i] = center[i] + half;
    }
    let box_spec = GridSpec::new(&lower, &upper, &vec![base; dim], false)?;
    let gq = lp_norm(g, q, &box_spec)?;
    t.far_norm = 2f64.powf(1.0 / q) * gq;
    let far = 2.0 * 0.5 * sphere_area(dim) * t.far_norm * (10f64).powi(DECADE_HI).powf(-alpha) / alpha;
    let fine_dirs = SphereRule::half(dim, cfg.angular_nodes.min(32));
    let (body, near) = besov_pass(&t, alpha, &fine_dirs, 8, exec);
    let value = body + near + far;
    let mut error = near;
    if cfg.error_estimate {
        let coarse_dirs = SphereRule::half(dim, (cfg.angular_nodes.min(32) / 2).max(4));
        let (cb, cn) = besov_pass(&t, alpha, &coarse_dirs, 5, exec);
        error += (body + near - cb - cn).abs();
    }
    Ok(OperatorResult::new(value, error))
}
