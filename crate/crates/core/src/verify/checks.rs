use std::time::Instant;

use super::report::{params, Criterion, VerifyReport};
use super::VerifyConfig;
use crate::analytic::{cantor_dimension, cantor_measure, grad_chi_ball, indicator_ball, loglog_slope, DeltaPairField, MollifiedDeltaPair};
use crate::error::{FracError, Result};
use crate::numerics::field::{FieldMeta, Interface, ScalarField, SupportHint, VectorField};
use crate::numerics::grid::GridSpec;
use crate::numerics::measure::RadonMeasure;
use crate::numerics::params::conjugate;
use crate::numerics::point::{self, Point};
use crate::numerics::special::mu_const;
use crate::quadrature::{
    besov_seminorm, frac_divergence, frac_gradient, integrate_ball, integrate_whole_space, lp_norm_vector, nl_divergence,
    nl_gradient, riesz_potential, OperatorResult, OuterSpec,
};
use crate::spectral::{self, PeriodicField};

/// A vector field together with a source for its fractional divergence.
#[derive(Clone)]
pub enum DivSubject {
    /// Analytic field with its exact divergence measure.
    Measure { field: VectorField, measure: RadonMeasure },
    /// Smooth field; the divergence density is computed spectrally.
    Smooth(VectorField),
}

impl DivSubject {
    pub fn delta_pair(pair: &DeltaPairField) -> Self {
        DivSubject::Measure { field: pair.field(), measure: pair.divergence_measure() }
    }

    pub fn field(&self) -> &VectorField {
        match self {
            DivSubject::Measure { field, .. } => field,
            DivSubject::Smooth(field) => field,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            DivSubject::Measure { .. } => "measure",
            DivSubject::Smooth(_) => "smooth",
        }
    }
}

fn finish(mut report: VerifyReport, start: Instant, cfg: &VerifyConfig, criterion: Criterion) -> VerifyReport {
    if let Some(tol) = cfg.tighten {
        let c = criterion.tightened(tol);
        let (t, b, p) = c.judge(report.lhs, report.rhs, report.est_err);
        report.tolerance = t;
        report.bound_by = b.to_string();
        report.pass = p;
        report.notes.push(format!("tolerance tightened to {tol:e}"));
    }
    report.seconds = start.elapsed().as_secs_f64();
    report
}

/// Outer integration layout for `∫ a(y)·b(y) dy` where `a` carries the
/// declared support and `b` decays at least like |y|^{−extra}.
fn pairing_spec(a: &FieldMeta, extra: f64, dim: usize) -> Result<OuterSpec> {
    let support = match a.support {
        SupportHint::Compact { .. } => a.support,
        SupportHint::Decaying { center, radius, bound, exponent } => {
            SupportHint::Decaying { center, radius, bound, exponent: exponent + extra }
        }
        SupportHint::Unknown => {
            return Err(FracError::config(format!("{} needs a support or decay hint for whole-space pairing", a.label)))
        }
    };
    let center = support.center().unwrap_or(point::ORIGIN);
    Ok(OuterSpec::new(dim, center, support)
        .with_interfaces(a.interfaces.iter().copied())
        .with_poles(a.poles.iter().copied()))
}

/// Spectral div^α of a smooth field on the configured periodic box.
fn spectral_density(f: &VectorField, alpha: f64, cfg: &VerifyConfig) -> Result<PeriodicField> {
    let pf = spectral::embed_vector(f, cfg.spectral_side, cfg.spectral_resolution)?;
    spectral::spectral_frac_divergence(&pf, alpha)
}

/// `∫ ξ·ρ` for a periodic density sampled on the box (ξ must vanish near the box edge).
fn grid_pairing(density: &PeriodicField, xi: &ScalarField) -> f64 {
    let spec = density.spec();
    let vals = density.component(0);
    let mut acc = 0.0;
    for (k, v) in vals.iter().enumerate() {
        acc += xi.eval(&spec.point(k)) * v;
    }
    acc * spec.cell_volume()
}

/// `∫ F·∇^αξ dy` by nested quadrature.
fn pairing(f: &VectorField, xi: &ScalarField, alpha: f64, cfg: &VerifyConfig) -> Result<OperatorResult<f64>> {
    let dim = f.dim();
    if xi.is_constant() {
        return Ok(OperatorResult::zero_scalar());
    }
    let spec = pairing_spec(f.meta(), dim as f64 + alpha, dim)?;
    integrate_whole_space(&spec, &cfg.outer, cfg.exec, |y| {
        let g = frac_gradient(xi, alpha, y, &cfg.inner)?;
        let fy = f.eval(y);
        Ok(OperatorResult::new(point::dot(&fy, &g.value), point::norm(&fy) * g.error))
    })
}

/// `−∫ ξ d div^α F`.
fn pairing_rhs(subject: &DivSubject, xi: &ScalarField, alpha: f64, cfg: &VerifyConfig) -> Result<f64> {
    match subject {
        DivSubject::Measure { measure, .. } => Ok(-measure.integrate(|x| xi.eval(x))),
        DivSubject::Smooth(f) => Ok(-grid_pairing(&spectral_density(f, alpha, cfg)?, xi)),
    }
}

fn pairing_check(name: &str, subject: &DivSubject, xi: &ScalarField, alpha: f64, cfg: &VerifyConfig, criterion: Criterion) -> Result<VerifyReport> {
    let start = Instant::now();
    let lhs = pairing(subject.field(), xi, alpha, cfg)?;
    let rhs = pairing_rhs(subject, xi, alpha, cfg)?;
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", subject.field().dim().to_string()),
        ("field", subject.field().label().to_string()),
        ("test", xi.label().to_string()),
        ("divergence", subject.kind().to_string()),
    ]);
    Ok(finish(VerifyReport::new(name, p, lhs.value, rhs, lhs.error, criterion), start, cfg, criterion))
}

/// `∫ F·∇^αξ = −∫ ξ d div^αF`, with the right side from exact atoms or the
/// spectral density.
pub fn check_duality(subject: &DivSubject, xi: &ScalarField, alpha: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let criterion = match subject {
        DivSubject::Measure { .. } => Criterion::relative(1e-2),
        DivSubject::Smooth(_) => Criterion::DEFAULT,
    };
    pairing_check("duality", subject, xi, alpha, cfg, criterion)
}

/// `∫ F·∇^α g = −∫ g d div^α F` for the couple (g, F).
pub fn check_global_ibp(g: &ScalarField, subject: &DivSubject, alpha: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let criterion = Criterion::Match { absolute: 1e-12, relative: 1e-3, estimate_factor: 5.0 };
    pairing_check("global_ibp", subject, g, alpha, cfg, criterion)
}

/// Residual of div^α(gF) = g div^αF + F·∇^αg + div^α_NL(g, F) at each point.
pub fn check_leibniz_pointwise(g: &ScalarField, f: &VectorField, alpha: f64, points: &[Point], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    if points.is_empty() {
        return Err(FracError::domain("Leibniz check needs at least one point"));
    }
    let gf = f.times_scalar(g);
    let rows = crate::exec::map(cfg.exec, points, |x| -> Result<(f64, f64)> {
        let lhs = frac_divergence(&gf, alpha, x, &cfg.inner)?;
        let d = frac_divergence(f, alpha, x, &cfg.inner)?;
        let grad = frac_gradient(g, alpha, x, &cfg.inner)?;
        let nl = nl_divergence(g, f, alpha, x, &cfg.inner)?;
        let (gx, fx) = (g.eval(x), f.eval(x));
        let res = lhs.value - gx * d.value - point::dot(&fx, &grad.value) - nl.value;
        let est = lhs.error + gx.abs() * d.error + point::norm(&fx) * grad.error + nl.error;
        Ok((res.abs(), est))
    });
    let mut worst = 0.0f64;
    let mut est = 0.0;
    for r in rows {
        let (res, e) = r?;
        worst = worst.max(res);
        est += e;
    }
    let criterion = Criterion::Match { absolute: 1e-12, relative: 0.0, estimate_factor: 5.0 };
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", f.dim().to_string()),
        ("g", g.label().to_string()),
        ("field", f.label().to_string()),
        ("points", points.len().to_string()),
    ]);
    Ok(finish(VerifyReport::new("leibniz_pointwise", p, worst, 0.0, est, criterion), start, cfg, criterion))
}

fn nl_spec(g: &ScalarField, f: &VectorField, alpha: f64) -> Result<OuterSpec> {
    // Far from both supports div^α_NL(g, F) ~ |y|^{−n−α}.
    let dim = f.dim();
    let n = dim as f64;
    let a = g.meta().support;
    let b = f.meta().support;
    let (c, r) = match (a.center(), a.radius(), b.center(), b.radius()) {
        (Some(ca), Some(ra), Some(cb), Some(rb)) => (ca, ra.max(point::dist(&ca, &cb) + rb)),
        _ => return Err(FracError::config("non-local pairing needs support hints on both fields")),
    };
    let mut ifaces: Vec<Interface> = g.meta().interfaces.clone();
    ifaces.extend(f.meta().interfaces.iter().copied());
    Ok(OuterSpec::new(dim, c, SupportHint::Decaying { center: c, radius: r, bound: 1.0, exponent: n + alpha })
        .with_interfaces(ifaces))
}

/// `∫ div^α_NL(g, F) dx = 0`.
pub fn check_zero_mass_nl(g: &ScalarField, f: &VectorField, alpha: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let total = if g.is_constant() || f.is_constant() {
        OperatorResult::zero_scalar()
    } else {
        let spec = nl_spec(g, f, alpha)?;
        integrate_whole_space(&spec, &cfg.outer, cfg.exec, |y| nl_divergence(g, f, alpha, y, &cfg.inner))?
    };
    let criterion = Criterion::DEFAULT;
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", f.dim().to_string()),
        ("g", g.label().to_string()),
        ("field", f.label().to_string()),
    ]);
    Ok(finish(VerifyReport::new("zero_mass_nl", p, total.value, 0.0, total.error, criterion), start, cfg, criterion))
}

/// `‖div^α_NL(g, F)‖_{L¹} ≤ μ_{n,α}[g]_{B^α_{q,1}}‖F‖_{L^p}`; the ratio of
/// the two sides is recorded.
pub fn check_nl_l1_bound(g: &ScalarField, f: &VectorField, alpha: f64, p: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let dim = f.dim();
    let q = conjugate(p);
    let (left, left_err) = if g.is_constant() || f.is_constant() {
        (0.0, 0.0)
    } else {
        let spec = nl_spec(g, f, alpha)?;
        let l = integrate_whole_space(&spec, &cfg.outer, cfg.exec, |y| {
            let v = nl_divergence(g, f, alpha, y, &cfg.inner)?;
            Ok(OperatorResult::new(v.value.abs(), v.error))
        })?;
        (l.value, l.error)
    };
    let besov = besov_seminorm(g, alpha, q, &cfg.inner, cfg.exec)?;
    let center = f.support().center().unwrap_or(point::ORIGIN);
    let domain = GridSpec::cube(dim, &center, cfg.spectral_side, cfg.spectral_resolution, false)?;
    let fp = lp_norm_vector(f, p, &domain)?;
    let mu = mu_const(dim, alpha)?;
    let right = mu * besov.value * fp;
    let ratio = if right > 0.0 { left / right } else { 0.0 };
    let criterion = Criterion::AtMost { slack: 1e-3 };
    let prm = params([
        ("alpha", alpha.to_string()),
        ("n", dim.to_string()),
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("g", g.label().to_string()),
        ("field", f.label().to_string()),
    ]);
    let report = VerifyReport::new("nl_l1_bound", prm, left, right, left_err + mu * fp * besov.error, criterion)
        .with_note(format!("ratio={ratio:.6}"))
        .with_note("the proof of the estimate yields the constant 2mu; the stated constant mu is tested");
    Ok(finish(report, start, cfg, criterion))
}

/// Four-term integration by parts on `B_r(x)`:
/// ∫_B F·∇^αξ + ∫ ξF·∇^αχ_B + ∫ F·∇^α_NL(χ_B, ξ) = −∫_B ξ d div^αF.
pub fn check_ball_ibp(subject: &DivSubject, xi: &ScalarField, x: &Point, r: f64, alpha: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let f = subject.field();
    let dim = f.dim();
    // graded: the outer integrands carry |dist|^{−α} singularities at the sphere
    let sphere = Interface { center: *x, radius: r, width: 1e-8 * r };
    let ball_spec = OuterSpec::new(dim, *x, SupportHint::Compact { center: *x, radius: r })
        .with_interfaces(f.meta().interfaces.iter().copied())
        .with_poles(f.meta().poles.iter().copied());
    let t1 = integrate_ball(&ball_spec, r, &cfg.outer, cfg.exec, |y| {
        let g = frac_gradient(xi, alpha, y, &cfg.inner)?;
        let fy = f.eval(y);
        Ok(OperatorResult::new(point::dot(&fy, &g.value), point::norm(&fy) * g.error))
    })?;
    let xf = f.times_scalar(xi);
    let n = dim as f64;
    let warnings = std::sync::atomic::AtomicUsize::new(0);
    let t2 = if xi.is_constant() && xi.eval(x) == 0.0 {
        OperatorResult::zero_scalar()
    } else {
        let spec = pairing_spec(xf.meta(), n + alpha, dim)?.with_center(*x).with_interfaces([sphere]);
        integrate_whole_space(&spec, &cfg.outer, cfg.exec, |y| {
            let b = grad_chi_ball(dim, r, x, alpha, y, cfg.chi_nodes)?;
            if b.warning.is_some() {
                warnings.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            }
            Ok(OperatorResult::new(point::dot(&xf.eval(y), &b.value), 0.0))
        })?
    };
    let chi = indicator_ball(dim, *x, r)?;
    let t3 = if xi.is_constant() {
        OperatorResult::zero_scalar()
    } else {
        let spec = pairing_spec(f.meta(), n + alpha, dim)?.with_center(*x).with_interfaces([sphere]);
        integrate_whole_space(&spec, &cfg.outer, cfg.exec, |y| {
            let v = nl_gradient(&chi, xi, alpha, y, &cfg.inner)?;
            let fy = f.eval(y);
            Ok(OperatorResult::new(point::dot(&fy, &v.value), point::norm(&fy) * v.error))
        })?
    };
    let rhs = match subject {
        DivSubject::Measure { measure, .. } => {
            let mut acc = 0.0;
            for (p, w) in measure.atoms() {
                if point::dist(p, x) < r {
                    acc += w * xi.eval(p);
                }
            }
            if measure.density().is_some() {
                return Err(FracError::domain("ball check supports atomic ground-truth measures only"));
            }
            -acc
        }
        DivSubject::Smooth(f) => {
            let density = spectral_density(f, alpha, cfg)?;
            let spec = OuterSpec::new(dim, *x, SupportHint::Compact { center: *x, radius: r });
            let v = integrate_ball(&spec, r, &cfg.outer, cfg.exec, |y| Ok(OperatorResult::new(xi.eval(y) * density.interpolate(0, y), 0.0)))?;
            -v.value
        }
    };
    let lhs = t1.value + t2.value + t3.value;
    let criterion = Criterion::relative(1e-2);
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", dim.to_string()),
        ("r", r.to_string()),
        ("center", format!("{:?}", &x[..dim])),
        ("field", f.label().to_string()),
        ("test", xi.label().to_string()),
    ]);
    let mut report = VerifyReport::new("ball_ibp", p, lhs, rhs, t1.error + t2.error + t3.error, criterion)
        .with_note(format!("terms={:.6e},{:.6e},{:.6e}", t1.value, t2.value, t3.value));
    let w = warnings.into_inner();
    if w > 0 {
        report = report.with_note(format!("{w} near-sphere evaluations of the indicator gradient"));
    }
    Ok(finish(report, start, cfg, criterion))
}

/// div^α of the mollified pair against ρ_ε(· − y) − ρ_ε(· − z).
pub fn check_mollification(pair: &DeltaPairField, eps: f64, points: &[Point], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    if points.is_empty() {
        return Err(FracError::domain("mollification check needs at least one point"));
    }
    let moll = MollifiedDeltaPair::new(pair, eps)?;
    let field = moll.field();
    let alpha = pair.alpha();
    let rows = crate::exec::map(cfg.exec, points, |x| -> Result<(f64, f64, f64)> {
        let v = frac_divergence(&field, alpha, x, &cfg.inner)?;
        Ok((v.value, moll.divergence_density(x), v.error))
    });
    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut peak = 0.0f64;
    let mut est = 0.0;
    for row in rows {
        let (l, rr, e) = row?;
        peak = peak.max(rr.abs());
        est += e;
        if (l - rr).abs() >= (worst.0 - worst.1).abs() {
            worst = (l, rr, e);
        }
    }
    let criterion = Criterion::Match { absolute: 0.02 * peak, relative: 0.0, estimate_factor: 5.0 };
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", pair.dim().to_string()),
        ("eps", eps.to_string()),
        ("points", points.len().to_string()),
        ("peak", format!("{peak:.6e}")),
    ]);
    Ok(finish(VerifyReport::new("mollification", p, worst.0, worst.1, est, criterion), start, cfg, criterion))
}

/// What [`decay_scan`] measures.
#[derive(Clone)]
pub enum DecaySubject {
    /// Smooth field; |div^αF|(B_r) from the spectral density.
    Smooth(VectorField),
    /// A divergence measure given exactly.
    Measure(RadonMeasure),
}

/// Masses |div^αF|(B_r(x)) over `radii`.
pub fn decay_masses(subject: &DecaySubject, alpha: f64, x: &Point, radii: &[f64], cfg: &VerifyConfig) -> Result<Vec<f64>> {
    match subject {
        DecaySubject::Smooth(f) => {
            let d = spectral_density(f, alpha, cfg)?;
            Ok(radii.iter().map(|r| d.ball_integral(0, x, *r, true)).collect())
        }
        DecaySubject::Measure(m) => Ok(radii.iter().map(|r| m.ball_variation(x, *r)).collect()),
    }
}

/// Log-log slope of |div^αF|(B_r(x)) against the floor n/q − α.
/// Measures are recorded informationally.
pub fn decay_scan(subject: &DecaySubject, dim: usize, alpha: f64, p: f64, x: &Point, radii: &[f64], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    if radii.len() < 2 {
        return Err(FracError::domain("decay scan needs at least two radii"));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(FracError::domain("radii must be positive"));
    }
    let masses = decay_masses(subject, alpha, x, radii, cfg)?;
    if masses.iter().any(|m| !(*m > 0.0)) {
        return Err(FracError::Precondition("zero mass in a scan ball; the log-log fit is undefined".into()));
    }
    let slope = loglog_slope(radii, &masses);
    let q = conjugate(p);
    let floor = dim as f64 / q - alpha;
    let (criterion, kind) = match subject {
        DecaySubject::Smooth(_) => (Criterion::AtLeast { slack: 0.1 }, "smooth"),
        DecaySubject::Measure(_) => (Criterion::Informational, "measure"),
    };
    let prm = params([
        ("alpha", alpha.to_string()),
        ("n", dim.to_string()),
        ("p", p.to_string()),
        ("center", format!("{:?}", &x[..dim])),
        ("radii", radii.len().to_string()),
        ("subject", kind.to_string()),
    ]);
    Ok(finish(VerifyReport::new("decay_scan", prm, slope, floor, 0.0, criterion), start, cfg, criterion))
}

/// div^αF(ℝⁿ) = 0. Smooth fields: whole-space quadrature of the direct
/// density, tail included through the compactified far rule.
pub fn check_zero_total(subject: &DivSubject, alpha: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let f = subject.field();
    let dim = f.dim();
    let mut notes = Vec::new();
    let total = match subject {
        DivSubject::Measure { measure, .. } => OperatorResult::new(measure.total_mass(), 0.0),
        DivSubject::Smooth(f) if f.is_constant() => OperatorResult::zero_scalar(),
        DivSubject::Smooth(f) => {
            let center = f.support().center().unwrap_or(point::ORIGIN);
            let radius = f.support().radius().ok_or_else(|| FracError::config("zero-total check needs a support hint"))?;
            let n = dim as f64;
            let spec = OuterSpec::new(dim, center, SupportHint::Decaying { center, radius, bound: 1.0, exponent: n + alpha })
                .with_interfaces(f.meta().interfaces.iter().copied());
            let v = integrate_whole_space(&spec, &cfg.outer, cfg.exec, |y| frac_divergence(f, alpha, y, &cfg.inner))?;
            if let Ok(d) = spectral_density(f, alpha, cfg) {
                notes.push(format!("periodic box sum {:.3e}", d.integral(0)));
            }
            v
        }
    };
    let criterion = Criterion::Match { absolute: 2e-3, relative: 0.0, estimate_factor: 5.0 };
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", dim.to_string()),
        ("field", f.label().to_string()),
        ("divergence", subject.kind().to_string()),
    ]);
    let mut report = VerifyReport::new("zero_total", p, total.value, 0.0, total.error, criterion);
    report.notes = notes;
    Ok(finish(report, start, cfg, criterion))
}

/// ∫ F·∇^αφ = ∫ (I_{1−α}F)·∇φ, the right side through the Riesz potential
/// and centred differences of φ.
pub fn check_div_relation(f: &VectorField, alpha: f64, phi: &ScalarField, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let dim = f.dim();
    let left = pairing(f, phi, alpha, cfg)?;
    let right = if phi.is_constant() {
        OperatorResult::zero_scalar()
    } else {
        let comps: Vec<ScalarField> = (0..dim).map(|i| f.component(i)).collect();
        let h = 1e-4;
        let spec = pairing_spec(phi.meta(), 0.0, dim)?;
        integrate_whole_space(&spec, &cfg.outer, cfg.exec, |y| {
            let mut acc = 0.0;
            let mut err = 0.0;
            for (i, c) in comps.iter().enumerate() {
                if c.is_constant() && c.eval(y) == 0.0 {
                    continue;
                }
                let mut yp = *y;
                let mut ym = *y;
                yp[i] += h;
                ym[i] -= h;
                let dphi = (phi.eval(&yp) - phi.eval(&ym)) / (2.0 * h);
                let g = riesz_potential(c, 1.0 - alpha, y, &cfg.inner)?;
                acc += g.value * dphi;
                err += g.error * dphi.abs();
            }
            Ok(OperatorResult::new(acc, err))
        })?
    };
    let criterion = Criterion::Match { absolute: 1e-12, relative: 1e-2, estimate_factor: 5.0 };
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", dim.to_string()),
        ("field", f.label().to_string()),
        ("test", phi.label().to_string()),
    ]);
    Ok(finish(VerifyReport::new("div_relation", p, left.value, right.value, left.error + right.error, criterion), start, cfg, criterion))
}

/// Ball-mass exponent of the level-`level` Cantor measure at a Cantor point.
pub fn check_cantor_scaling(level: u32, dim: usize, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let mu = cantor_measure(level, dim)?;
    let x = [0.0; 3];
    let js: Vec<i32> = (1..level as i32 - 1).collect();
    let radii: Vec<f64> = js.iter().map(|j| 3f64.powi(-j) * 1.0001).collect();
    let masses: Vec<f64> = radii.iter().map(|r| mu.ball_mass(&x, *r)).collect();
    let slope = loglog_slope(&radii, &masses);
    let criterion = Criterion::Match { absolute: 0.05, relative: 0.0, estimate_factor: 0.0 };
    let p = params([("level", level.to_string()), ("n", dim.to_string()), ("radii", radii.len().to_string())]);
    Ok(finish(VerifyReport::new("cantor_scaling", p, slope, cantor_dimension(), 0.0, criterion), start, cfg, criterion))
}
