use std::time::Instant;

use super::report::{params, Criterion, VerifyReport};
use super::VerifyConfig;
use crate::analytic::GaussianBump;
use crate::error::{FracError, Result};
use crate::numerics::field::{ScalarField, SupportHint};
use crate::numerics::point::{self, Point};
use crate::numerics::special::riesz_potential_const;
use crate::quadrature::{frac_gradient, riesz_potential, OperatorResult};
use crate::spectral::{self, PeriodicField};

fn finish(mut report: VerifyReport, start: Instant, cfg: &VerifyConfig, criterion: Criterion) -> VerifyReport {
    if let Some(tol) = cfg.tighten {
        let (t, b, p) = criterion.tightened(tol).judge(report.lhs, report.rhs, report.est_err);
        report.tolerance = t;
        report.bound_by = b.to_string();
        report.pass = p;
        report.notes.push(format!("tolerance tightened to {tol:e}"));
    }
    report.seconds = start.elapsed().as_secs_f64();
    report
}

/// max|a − b| / max|b| over all components.
fn relative_gap(a: &PeriodicField, b: &PeriodicField) -> Result<f64> {
    let scale = b.max_abs();
    let d = a.max_abs_diff(b)?;
    Ok(if scale > 0.0 { d / scale } else { d })
}

/// Spectral I_a(I_b f) against I_{a+b} f.
pub fn check_riesz_semigroup(f: &PeriodicField, a: f64, b: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let lhs = spectral::spectral_riesz_potential(&spectral::spectral_riesz_potential(f, b)?, a)?;
    let rhs = spectral::spectral_riesz_potential(f, a + b)?;
    let gap = relative_gap(&lhs, &rhs)?;
    let criterion = Criterion::Match { absolute: 1e-10, relative: 0.0, estimate_factor: 0.0 };
    let p = params([("a", a.to_string()), ("b", b.to_string()), ("n", f.dim().to_string()), ("engine", "spectral".into())]);
    Ok(finish(VerifyReport::new("riesz_semigroup", p, gap, 0.0, 0.0, criterion), start, cfg, criterion))
}

/// Direct quadrature of I_a applied to the closed form of I_b g at `points`,
/// against the closed form of I_{a+b} g.
pub fn check_riesz_semigroup_direct(g: &GaussianBump, a: f64, b: f64, points: &[Point], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    if points.is_empty() {
        return Err(FracError::domain("semigroup check needs at least one point"));
    }
    let n = g.dim as f64;
    let ib = *g;
    // I_b g(x) ≈ c_{n,b}·mass·|x − c|^{b−n} far away
    let r0 = 3.0 * g.width;
    let far = riesz_potential_const(g.dim, b)? * g.mass().abs();
    let bound = 2.0 * far.max(ib.riesz_potential(b, &point::axpy(&g.center, r0, &point::E1))?.abs() * r0.powf(n - b));
    let inner = ScalarField::closed(g.dim, "riesz_potential_of_gaussian", move |x| ib.riesz_potential(b, x).unwrap_or(f64::NAN))
        .with_support(SupportHint::Decaying { center: g.center, radius: r0, bound, exponent: n - b })
        .with_sup_norm(ib.riesz_potential(b, &g.center)?.abs());
    let rows = crate::exec::map(cfg.exec, points, |x| -> Result<(f64, f64, f64)> {
        let v: OperatorResult<f64> = riesz_potential(&inner, a, x, &cfg.inner)?;
        Ok((v.value, g.riesz_potential(a + b, x)?, v.error))
    });
    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut scale = 0.0f64;
    let mut est = 0.0f64;
    for row in rows {
        let (l, r, e) = row?;
        scale = scale.max(r.abs());
        est = est.max(e);
        if (l - r).abs() >= (worst.0 - worst.1).abs() {
            worst = (l, r, e);
        }
    }
    let gap = (worst.0 - worst.1).abs() / scale;
    let criterion = Criterion::Match { absolute: 1e-3, relative: 0.0, estimate_factor: 0.0 };
    let p = params([
        ("a", a.to_string()),
        ("b", b.to_string()),
        ("n", g.dim.to_string()),
        ("points", points.len().to_string()),
        ("engine", "direct".into()),
    ]);
    let report = VerifyReport::new("riesz_semigroup", p, gap, 0.0, est / scale, criterion)
        .with_note(format!("worst point value {:.6e} vs {:.6e}", worst.0, worst.1));
    Ok(finish(report, start, cfg, criterion))
}

/// Spectral ∇^α f against ∇(I_{1−α} f).
pub fn check_symbol_factorization(f: &PeriodicField, alpha: f64, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let lhs = spectral::spectral_frac_gradient(f, alpha)?;
    let rhs = spectral::spectral_gradient(&spectral::spectral_riesz_potential(f, 1.0 - alpha)?)?;
    let gap = relative_gap(&lhs, &rhs)?;
    let criterion = Criterion::Match { absolute: 1e-10, relative: 0.0, estimate_factor: 0.0 };
    let p = params([("alpha", alpha.to_string()), ("n", f.dim().to_string()), ("engine", "spectral".into())]);
    Ok(finish(VerifyReport::new("symbol_factorization", p, gap, 0.0, 0.0, criterion), start, cfg, criterion))
}

/// Σ R_i R_i f = −f for mean-zero f.
pub fn check_riesz_squares(f: &PeriodicField, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    if !f.is_scalar() {
        return Err(FracError::config("Riesz square check acts on scalar fields"));
    }
    let dim = f.dim();
    let rf = spectral::spectral_riesz_transform(f)?;
    let mut sum = vec![0.0; f.spec().len()];
    for i in 0..dim {
        let comp = PeriodicField::scalar(f.spec().clone(), rf.component(i).to_vec())?;
        let rr = spectral::spectral_riesz_transform(&comp)?;
        for (s, v) in sum.iter_mut().zip(rr.component(i)) {
            *s += v;
        }
    }
    let neg = f.scaled(-1.0);
    let total = PeriodicField::scalar(f.spec().clone(), sum)?;
    let gap = relative_gap(&total, &neg)?;
    let mean = f.integral(0) / (f.spec().cell_volume() * f.spec().len() as f64);
    let criterion = Criterion::Match { absolute: 1e-10, relative: 0.0, estimate_factor: 0.0 };
    let p = params([("n", dim.to_string()), ("engine", "spectral".into())]);
    let report = VerifyReport::new("riesz_squares", p, gap, 0.0, 0.0, criterion).with_note(format!("input mean {mean:.3e}"));
    Ok(finish(report, start, cfg, criterion))
}

/// Direct vs spectral ∇^α at `points`: max|direct − spectral| / max|spectral|.
pub fn engine_disagreement(f: &ScalarField, alpha: f64, points: &[Point], cfg: &VerifyConfig) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(FracError::domain("engine comparison needs at least one point"));
    }
    let pf = spectral::embed(f, cfg.spectral_side, cfg.spectral_resolution)?;
    let sg = spectral::spectral_frac_gradient(&pf, alpha)?;
    let rows = crate::exec::map(cfg.exec, points, |x| -> Result<(f64, f64, f64)> {
        let d = frac_gradient(f, alpha, x, &cfg.inner)?;
        let s = sg.interpolate_vector(x);
        Ok((point::dist(&d.value, &s), point::norm(&s), d.error))
    });
    let (mut diff, mut scale, mut est) = (0.0f64, 0.0f64, 0.0f64);
    for row in rows {
        let (d, s, e) = row?;
        diff = diff.max(d);
        scale = scale.max(s);
        est = est.max(e);
    }
    Ok(if scale > 0.0 { (diff / scale, est / scale) } else { (diff, est) })
}

pub fn check_engine_agreement(f: &ScalarField, alpha: f64, points: &[Point], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let (gap, est) = engine_disagreement(f, alpha, points, cfg)?;
    let criterion = Criterion::Match { absolute: 1e-3, relative: 0.0, estimate_factor: 0.0 };
    let p = params([
        ("alpha", alpha.to_string()),
        ("n", f.dim().to_string()),
        ("field", f.label().to_string()),
        ("points", points.len().to_string()),
        ("side", cfg.spectral_side.to_string()),
        ("resolution", cfg.spectral_resolution.to_string()),
    ]);
    Ok(finish(VerifyReport::new("engine_agreement", p, gap, 0.0, est, criterion), start, cfg, criterion))
}
