//! Desk-scale acceptance run: one PASS/FAIL line per criterion.
//!
//! Tolerances are pinned here and judged from the raw report numbers, not
//! from the checks' own criteria.

use std::process::ExitCode;
use std::time::Instant;

use fracfield::analytic::{CompactBump, ConvolvedField, DeltaPairField, GaussianBump};
use fracfield::convergence::{direct_sweep, spectral_sweep};
use fracfield::quadrature::QuadratureConfig;
use fracfield::spectral;
use fracfield::verify::*;
use fracfield::{RadonMeasure, Result, ScalarField};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn gauss(c: [f64; 2], w: f64) -> GaussianBump {
    GaussianBump::new(2, [c[0], c[1], 0.0], w, 1.0).unwrap()
}

fn pair() -> DeltaPairField {
    DeltaPairField::new(2, [0.3, 0.1, 0.0], [-0.4, 0.2, 0.0], 0.6).unwrap()
}

fn smooth_field() -> fracfield::VectorField {
    gauss([-0.1, 0.15], 0.9).vector_field([0.6, -0.8, 0.0])
}

fn rel_gap(r: &VerifyReport) -> f64 {
    r.abs_err / r.rhs.abs().max(f64::MIN_POSITIVE)
}

fn delta_duality(cfg: &VerifyConfig) -> Result<Outcome> {
    let start = Instant::now();
    let bumps: Vec<ScalarField> = vec![
        gauss([0.1, 0.0], 1.0).field(),
        gauss([0.5, -0.3], 0.75).field(),
        gauss([-0.6, 0.4], 1.4).field(),
        CompactBump::new(2, [0.2, 0.1, 0.0], 1.5, 1.0)?.field(),
        CompactBump::new(2, [-0.3, 0.0, 0.0], 0.9, 2.0)?.field(),
        gauss([0.45, 0.5], 0.8).field(),
    ];
    let mut worst = 0.0f64;
    let mut pass = true;
    for alpha in [0.3, 0.5, 0.7] {
        let p = DeltaPairField::new(2, [0.3, 0.1, 0.0], [-0.4, 0.2, 0.0], alpha)?;
        for xi in &bumps {
            let r = check_duality(&DivSubject::delta_pair(&p), xi, alpha, cfg)?;
            let tol = (1e-2 * r.rhs.abs()).max(5.0 * r.est_err);
            pass &= r.abs_err <= tol;
            worst = worst.max(rel_gap(&r));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs <= 60.0;
    outcome(pass, format!("18 cases, worst rel {worst:.2e} (tol 1e-2 rel or 5x estimate), {secs:.1} s (limit 60 s)"))
}

fn convolved_duality(cfg: &VerifyConfig) -> Result<Outcome> {
    let nu = RadonMeasure::from_atoms(2, vec![([0.1, 0.2, 0.0], 0.7), ([-0.5, -0.1, 0.0], -0.4), ([0.3, -0.6, 0.0], 1.1)])?;
    let g = ConvolvedField::new(&nu, 0.6)?;
    let subject = DivSubject::Measure { field: g.field(), measure: g.divergence_measure() };
    let r = check_duality(&subject, &gauss([0.0, 0.1], 1.1).field(), 0.6, cfg)?;
    let rel = rel_gap(&r);
    outcome(rel <= 1e-2, format!("lhs {:.6e} rhs {:.6e}, rel {rel:.2e} (tol 1e-2)", r.lhs, r.rhs))
}

fn leibniz(cfg: &VerifyConfig) -> Result<Outcome> {
    let g = gauss([0.2, -0.1], 1.2).field();
    let f = smooth_field();
    let pts = seeded_points(2, 10, 1.2, 7);
    let a = check_leibniz_pointwise(&g, &f, 0.5, &pts, cfg)?;
    let b = check_zero_mass_nl(&g, &f, 0.5, cfg)?;
    let c = check_global_ibp(&g, &DivSubject::Smooth(f), 0.5, cfg)?;
    let pass = a.lhs.abs() <= 5.0 * a.est_err && b.lhs.abs() <= 1e-3 && rel_gap(&c) <= 1e-3;
    outcome(
        pass,
        format!(
            "residual {:.2e} vs 5x est {:.2e}; zero-mass {:.2e} (tol 1e-3); global ibp rel {:.2e} (tol 1e-3)",
            a.lhs.abs(),
            5.0 * a.est_err,
            b.lhs.abs(),
            rel_gap(&c)
        ),
    )
}

fn ball_ibp(cfg: &VerifyConfig) -> Result<Outcome> {
    let xi = gauss([0.1, 0.0], 1.0).field();
    let mut worst = 0.0f64;
    for r in [0.8, 1.0, 1.3] {
        let rep = check_ball_ibp(&DivSubject::Smooth(smooth_field()), &xi, &[0.0; 3], r, 0.5, cfg)?;
        worst = worst.max(rel_gap(&rep));
    }
    outcome(worst <= 1e-2, format!("radii 0.8, 1.0, 1.3: worst rel {worst:.2e} (tol 1e-2)"))
}

fn mollification(cfg: &VerifyConfig) -> Result<Outcome> {
    let p = pair();
    let (y, z) = p.poles();
    let pts = vec![y, z, [0.0, 0.0, 0.0], [0.45, 0.3, 0.0], [1.5, -1.0, 0.0]];
    let r = check_mollification(&p, 0.3, &pts, cfg)?;
    let peak: f64 = r.params["peak"].parse().unwrap_or(f64::NAN);
    let frac = r.abs_err / peak;
    outcome(frac <= 0.02, format!("5 points incl. both poles: worst gap {:.2e} = {:.2}% of peak (tol 2%)", r.abs_err, 100.0 * frac))
}

fn semigroup(cfg: &VerifyConfig) -> Result<Outcome> {
    let g = gauss([0.2, -0.1], 1.2);
    let pf = spectral::embed(&g.field(), cfg.spectral_side, cfg.spectral_resolution)?;
    let a = check_riesz_semigroup(&pf, 0.3, 0.4, cfg)?;
    let b = check_riesz_semigroup_direct(&g, 0.3, 0.4, &seeded_points(2, 5, 1.0, 13), cfg)?;
    outcome(a.lhs <= 1e-10 && b.lhs <= 1e-3, format!("spectral {:.2e} (tol 1e-10); direct {:.2e} (tol 1e-3)", a.lhs, b.lhs))
}

fn factorization(cfg: &VerifyConfig) -> Result<Outcome> {
    let g = gauss([0.2, -0.1], 1.2).field();
    let pf = spectral::embed(&g, cfg.spectral_side, cfg.spectral_resolution)?;
    let a = check_symbol_factorization(&pf, 0.6, cfg)?;
    let b = check_div_relation(&smooth_field(), 0.5, &gauss([0.1, 0.0], 1.0).field(), cfg)?;
    outcome(
        a.lhs <= 1e-10 && rel_gap(&b) <= 1e-2,
        format!("spectral {:.2e} (tol 1e-10); weak form rel {:.2e} (tol 1e-2)", a.lhs, rel_gap(&b)),
    )
}

fn riesz_squares(cfg: &VerifyConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (dim, res, seed) in [(2, 64, 11), (3, 32, 12)] {
        let f = band_limited(dim, std::f64::consts::TAU, res, 12, seed)?;
        worst = worst.max(check_riesz_squares(&f, cfg)?.lhs);
    }
    outcome(worst <= 1e-10, format!("n = 2, 3: {worst:.2e} (tol 1e-10)"))
}

fn decay(cfg: &VerifyConfig) -> Result<Outcome> {
    let alpha = 0.5;
    let radii: Vec<f64> = (0..6).map(|k| 0.05 * 1.5f64.powi(k)).collect();
    let a = decay_scan(&DecaySubject::Smooth(smooth_field()), 2, alpha, f64::INFINITY, &[0.3, 0.2, 0.0], &radii, cfg)?;
    let p = pair();
    let (y, _) = p.poles();
    let small: Vec<f64> = (0..6).map(|k| 0.01 * 1.5f64.powi(k)).collect();
    let b = decay_scan(&DecaySubject::Measure(p.divergence_measure()), 2, 0.6, 1.0, &y, &small, cfg)?;
    let floor = 2.0 - alpha - 0.1;
    outcome(
        a.lhs >= floor && b.lhs.abs() <= 0.05,
        format!("smooth slope {:.3} (floor {floor}); pole slope {:.3} (tol 0.05)", a.lhs, b.lhs),
    )
}

fn zero_total(cfg: &VerifyConfig) -> Result<Outcome> {
    let a = CompactBump::new(2, [0.2, 0.1, 0.0], 1.0, 1.0)?.field();
    let b = CompactBump::new(2, [-0.5, 0.4, 0.0], 0.7, 1.5)?.field();
    let f = fracfield::VectorField::scalar_times_vector(&a, [0.6, -0.8, 0.0])
        .linear_combination(1.0, &fracfield::VectorField::scalar_times_vector(&b, [0.2, 0.9, 0.0]), 1.0);
    let r = check_zero_total(&DivSubject::Smooth(f), 0.6, cfg)?;
    outcome(r.lhs.abs() <= 2e-3, format!("|total| {:.2e} (tol 2e-3)", r.lhs.abs()))
}

fn cantor(cfg: &VerifyConfig) -> Result<Outcome> {
    let r = check_cantor_scaling(10, 1, cfg)?;
    outcome(r.abs_err <= 0.05, format!("slope {:.4} vs {:.4} (tol 0.05)", r.lhs, r.rhs))
}

fn engines(cfg: &VerifyConfig) -> Result<Outcome> {
    let g = gauss([0.2, -0.1], 1.2).field();
    let (gap, _) = engine_disagreement(&g, 0.6, &seeded_points(2, 20, 1.5, 17), cfg)?;
    let f = GaussianBump::standard(2).field();
    let x = [0.4, 0.3, 0.0];
    let s = spectral_sweep(&f, 0.5, &x, 16.0, &[32, 64, 128, 256])?;
    let d = direct_sweep(&f, 0.5, &x, &QuadratureConfig::default(), &[0.125, 0.25, 0.5, 1.0, 2.0])?;
    let (so, dord) = (s.observed_order.unwrap_or(f64::NAN), d.observed_order.unwrap_or(f64::NAN));
    outcome(
        gap <= 1e-3 && so >= 4.0 && dord >= 1.8,
        format!("disagreement {gap:.2e} (tol 1e-3); spectral order {so:.1} (min 4); direct order {dord:.1} (min 1.8)"),
    )
}

type Check = fn(&VerifyConfig) -> Result<Outcome>;

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let criteria: [(&str, Check); 12] = [
        ("delta-divergence duality", delta_duality),
        ("convolved-field duality", convolved_duality),
        ("Leibniz residual, zero mass, global ibp", leibniz),
        ("ball integration by parts", ball_ibp),
        ("mollification commutation", mollification),
        ("Riesz semigroup", semigroup),
        ("symbol factorization", factorization),
        ("Riesz squares", riesz_squares),
        ("decay regimes", decay),
        ("zero total mass", zero_total),
        ("Cantor scaling", cantor),
        ("engine cross-validation", engines),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = match run(&cfg) {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:2}] {name}: {detail} [{:.1} s]", i + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of 12 passed in {:.1} s", 12 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
