//! The five experiments. Each returns its files and a short stdout summary;
//! nothing touches the disk here.

use std::time::Instant;

use fracfield::analytic::loglog_slope;
use fracfield::convergence::{direct_sweep, spectral_sweep, ConvergenceTable};
use fracfield::exec::{self, Execution};
use fracfield::numerics::point::{self, Point};
use fracfield::quadrature::{
    evaluate_batch, frac_divergence, frac_gradient, riesz_potential, riesz_transform, OperatorResult,
};
use fracfield::spectral::{self, PeriodicField};
use fracfield::verify::{decay_masses, default_suite, run_jobs, seeded_points, DecaySubject, VerifyConfig, VerifyReport};
use fracfield::{FracParams, GridSpec, ScalarField, VectorField};

use crate::config::{Engine, ExperimentConfig, Kind, Operator};
use crate::error::CliError;
use crate::fields::{self, to_point, Built};
use crate::output::{grid_bytes, grid_sidecar, num, Header, OutFile, Table};

/// Identity names of the default verification suite.
pub const SUITE_NAMES: &[&str] = &[
    "ball_ibp",
    "cantor_scaling",
    "decay_scan",
    "div_relation",
    "duality",
    "engine_agreement",
    "global_ibp",
    "leibniz_pointwise",
    "mollification",
    "nl_l1_bound",
    "riesz_semigroup",
    "riesz_squares",
    "symbol_factorization",
    "zero_mass_nl",
    "zero_total",
];

pub struct Outcome {
    pub files: Vec<OutFile>,
    pub summary: Vec<String>,
    /// Some verification record failed.
    pub failed: bool,
}

pub struct Context {
    pub cfg: ExperimentConfig,
    pub exec: Execution,
}

impl Context {
    fn header(&self, kind: Kind) -> Header {
        Header { digest: self.cfg.digest(), experiment: kind.as_str() }
    }

    fn origin(&self, c: &Option<Vec<f64>>) -> Point {
        c.as_deref().map(to_point).unwrap_or(point::ORIGIN)
    }

    fn verify_config(&self) -> VerifyConfig {
        let mut vc = VerifyConfig { exec: self.exec, ..VerifyConfig::default() };
        vc.spectral_side = self.cfg.spectral.side;
        vc.spectral_resolution = self.cfg.spectral.resolution;
        if let Some(v) = &self.cfg.verify {
            vc.tighten = v.tighten;
            if let Some(q) = &v.inner {
                vc.inner = q.clone();
            }
            if let Some(q) = &v.outer {
                vc.outer = q.clone();
            }
        }
        vc
    }
}

pub fn run(ctx: &Context) -> Result<Outcome, CliError> {
    match ctx.cfg.kind.expect("normalised config") {
        Kind::Op => run_op(ctx),
        Kind::Verify => run_verify(ctx),
        Kind::Convergence => run_convergence(ctx),
        Kind::Decay => run_decay(ctx),
        Kind::Bench => run_bench(ctx),
    }
}

fn engines(e: Engine) -> Vec<Engine> {
    match e {
        Engine::Both => vec![Engine::Direct, Engine::Spectral],
        one => vec![one],
    }
}

enum Input {
    Scalar(ScalarField),
    Vector(VectorField),
}

fn pad(r: OperatorResult<f64>) -> OperatorResult<Point> {
    OperatorResult::new([r.value, 0.0, 0.0], r.error)
}

fn direct_values(ctx: &Context, input: &Input, op: Operator, a: f64, pts: &[Point]) -> Result<Vec<(Point, f64)>, CliError> {
    let q = &ctx.cfg.quadrature;
    let items = evaluate_batch(ctx.exec, pts, |x| match (input, op) {
        (Input::Scalar(f), Operator::FracGradient) => frac_gradient(f, a, x, q),
        (Input::Scalar(f), Operator::RieszTransform) => riesz_transform(f, x, q),
        (Input::Scalar(f), Operator::RieszPotential) => riesz_potential(f, a, x, q).map(pad),
        (Input::Vector(v), Operator::FracDivergence) => frac_divergence(v, a, x, q).map(pad),
        _ => unreachable!("operator and field kind are checked during validation"),
    })?;
    Ok(items.into_iter().map(|b| (b.value, b.error)).collect())
}

fn spectral_apply(input: &Input, op: Operator, a: f64, side: f64, n: usize) -> Result<PeriodicField, CliError> {
    Ok(match (input, op) {
        (Input::Scalar(f), _) => {
            let pf = spectral::embed(f, side, n)?;
            match op {
                Operator::FracGradient => spectral::spectral_frac_gradient(&pf, a)?,
                Operator::RieszTransform => spectral::spectral_riesz_transform(&pf)?,
                Operator::RieszPotential => spectral::spectral_riesz_potential(&pf, a)?,
                Operator::FracDivergence => unreachable!("checked during validation"),
            }
        }
        (Input::Vector(v), _) => spectral::spectral_frac_divergence(&spectral::embed_vector(v, side, n)?, a)?,
    })
}

/// Spectral values interpolated at `pts`; the error estimate is the gap to
/// the same computation at half the resolution.
fn spectral_values(ctx: &Context, input: &Input, op: Operator, a: f64, pts: &[Point], comps: usize) -> Result<Vec<(Point, f64)>, CliError> {
    let (side, n) = (ctx.cfg.spectral.side, ctx.cfg.spectral.resolution);
    let fine = spectral_apply(input, op, a, side, n)?;
    let coarse = spectral_apply(input, op, a, side, n / 2)?;
    Ok(exec::map(ctx.exec, pts, |x| {
        let mut v = [0.0; 3];
        let mut err = 0.0f64;
        for (j, vj) in v.iter_mut().enumerate().take(comps) {
            *vj = fine.interpolate(j, x);
            err = err.max((*vj - coarse.interpolate(j, x)).abs());
        }
        (v, err)
    }))
}

fn list(v: impl IntoIterator<Item = impl ToString>) -> String {
    format!("[{}]", v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn run_op(ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.cfg;
    let op = cfg.op.as_ref().expect("validated");
    let def = cfg.field("op.field", &op.field)?;
    let dim = cfg.dim;
    let input = if def.is_scalar() {
        Input::Scalar(fields::scalar(def, dim)?)
    } else {
        Input::Vector(fields::vector(def, dim)?)
    };
    let a = op.alpha.unwrap_or(0.0);
    let center = ctx.origin(&op.grid.center);
    let spec = GridSpec::cube(dim, &center, op.grid.side, op.grid.resolution, false)?;
    let pts = spec.points();
    let comps = match op.operator {
        Operator::FracGradient | Operator::RieszTransform => dim,
        Operator::FracDivergence | Operator::RieszPotential => 1,
    };
    let header = ctx.header(Kind::Op);
    let mut files = Vec::new();
    let mut summary = Vec::new();
    for engine in engines(op.engine) {
        let rows = match engine {
            Engine::Direct => direct_values(ctx, &input, op.operator, a, &pts)?,
            _ => spectral_values(ctx, &input, op.operator, a, &pts, comps)?,
        };
        let values: Vec<f64> = rows.iter().flat_map(|(v, _)| v[..comps].to_vec()).collect();
        let errors: Vec<f64> = rows.iter().map(|(_, e)| *e).collect();
        let max_err = errors.iter().cloned().fold(0.0, f64::max);
        let stem = format!("op_{}", engine.as_str());
        let mut entries = vec![
            ("engine", format!("\"{}\"", engine.as_str())),
            ("operator", format!("\"{}\"", op.operator.as_str())),
            ("field", format!("\"{}\"", op.field)),
        ];
        if let Some(a) = op.alpha {
            entries.push(("alpha", num(a)));
        }
        entries.extend([
            ("dims", dim.to_string()),
            ("counts", list(spec.counts())),
            ("lower", list((0..dim).map(|i| num(spec.lower(i))))),
            ("upper", list((0..dim).map(|i| num(spec.upper(i))))),
            ("placement", "\"cell-centred\"".to_string()),
            ("components", comps.to_string()),
            ("values", format!("\"{stem}.bin\"")),
            ("errors", format!("\"{stem}.err.bin\"")),
            ("max_error", num(max_err)),
        ]);
        if engine == Engine::Spectral {
            entries.push(("spectral_side", num(cfg.spectral.side)));
            entries.push(("spectral_resolution", cfg.spectral.resolution.to_string()));
        }
        files.push(OutFile { name: format!("{stem}.bin"), bytes: grid_bytes(spec.counts(), comps, &values) });
        files.push(OutFile { name: format!("{stem}.err.bin"), bytes: grid_bytes(spec.counts(), 1, &errors) });
        files.push(OutFile { name: format!("{stem}.hdr"), bytes: grid_sidecar(&header, &entries) });
        summary.push(format!(
            "{} {} on {} points ({} components), max error estimate {:.3e}",
            engine.as_str(),
            op.operator.as_str(),
            pts.len(),
            comps,
            max_err
        ));
    }
    Ok(Outcome { files, summary, failed: false })
}

fn report_row(r: &VerifyReport) -> Vec<String> {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    vec![
        r.name.clone(),
        r.pass.to_string(),
        num(r.lhs),
        num(r.rhs),
        num(r.abs_err),
        num(r.rel_err),
        num(r.est_err),
        r.criterion.clone(),
        num(r.tolerance),
        r.bound_by.clone(),
        format!("{:.3}", r.seconds),
        params.join(";"),
        r.notes.join(";"),
    ]
}

fn run_verify(ctx: &Context) -> Result<Outcome, CliError> {
    let vc = ctx.verify_config();
    let filter = &ctx.cfg.verify.as_ref().expect("normalised").filter;
    let mut jobs = default_suite(&vc)?;
    if !filter.is_empty() {
        jobs.retain(|j| filter.iter().any(|f| f == j.name));
    }
    let results = run_jobs(&jobs, ctx.exec);
    let mut table = Table::new(&[
        "name", "pass", "lhs", "rhs", "abs_err", "rel_err", "est_err", "criterion", "tolerance", "bound_by", "seconds",
        "params", "notes",
    ]);
    if let Some(t) = vc.tighten {
        table.meta("tighten", num(t));
    }
    let mut summary = Vec::new();
    let mut failures = 0;
    for (_, r) in results {
        let r = r?;
        if !r.pass {
            failures += 1;
        }
        summary.push(format!(
            "{} {}: lhs {:.6e} rhs {:.6e} abs {:.2e} tol {:.2e} ({})",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.lhs,
            r.rhs,
            r.abs_err,
            r.tolerance,
            r.bound_by
        ));
        table.row(report_row(&r));
    }
    table.footer("records", table.len());
    table.footer("failed", failures);
    summary.push(format!("{} records, {} failed", table.len(), failures));
    let files = vec![OutFile { name: "verify.csv".into(), bytes: table.render(&ctx.header(Kind::Verify)) }];
    Ok(Outcome { files, summary, failed: failures > 0 })
}

fn convergence_table(t: &ConvergenceTable, field: &str, alpha: f64, x: &[f64]) -> Table {
    let mut table = Table::new(&["level", "h", "value", "error", "order"]);
    table.meta("engine", &t.engine).meta("field", field).meta("alpha", num(alpha)).meta("point", list(x.iter().map(|v| num(*v))));
    for r in &t.rows {
        table.row(vec![r.level.to_string(), num(r.h), num(r.value), num(r.error), r.order.map(num).unwrap_or_default()]);
    }
    table.footer("observed_order", t.observed_order.map(num).unwrap_or_else(|| "unresolved".into()));
    table
}

fn run_convergence(ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.cfg;
    let c = cfg.convergence.as_ref().expect("validated");
    let f = fields::scalar(cfg.field("convergence.field", &c.field)?, cfg.dim)?;
    let x = to_point(&c.point);
    let header = ctx.header(Kind::Convergence);
    let mut files = Vec::new();
    let mut summary = Vec::new();
    for engine in engines(c.engine) {
        let t = match engine {
            Engine::Direct => direct_sweep(&f, c.alpha, &x, &cfg.quadrature, &c.factors)?,
            _ => spectral_sweep(&f, c.alpha, &x, cfg.spectral.side, &c.resolutions)?,
        };
        summary.push(format!(
            "{}: {} levels, observed order {}",
            t.engine,
            t.rows.len(),
            t.observed_order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "unresolved".into())
        ));
        let table = convergence_table(&t, &c.field, c.alpha, &c.point);
        files.push(OutFile { name: format!("convergence_{}.csv", engine.as_str()), bytes: table.render(&header) });
    }
    Ok(Outcome { files, summary, failed: false })
}

fn run_decay(ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.cfg;
    let d = cfg.decay.as_ref().expect("validated");
    let subject = match fields::build(cfg.field("decay.subject", &d.subject)?, cfg.dim)? {
        Built::Vector(_, Some(m)) | Built::Measure(m) => DecaySubject::Measure(m),
        Built::Vector(f, None) => DecaySubject::Smooth(f),
        Built::Scalar(_) => unreachable!("checked during validation"),
    };
    let kind = match subject {
        DecaySubject::Smooth(_) => "smooth",
        DecaySubject::Measure(_) => "measure",
    };
    let x = ctx.origin(&d.center);
    let radii = d.radii();
    let masses = decay_masses(&subject, d.alpha, &x, &radii, &ctx.verify_config())?;
    if let Some(i) = masses.iter().position(|m| !(*m > 0.0)) {
        return Err(CliError::Precondition(format!(
            "zero mass in the ball of radius {}; the log-log fit is undefined",
            radii[i]
        )));
    }
    let slope = loglog_slope(&radii, &masses);
    let params = FracParams::new(d.alpha, cfg.dim, d.p.0)?;
    let floor = params.decay_exponent();
    let mut table = Table::new(&["r", "mass", "log_r", "log_mass", "running_slope"]);
    table
        .meta("subject", format!("{} ({kind})", d.subject))
        .meta("alpha", num(d.alpha))
        .meta("p", num(d.p.0))
        .meta("center", list(x[..cfg.dim].iter().map(|v| num(*v))));
    for (k, (r, m)) in radii.iter().zip(&masses).enumerate() {
        let running = if k == 0 {
            String::new()
        } else {
            num((m / masses[k - 1]).ln() / (r / radii[k - 1]).ln())
        };
        table.row(vec![num(*r), num(*m), num(r.ln()), num(m.ln()), running]);
    }
    table.footer("fitted_slope", num(slope));
    table.footer("floor", num(floor));
    let summary = vec![format!("{kind} subject '{}': fitted slope {slope:.4}, floor n/q - alpha = {floor:.4}", d.subject)];
    let files = vec![OutFile { name: "decay.csv".into(), bytes: table.render(&ctx.header(Kind::Decay)) }];
    Ok(Outcome { files, summary, failed: false })
}

fn run_bench(ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.cfg;
    let b = cfg.bench.as_ref().expect("validated");
    let f = fields::scalar(cfg.field("bench.field", &b.field)?, cfg.dim)?;
    let pts = seeded_points(cfg.dim, b.points, b.radius, cfg.seed);
    let start = Instant::now();
    let direct = evaluate_batch(ctx.exec, &pts, |x| frac_gradient(&f, b.alpha, x, &cfg.quadrature))?;
    let t_direct = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let pf = spectral::embed(&f, cfg.spectral.side, cfg.spectral.resolution)?;
    let g = spectral::spectral_frac_gradient(&pf, b.alpha)?;
    let spec_vals = exec::map(ctx.exec, &pts, |x| g.interpolate_vector(x));
    let t_spectral = start.elapsed().as_secs_f64();
    let (mut diff, mut scale) = (0.0f64, 0.0f64);
    for (d, s) in direct.iter().zip(&spec_vals) {
        diff = diff.max(point::dist(&d.value, s));
        scale = scale.max(point::norm(s));
    }
    let gap = if scale > 0.0 { diff / scale } else { diff };
    let mut table = Table::new(&["engine", "points", "seconds", "max_rel_disagreement"]);
    table
        .meta("field", &b.field)
        .meta("alpha", num(b.alpha))
        .meta("seed", cfg.seed)
        .meta("spectral_grid", format!("{}^{} over side {}", cfg.spectral.resolution, cfg.dim, num(cfg.spectral.side)));
    for (name, t) in [("direct", t_direct), ("spectral", t_spectral)] {
        table.row(vec![name.into(), pts.len().to_string(), format!("{t:.6}"), num(gap)]);
    }
    table.footer("speedup_spectral_over_direct", format!("{:.2}", t_direct / t_spectral.max(f64::MIN_POSITIVE)));
    let summary = vec![format!(
        "{} points: direct {t_direct:.3} s, spectral {t_spectral:.3} s, max relative disagreement {gap:.3e}",
        pts.len()
    )];
    let files = vec![OutFile { name: "bench.csv".into(), bytes: table.render(&ctx.header(Kind::Bench)) }];
    Ok(Outcome { files, summary, failed: false })
}
