//! Executable checks of the integration-by-parts, Leibniz, decay and
//! total-mass identities, each producing a [`VerifyReport`].
//!
//! Every report's pass flag follows from its recorded numbers and its
//! [`Criterion`]; the default criterion is `max(1e-3, 5 × error estimate)`.

mod checks;
mod identities;
mod report;

pub use checks::{
    check_ball_ibp, check_cantor_scaling, check_div_relation, check_duality, check_global_ibp, check_leibniz_pointwise,
    check_mollification, check_nl_l1_bound, check_zero_mass_nl, check_zero_total, decay_masses, decay_scan, DecaySubject,
    DivSubject,
};
pub use identities::{
    check_engine_agreement, check_riesz_semigroup, check_riesz_semigroup_direct, check_riesz_squares,
    check_symbol_factorization, engine_disagreement,
};
pub use report::{params, Criterion, VerifyReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{CompactBump, DeltaPairField, GaussianBump};
use crate::error::Result;
use crate::exec::{self, Execution};
use crate::numerics::grid::GridSpec;
use crate::numerics::point::Point;
use crate::quadrature::QuadratureConfig;
use crate::spectral::{self, PeriodicField};

/// Resolution settings shared by the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Operator evaluations (inner integrals).
    pub inner: QuadratureConfig,
    /// Whole-space and ball integrals of operator outputs.
    pub outer: QuadratureConfig,
    pub exec: Execution,
    /// Periodic box used for spectral densities.
    pub spectral_side: f64,
    pub spectral_resolution: usize,
    /// Gauss order per panel of the indicator-gradient surface integral.
    pub chi_nodes: usize,
    /// Replace every tolerance by this value (forced-failure runs).
    pub tighten: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            inner: QuadratureConfig { angular_nodes: 24, mid_panels: 10, ..QuadratureConfig::default() },
            outer: QuadratureConfig { angular_nodes: 24, mid_panels: 8, ..QuadratureConfig::default() },
            exec: Execution::Parallel,
            spectral_side: 16.0,
            spectral_resolution: 256,
            chi_nodes: 16,
            tighten: None,
        }
    }
}

/// A named, deferred check.
pub struct Job<'a> {
    pub name: &'static str,
    run: Box<dyn Fn() -> Result<VerifyReport> + Send + Sync + 'a>,
}

impl<'a> Job<'a> {
    pub fn new(name: &'static str, run: impl Fn() -> Result<VerifyReport> + Send + Sync + 'a) -> Self {
        Job { name, run: Box::new(run) }
    }

    pub fn run(&self) -> Result<VerifyReport> {
        (self.run)()
    }
}

/// Run jobs concurrently; results come back ordered by identity name, ties
/// in submission order.
pub fn run_jobs(jobs: &[Job<'_>], execution: Execution) -> Vec<(&'static str, Result<VerifyReport>)> {
    let mut out: Vec<(usize, &'static str, Result<VerifyReport>)> =
        exec::map_range(execution, jobs.len(), |i| (i, jobs[i].name, jobs[i].run()));
    out.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
    out.into_iter().map(|(_, n, r)| (n, r)).collect()
}

/// `count` points in the disc/ball of radius `radius`, from a fixed seed.
pub fn seeded_points(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut p = [0.0; 3];
        for c in p.iter_mut().take(dim) {
            *c = rng.gen_range(-radius..radius);
        }
        if p.iter().map(|c| c * c).sum::<f64>() <= radius * radius {
            out.push(p);
        }
    }
    out
}

/// Mean-zero trigonometric polynomial with `modes` random low modes.
pub fn band_limited(dim: usize, side: f64, resolution: usize, modes: usize, seed: u64) -> Result<PeriodicField> {
    let spec = GridSpec::cube(dim, &[0.0; 3], side, resolution, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kmax = (resolution / 4).max(1) as i64;
    let terms: Vec<([f64; 3], f64, f64)> = (0..modes)
        .map(|_| {
            let mut k = [0.0; 3];
            loop {
                for c in k.iter_mut().take(dim) {
                    *c = rng.gen_range(-kmax..=kmax) as f64;
                }
                if k.iter().any(|c| *c != 0.0) {
                    break;
                }
            }
            (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    let w = std::f64::consts::TAU / side;
    PeriodicField::sample(spec, |x| {
        terms
            .iter()
            .map(|(k, a, ph)| a * (w * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) + ph).cos())
            .sum()
    })
}

/// The default desk-scale suite in dimension 2 (22 checks).
pub fn default_suite(cfg: &VerifyConfig) -> Result<Vec<Job<'_>>> {
    let dim = 2;
    let pair = DeltaPairField::new(dim, [0.3, 0.1, 0.0], [-0.4, 0.2, 0.0], 0.6)?;
    let xi = GaussianBump::new(dim, [0.1, 0.0, 0.0], 1.0, 1.0)?;
    let g = GaussianBump::new(dim, [0.2, -0.1, 0.0], 1.2, 1.0)?;
    let fgauss = GaussianBump::new(dim, [-0.1, 0.15, 0.0], 0.9, 1.0)?;
    let f = fgauss.vector_field([0.6, -0.8, 0.0]);
    let bump = CompactBump::new(dim, [0.2, 0.1, 0.0], 1.5, 1.0)?;
    let points = seeded_points(dim, 10, 1.2, 7);
    let pf = spectral::embed(&g.field(), cfg.spectral_side, cfg.spectral_resolution)?;
    let band = band_limited(dim, 2.0 * std::f64::consts::PI, 64, 12, 11)?;
    let mut jobs = Vec::new();
    {
        let (pair, xi) = (pair.clone(), xi.field());
        jobs.push(Job::new("duality", move || check_duality(&DivSubject::delta_pair(&pair), &xi, 0.6, cfg)));
    }
    {
        let (f, b) = (f.clone(), bump.field());
        jobs.push(Job::new("duality", move || check_duality(&DivSubject::Smooth(f.clone()), &b, 0.5, cfg)));
    }
    {
        let (g, f, pts) = (g.field(), f.clone(), points.clone());
        jobs.push(Job::new("leibniz_pointwise", move || check_leibniz_pointwise(&g, &f, 0.5, &pts, cfg)));
    }
    {
        let (g, f) = (g.field(), f.clone());
        jobs.push(Job::new("zero_mass_nl", move || check_zero_mass_nl(&g, &f, 0.5, cfg)));
    }
    {
        let (g, f) = (g.field(), f.clone());
        jobs.push(Job::new("global_ibp", move || check_global_ibp(&g, &DivSubject::Smooth(f.clone()), 0.5, cfg)));
    }
    {
        let (g, pair) = (g.field(), pair.clone());
        jobs.push(Job::new("global_ibp", move || check_global_ibp(&g, &DivSubject::delta_pair(&pair), 0.6, cfg)));
    }
    {
        let (g, f) = (g.field(), f.clone());
        jobs.push(Job::new("nl_l1_bound", move || check_nl_l1_bound(&g, &f, 0.5, 2.0, cfg)));
    }
    for r in [0.8, 1.0, 1.3] {
        let (f, xi) = (f.clone(), xi.field());
        jobs.push(Job::new("ball_ibp", move || check_ball_ibp(&DivSubject::Smooth(f.clone()), &xi, &[0.0; 3], r, 0.5, cfg)));
    }
    {
        let pair = pair.clone();
        let (y, z) = pair.poles();
        let pts = vec![y, z, [0.0, 0.0, 0.0], [0.45, 0.3, 0.0], [1.5, -1.0, 0.0]];
        jobs.push(Job::new("mollification", move || check_mollification(&pair, 0.3, &pts, cfg)));
    }
    {
        let f = f.clone();
        let radii: Vec<f64> = (0..6).map(|k| 0.05 * 1.5f64.powi(k)).collect();
        jobs.push(Job::new("decay_scan", move || {
            decay_scan(&DecaySubject::Smooth(f.clone()), dim, 0.5, f64::INFINITY, &[0.3, 0.2, 0.0], &radii, cfg)
        }));
    }
    {
        let pair = pair.clone();
        let radii: Vec<f64> = (0..6).map(|k| 0.01 * 1.5f64.powi(k)).collect();
        jobs.push(Job::new("decay_scan", move || {
            let (y, _) = pair.poles();
            decay_scan(&DecaySubject::Measure(pair.divergence_measure()), dim, 0.6, 1.0, &y, &radii, cfg)
        }));
    }
    {
        let second = GaussianBump::new(dim, [0.7, -0.4, 0.0], 0.7, 1.5)?.vector_field([0.2, 0.9, 0.0]);
        let f = f.linear_combination(1.0, &second, 1.0);
        jobs.push(Job::new("zero_total", move || check_zero_total(&DivSubject::Smooth(f.clone()), 0.6, cfg)));
    }
    {
        let pair = pair.clone();
        jobs.push(Job::new("zero_total", move || check_zero_total(&DivSubject::delta_pair(&pair), 0.6, cfg)));
    }
    {
        let (f, phi) = (f.clone(), xi.field());
        jobs.push(Job::new("div_relation", move || check_div_relation(&f, 0.5, &phi, cfg)));
    }
    jobs.push(Job::new("cantor_scaling", move || check_cantor_scaling(10, 1, cfg)));
    {
        let pf = pf.clone();
        jobs.push(Job::new("riesz_semigroup", move || check_riesz_semigroup(&pf, 0.3, 0.4, cfg)));
    }
    {
        let pts = seeded_points(dim, 4, 1.0, 13);
        jobs.push(Job::new("riesz_semigroup", move || check_riesz_semigroup_direct(&g, 0.3, 0.4, &pts, cfg)));
    }
    {
        let pf = pf.clone();
        jobs.push(Job::new("symbol_factorization", move || check_symbol_factorization(&pf, 0.6, cfg)));
    }
    jobs.push(Job::new("riesz_squares", move || check_riesz_squares(&band, cfg)));
    {
        let (gf, pts) = (g.field(), seeded_points(dim, 10, 1.5, 17));
        jobs.push(Job::new("engine_agreement", move || check_engine_agreement(&gf, 0.6, &pts, cfg)));
    }
    Ok(jobs)
}
