//! Fourier-multiplier versions of ∇^α, div^α, I_β and the Riesz transform on
//! periodic boxes, plus the embedding of smooth decaying fields into a box.
//!
//! Frequencies are k = m/L with m the signed mode index; symbols use the
//! angular form ω = 2πk. The zero mode is always set to 0. For odd symbols
//! (i·ω_j…) the Nyquist mode of axis j is dropped so outputs of real inputs
//! stay real.

mod fft;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::numerics::field::{FieldMeta, ScalarField, VectorField};
use crate::numerics::gauss::GaussRule;
use crate::numerics::grid::{GridSamples, GridSpec};
use crate::numerics::point::{self, Point};
use crate::quadrature::sphere::SphereRule;

/// Distance kept between an embedded field's support and the box faces.
pub const EMBED_MARGIN: f64 = 2.0;

/// Samples of a scalar (one component) or vector (n components) field on a
/// periodic grid with power-of-two counts.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    spec: GridSpec,
    components: Vec<Vec<f64>>,
    warnings: Vec<String>,
}

fn check_spec(spec: &GridSpec) -> Result<()> {
    if !spec.is_periodic() {
        return Err(FracError::config("spectral grids must be periodic"));
    }
    for (i, &c) in spec.counts().iter().enumerate() {
        if !c.is_power_of_two() {
            return Err(FracError::config(format!("axis {i}: spectral grids need power-of-two counts, got {c}")));
        }
    }
    Ok(())
}

impl PeriodicField {
    pub fn new(spec: GridSpec, components: Vec<Vec<f64>>) -> Result<Self> {
        check_spec(&spec)?;
        if components.len() != 1 && components.len() != spec.dim() {
            return Err(FracError::config(format!(
                "periodic field needs 1 or {} components, got {}",
                spec.dim(),
                components.len()
            )));
        }
        if components.iter().any(|c| c.len() != spec.len()) {
            return Err(FracError::config("component length differs from grid size"));
        }
        Ok(PeriodicField { spec, components, warnings: Vec::new() })
    }

    pub fn scalar(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        Self::new(spec, vec![values])
    }

    pub fn sample(spec: GridSpec, f: impl Fn(&Point) -> f64) -> Result<Self> {
        let values = spec.points().iter().map(&f).collect();
        Self::scalar(spec, values)
    }

    pub fn sample_vector(spec: GridSpec, f: impl Fn(&Point) -> Point) -> Result<Self> {
        let dim = spec.dim();
        let pts = spec.points();
        let components = (0..dim).map(|j| pts.iter().map(|p| f(p)[j]).collect()).collect();
        Self::new(spec, components)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn is_scalar(&self) -> bool {
        self.components.len() == 1
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &[f64] {
        &self.components[j]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn with_warning(mut self, w: String) -> Self {
        self.warnings.push(w);
        self
    }

    /// Σ values·cell volume (exact for band-limited periodic data).
    pub fn integral(&self, j: usize) -> f64 {
        self.components[j].iter().sum::<f64>() * self.spec.cell_volume()
    }

    /// Euclidean inner product Σ_x ⟨a(x), b(x)⟩·cell volume.
    pub fn inner(&self, other: &PeriodicField) -> Result<f64> {
        if self.spec != other.spec || self.n_components() != other.n_components() {
            return Err(FracError::config("inner product of fields on different grids"));
        }
        let mut s = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            s += a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        }
        Ok(s * self.spec.cell_volume())
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest pointwise difference to another field on the same grid.
    pub fn max_abs_diff(&self, other: &PeriodicField) -> Result<f64> {
        if self.spec != other.spec || self.n_components() != other.n_components() {
            return Err(FracError::config("comparing fields on different grids"));
        }
        let mut m: f64 = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            for (x, y) in a.iter().zip(b) {
                m = m.max((x - y).abs());
            }
        }
        Ok(m)
    }

    pub fn scaled(&self, s: f64) -> PeriodicField {
        let components = self.components.iter().map(|c| c.iter().map(|v| v * s).collect()).collect();
        PeriodicField { spec: self.spec.clone(), components, warnings: self.warnings.clone() }
    }

    pub fn to_samples(&self, j: usize) -> GridSamples {
        GridSamples { spec: self.spec.clone(), values: self.components[j].clone() }
    }

    /// Eighth-order periodic Lagrange interpolation of component `j`.
    pub fn interpolate(&self, j: usize, x: &Point) -> f64 {
        const P: usize = 8;
        let dim = self.dim();
        let mut idx = [[0usize; P]; 3];
        let mut wts = [[0.0; P]; 3];
        for a in 0..dim {
            let n = self.spec.count(a) as i64;
            let h = self.spec.spacing(a);
            let u = (x[a] - self.spec.lower(a)) / h;
            let base = u.floor() as i64 - (P as i64 / 2 - 1);
            let t = u - base as f64;
            for i in 0..P {
                idx[a][i] = (base + i as i64).rem_euclid(n) as usize;
                let mut l = 1.0;
                for k in 0..P {
                    if k != i {
                        l *= (t - k as f64) / (i as f64 - k as f64);
                    }
                }
                wts[a][i] = l;
            }
        }
        let data = &self.components[j];
        let counts = self.spec.counts();
        match dim {
            1 => (0..P).map(|i| wts[0][i] * data[idx[0][i]]).sum(),
            2 => {
                let mut s = 0.0;
                for i in 0..P {
                    let row = idx[0][i] * counts[1];
                    let mut r = 0.0;
                    for k in 0..P {
                        r += wts[1][k] * data[row + idx[1][k]];
                    }
                    s += wts[0][i] * r;
                }
                s
            }
            _ => {
                let mut s = 0.0;
                for i in 0..P {
                    for k in 0..P {
                        let row = (idx[0][i] * counts[1] + idx[1][k]) * counts[2];
                        let mut r = 0.0;
                        for l in 0..P {
                            r += wts[2][l] * data[row + idx[2][l]];
                        }
                        s += wts[0][i] * wts[1][k] * r;
                    }
                }
                s
            }
        }
    }

    pub fn interpolate_vector(&self, x: &Point) -> Point {
        let mut out = [0.0; 3];
        for (j, o) in out.iter_mut().enumerate().take(self.n_components()) {
            *o = self.interpolate(j, x);
        }
        out
    }

    /// Value at a whole-space point, which must lie inside the box.
    pub fn value_at(&self, j: usize, x: &Point) -> Result<f64> {
        for a in 0..self.dim() {
            if x[a] < self.spec.lower(a) || x[a] > self.spec.upper(a) {
                return Err(FracError::domain(format!("point {x:?} lies outside the periodic box")));
            }
        }
        Ok(self.interpolate(j, x))
    }

    /// ∫_{B_r(c)} f or ∫_{B_r(c)} |f| by polar Gauss quadrature on the interpolant.
    pub fn ball_integral(&self, j: usize, center: &Point, r: f64, absolute: bool) -> f64 {
        let dim = self.dim();
        let sphere = SphereRule::full(dim, 64);
        let rule = GaussRule::new(12);
        let panels = ((r / self.spec.spacing(0)).ceil() as usize).clamp(2, 64);
        let mut acc = 0.0;
        for (theta, wt) in sphere.dirs.iter().zip(&sphere.weights) {
            for p in 0..panels {
                let (a, b) = (r * p as f64 / panels as f64, r * (p + 1) as f64 / panels as f64);
                for (s, w) in rule.on(a, b) {
                    let v = self.interpolate(j, &point::axpy(center, s, theta));
                    acc += wt * w * s.powi(dim as i32 - 1) * if absolute { v.abs() } else { v };
                }
            }
        }
        acc
    }
}

/// The multiplier operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Multiplier {
    /// i ω |ω|^{α−1}, α ∈ [0, 1].
    FracGradient { alpha: f64 },
    /// contraction of the gradient symbol, α ∈ [0, 1].
    FracDivergence { alpha: f64 },
    /// |ω|^{−β}.
    RieszPotential { beta: f64 },
    /// i ω/|ω|.
    RieszTransform,
}

struct Modes {
    /// signed angular frequency per axis for each flat index
    omega: Vec<[f64; 3]>,
    /// whether each axis index is the Nyquist index
    nyquist: Vec<[bool; 3]>,
}

fn modes(spec: &GridSpec) -> Modes {
    let dim = spec.dim();
    let len = spec.len();
    let mut omega = Vec::with_capacity(len);
    let mut nyquist = Vec::with_capacity(len);
    for flat in 0..len {
        let idx = spec.unravel(flat);
        let mut w = [0.0; 3];
        let mut nq = [false; 3];
        for a in 0..dim {
            let n = spec.count(a);
            let m = if idx[a] < n / 2 { idx[a] as f64 } else { idx[a] as f64 - n as f64 };
            w[a] = 2.0 * std::f64::consts::PI * m / spec.side(a);
            nq[a] = idx[a] == n / 2;
        }
        omega.push(w);
        nyquist.push(nq);
    }
    Modes { omega, nyquist }
}

/// i ω_j |ω|^{α−1}, the j-th gradient symbol; zero at k = 0 and at the
/// Nyquist index of axis j.
#[inline]
fn grad_symbol(w: &[f64; 3], nq: &[bool; 3], j: usize, alpha: f64) -> Complex64 {
    let r = point::norm(w);
    if r == 0.0 || nq[j] {
        return Complex64::default();
    }
    Complex64::new(0.0, w[j] * r.powf(alpha - 1.0))
}

fn inverse_pair(a: Vec<Complex64>, b: Option<Vec<Complex64>>, counts: &[usize]) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    match b {
        Some(b) => {
            let i = Complex64::new(0.0, 1.0);
            let mut z: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + i * y).collect();
            fft::inverse(&mut z, counts);
            Ok((z.iter().map(|v| v.re).collect(), Some(z.iter().map(|v| v.im).collect())))
        }
        None => {
            let mut z = a;
            fft::inverse(&mut z, counts);
            let re_max = z.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
            let im_max = z.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
            if im_max > 1e-12 * re_max.max(1e-300) && im_max > 1e-14 {
                return Err(FracError::Precondition(format!(
                    "imaginary residue {im_max:.3e} after inverse transform (real part {re_max:.3e})"
                )));
            }
            Ok((z.iter().map(|v| v.re).collect(), None))
        }
    }
}

/// Apply a set of per-component spectra → real outputs, pairing components.
fn invert_all(spectra: Vec<Vec<Complex64>>, counts: &[usize]) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(spectra.len());
    let mut it = spectra.into_iter();
    while let Some(a) = it.next() {
        let b = it.next();
        let (ra, rb) = inverse_pair(a, b, counts)?;
        out.push(ra);
        if let Some(rb) = rb {
            out.push(rb);
        }
    }
    Ok(out)
}

fn spectra_of(f: &PeriodicField) -> Vec<Vec<Complex64>> {
    let counts = f.spec.counts();
    let mut out = Vec::new();
    let mut it = f.components.iter();
    while let Some(a) = it.next() {
        match it.next() {
            Some(b) => {
                let (fa, fb) = fft::forward_real_pair(a, b, counts);
                out.push(fa);
                out.push(fb);
            }
            None => out.push(fft::forward_real(a, counts)),
        }
    }
    out
}

/// Apply a multiplier; gradients and transforms map scalars to vectors,
/// divergences vectors to scalars, potentials act componentwise.
pub fn apply(f: &PeriodicField, m: Multiplier) -> Result<PeriodicField> {
    let spec = f.spec.clone();
    let counts = spec.counts().to_vec();
    let dim = spec.dim();
    let md = modes(&spec);
    let mut warning = None;
    let check_alpha = |alpha: f64| {
        if (0.0..=1.0).contains(&alpha) {
            Ok(())
        } else {
            Err(FracError::domain(format!("order must lie in [0, 1], got {alpha}")))
        }
    };
    let outputs = match m {
        Multiplier::FracGradient { .. } | Multiplier::RieszTransform => {
            let alpha = match m {
                Multiplier::FracGradient { alpha } => alpha,
                _ => 0.0,
            };
            check_alpha(alpha)?;
            if !f.is_scalar() {
                return Err(FracError::config("the gradient acts on scalar fields"));
            }
            let fh = spectra_of(f).remove(0);
            let spectra = (0..dim)
                .map(|j| {
                    fh.iter()
                        .enumerate()
                        .map(|(k, v)| v * grad_symbol(&md.omega[k], &md.nyquist[k], j, alpha))
                        .collect()
                })
                .collect();
            invert_all(spectra, &counts)?
        }
        Multiplier::FracDivergence { alpha } => {
            check_alpha(alpha)?;
            if f.n_components() != dim {
                return Err(FracError::config("the divergence acts on vector fields"));
            }
            let fh = spectra_of(f);
            let mut acc = vec![Complex64::default(); spec.len()];
            for (j, comp) in fh.iter().enumerate() {
                for (k, v) in comp.iter().enumerate() {
                    acc[k] += v * grad_symbol(&md.omega[k], &md.nyquist[k], j, alpha);
                }
            }
            invert_all(vec![acc], &counts)?
        }
        Multiplier::RieszPotential { beta } => {
            if !(beta > 0.0) {
                return Err(FracError::domain(format!("Riesz potential order must be positive, got {beta}")));
            }
            if beta >= dim as f64 {
                warning = Some(format!(
                    "order {beta} ≥ dimension {dim}: the whole-space potential diverges; torus multiplier computed"
                ));
            }
            let spectra = spectra_of(f)
                .into_iter()
                .map(|comp| {
                    comp.iter()
                        .enumerate()
                        .map(|(k, v)| {
                            let r = point::norm(&md.omega[k]);
                            if r == 0.0 {
                                Complex64::default()
                            } else {
                                v * r.powf(-beta)
                            }
                        })
                        .collect()
                })
                .collect();
            invert_all(spectra, &counts)?
        }
    };
    let mut out = PeriodicField::new(spec, outputs)?;
    out.warnings = f.warnings.clone();
    if let Some(w) = warning {
        out = out.with_warning(w);
    }
    Ok(out)
}

pub fn spectral_frac_gradient(f: &PeriodicField, alpha: f64) -> Result<PeriodicField> {
    apply(f, Multiplier::FracGradient { alpha })
}

pub fn spectral_frac_divergence(f: &PeriodicField, alpha: f64) -> Result<PeriodicField> {
    apply(f, Multiplier::FracDivergence { alpha })
}

pub fn spectral_riesz_potential(f: &PeriodicField, beta: f64) -> Result<PeriodicField> {
    apply(f, Multiplier::RieszPotential { beta })
}

pub fn spectral_riesz_transform(f: &PeriodicField) -> Result<PeriodicField> {
    apply(f, Multiplier::RieszTransform)
}

/// Classical gradient, the α = 1 endpoint.
pub fn spectral_gradient(f: &PeriodicField) -> Result<PeriodicField> {
    apply(f, Multiplier::FracGradient { alpha: 1.0 })
}

fn check_embeddable(meta: &FieldMeta, center: &Point, side: f64) -> Result<()> {
    if !meta.poles.is_empty() || meta.interfaces.iter().any(|i| i.width == 0.0) {
        return Err(FracError::Embedding(format!("spectral engine requires smooth field ({} is singular or discontinuous)", meta.label)));
    }
    let reach = match (meta.support.center(), meta.support.radius()) {
        (Some(c), Some(r)) => point::dist(&c, center) + r,
        _ => return Err(FracError::Embedding("spectral embedding needs a support or decay hint".into())),
    };
    if reach > side / 2.0 - EMBED_MARGIN {
        return Err(FracError::Embedding(format!(
            "support reaches {reach} from the box centre; box side {side} allows at most {} with margin {EMBED_MARGIN}",
            side / 2.0 - EMBED_MARGIN
        )));
    }
    Ok(())
}

/// Periodic cube of side `side` around `center` with `resolution` samples per axis.
pub fn periodic_box(dim: usize, center: &Point, side: f64, resolution: usize) -> Result<GridSpec> {
    let spec = GridSpec::cube(dim, center, side, resolution, true)?;
    check_spec(&spec)?;
    Ok(spec)
}

/// Sample a smooth field into a periodic cube centred at the origin.
pub fn embed(f: &ScalarField, side: f64, resolution: usize) -> Result<PeriodicField> {
    embed_at(f, &point::ORIGIN, side, resolution)
}

pub fn embed_at(f: &ScalarField, center: &Point, side: f64, resolution: usize) -> Result<PeriodicField> {
    check_embeddable(f.meta(), center, side)?;
    let spec = periodic_box(f.dim(), center, side, resolution)?;
    PeriodicField::sample(spec, |x| f.eval(x))
}

pub fn embed_vector(f: &VectorField, side: f64, resolution: usize) -> Result<PeriodicField> {
    embed_vector_at(f, &point::ORIGIN, side, resolution)
}

pub fn embed_vector_at(f: &VectorField, center: &Point, side: f64, resolution: usize) -> Result<PeriodicField> {
    check_embeddable(f.meta(), center, side)?;
    let spec = periodic_box(f.dim(), center, side, resolution)?;
    PeriodicField::sample_vector(spec, |x| f.eval(x))
}
