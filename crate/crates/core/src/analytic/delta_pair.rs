//! Fields whose fractional divergence is purely atomic: the pair field
//! F_{y,z,α} with div^α F = δ_y − δ_z, its convolutions with atomic
//! measures, and its mollification.

use std::sync::Arc;

use crate::error::{FracError, Result};
use crate::numerics::field::{Interface, Pole, SupportHint, VectorField};
use crate::numerics::measure::RadonMeasure;
use crate::numerics::point::{self, Point};
use crate::numerics::smooth::Mollifier;
use crate::numerics::gauss::GaussRule;
use crate::numerics::special::{check_dim, mu_const, sphere_area};
use crate::quadrature::radial::RadialSpec;
use crate::quadrature::sphere::SphereRule;
use crate::quadrature::{polar_integral, QuadratureConfig};

/// Range of Lebesgue exponents p with F ∈ L^p: `[lo, hi)` or `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpRange {
    pub lo: f64,
    pub hi: f64,
    pub lo_included: bool,
}

impl LpRange {
    pub fn contains(&self, p: f64) -> bool {
        p < self.hi && (p > self.lo || (self.lo_included && p == self.lo))
    }
}

/// Kernel K(w) = c·w/|w|^{n+1−α} with c = μ_{n,−α} (1/|S^{n−1}| at α = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
struct PairKernel {
    dim: usize,
    alpha: f64,
    c: f64,
}

impl PairKernel {
    fn new(dim: usize, alpha: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(FracError::domain(format!("order must lie in (0, 1], got {alpha}")));
        }
        let c = if alpha == 1.0 { 1.0 / sphere_area(dim) } else { mu_const(dim, -alpha)? };
        Ok(PairKernel { dim, alpha, c })
    }

    #[inline]
    fn eval(&self, w: &Point) -> Point {
        let r2 = point::norm2(w);
        let e = -(self.dim as f64 + 1.0 - self.alpha) / 2.0;
        point::scale(w, self.c * r2.powf(e))
    }

    fn pole_order(&self) -> f64 {
        self.dim as f64 - self.alpha
    }

    /// Decay hint for K(· − y) − K(· − z).
    fn dipole_hint(&self, y: &Point, z: &Point) -> SupportHint {
        let n = self.dim as f64;
        let center = point::scale(&point::add(y, z), 0.5);
        let sep = point::dist(y, z);
        let s = n + 1.0 - self.alpha;
        // |∇K(w)| ≤ c(n + 2 − α)|w|^{−s}, and |w| ≥ ¾|x − center| beyond 2·sep
        SupportHint::Decaying {
            center,
            radius: (2.0 * sep).max(1e-3),
            bound: self.c * (n + 2.0 - self.alpha) * sep * (4.0f64 / 3.0).powf(s),
            exponent: s,
        }
    }
}

/// F_{y,z,α}(x) = μ_{n,−α}[(x−y)/|x−y|^{n+1−α} − (x−z)/|x−z|^{n+1−α}].
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPairField {
    y: Point,
    z: Point,
    kernel: PairKernel,
}

impl DeltaPairField {
    pub fn new(dim: usize, y: Point, z: Point, alpha: f64) -> Result<Self> {
        let kernel = PairKernel::new(dim, alpha)?;
        if y == z {
            return Err(FracError::domain("delta pair needs distinct poles"));
        }
        Ok(DeltaPairField { y, z, kernel })
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim
    }

    pub fn alpha(&self) -> f64 {
        self.kernel.alpha
    }

    pub fn poles(&self) -> (Point, Point) {
        (self.y, self.z)
    }

    /// The normalising constant in front of the bracket.
    pub fn constant(&self) -> f64 {
        self.kernel.c
    }

    pub fn swapped(&self) -> Self {
        DeltaPairField { y: self.z, z: self.y, kernel: self.kernel }
    }

    /// Value at `x`; infinite or NaN at the poles.
    pub fn eval(&self, x: &Point) -> Point {
        point::sub(&self.kernel.eval(&point::sub(x, &self.y)), &self.kernel.eval(&point::sub(x, &self.z)))
    }

    pub fn field(&self) -> VectorField {
        let me = self.clone();
        let order = self.kernel.pole_order();
        VectorField::closed(self.dim(), "delta-pair", move |x| me.eval(x))
            .with_support(self.kernel.dipole_hint(&self.y, &self.z))
            .with_pole(Pole { at: self.y, order })
            .with_pole(Pole { at: self.z, order })
    }

    /// δ_y − δ_z.
    pub fn divergence_measure(&self) -> RadonMeasure {
        RadonMeasure::dipole(self.dim(), self.y, self.z).expect("distinct poles")
    }

    /// Exponents p with F ∈ L^p.
    pub fn lp_range(&self) -> LpRange {
        let n = self.dim() as f64;
        let a = self.alpha();
        if a < 1.0 {
            LpRange { lo: 1.0, hi: n / (n - a), lo_included: true }
        } else {
            LpRange { lo: 1.0, hi: if self.dim() == 1 { f64::INFINITY } else { n / (n - 1.0) }, lo_included: false }
        }
    }
}

/// G_α = F_{0,e₁,α} ∗ ν for an atomic measure ν.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolvedField {
    atoms: Vec<(Point, f64)>,
    shift: Point,
    kernel: PairKernel,
}

impl ConvolvedField {
    pub fn new(nu: &RadonMeasure, alpha: f64) -> Result<Self> {
        if nu.density().is_some() {
            return Err(FracError::domain("convolved fields take purely atomic measures"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(FracError::domain(format!("order must lie in (0, 1), got {alpha}")));
        }
        let kernel = PairKernel::new(nu.dim(), alpha)?;
        Ok(ConvolvedField { atoms: nu.atoms().to_vec(), shift: point::E1, kernel })
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim
    }

    pub fn alpha(&self) -> f64 {
        self.kernel.alpha
    }

    pub fn atoms(&self) -> &[(Point, f64)] {
        &self.atoms
    }

    pub fn eval(&self, x: &Point) -> Point {
        let mut out = [0.0; 3];
        for (y, w) in &self.atoms {
            let z = point::add(y, &self.shift);
            let v = point::sub(&self.kernel.eval(&point::sub(x, y)), &self.kernel.eval(&point::sub(x, &z)));
            out = point::axpy(&out, *w, &v);
        }
        out
    }

    pub fn field(&self) -> VectorField {
        let dim = self.dim();
        if self.atoms.is_empty() {
            return VectorField::constant(dim, [0.0; 3]);
        }
        let mut support: Option<SupportHint> = None;
        let mut poles: Vec<Pole> = Vec::new();
        let order = self.kernel.pole_order();
        for (y, w) in &self.atoms {
            let z = point::add(y, &self.shift);
            let h = self.kernel.dipole_hint(y, &z).scale(*w);
            support = Some(match support {
                None => h,
                Some(s) => s.combine(1.0, &h, 1.0),
            });
            for p in [*y, z] {
                if !poles.iter().any(|q| q.at == p) {
                    poles.push(Pole { at: p, order });
                }
            }
        }
        let me = self.clone();
        let mut f = VectorField::closed(dim, "convolved", move |x| me.eval(x)).with_support(support.unwrap());
        for p in poles {
            f = f.with_pole(p);
        }
        f
    }

    /// ν − (τ_{e₁})_#ν = Σ wᵢ(δ_{yᵢ} − δ_{yᵢ+e₁}), coinciding atoms merged.
    pub fn divergence_measure(&self) -> RadonMeasure {
        let mut atoms: Vec<(Point, f64)> = Vec::new();
        let mut push = |p: Point, w: f64| {
            if let Some(a) = atoms.iter_mut().find(|a| a.0 == p) {
                a.1 += w;
            } else {
                atoms.push((p, w));
            }
        };
        for (y, w) in &self.atoms {
            push(*y, *w);
            push(point::add(y, &self.shift), -*w);
        }
        RadonMeasure::from_atoms(self.dim(), atoms).expect("merged atoms are distinct")
    }
}

/// κ(s) for s ≥ 2ε as ∫_{B_ε} ρ_ε(w) K₁(s e₁ − w) dw, with a smooth integrand.
fn ball_profile(kernel: &PairKernel, m: &Mollifier, s: f64) -> f64 {
    let eps = m.eps();
    let rule = GaussRule::new(12);
    let sphere = SphereRule::full(kernel.dim, 64);
    let x = point::scale(&point::E1, s);
    let panels = 4;
    let mut acc = 0.0;
    for p in 0..panels {
        let (a, b) = (eps * p as f64 / panels as f64, eps * (p + 1) as f64 / panels as f64);
        for (t, wt) in rule.on(a, b) {
            let jac = wt * t.powi(kernel.dim as i32 - 1);
            for (theta, wd) in sphere.dirs.iter().zip(&sphere.weights) {
                let w = point::scale(theta, t);
                acc += jac * wd * m.eval(&w) * kernel.eval(&point::sub(&x, &w))[0];
            }
        }
    }
    acc
}

/// Radial profile κ(s) with (ρ_ε ∗ K)(x) = κ(|x|)·x/|x|, tabulated on a
/// uniform grid near the origin and a geometric grid further out.
#[derive(Debug)]
struct RadialTable {
    s: Vec<f64>,
    v: Vec<f64>,
    s_max: f64,
}

impl RadialTable {
    fn interpolate(&self, s: f64) -> f64 {
        let k = self.s.partition_point(|&t| t <= s).clamp(2, self.s.len() - 2);
        let idx = [k - 2, k - 1, k, k + 1];
        let mut out = 0.0;
        for &i in &idx {
            let mut l = 1.0;
            for &j in &idx {
                if j != i {
                    l *= (s - self.s[j]) / (self.s[i] - self.s[j]);
                }
            }
            out += l * self.v[i];
        }
        out
    }
}

/// ρ_ε ∗ F_{y,z,α}, whose fractional divergence is ρ_ε(· − y) − ρ_ε(· − z).
#[derive(Debug, Clone)]
pub struct MollifiedDeltaPair {
    pair: DeltaPairField,
    mollifier: Mollifier,
    table: Arc<RadialTable>,
}

impl MollifiedDeltaPair {
    pub fn new(pair: &DeltaPairField, eps: f64) -> Result<Self> {
        let dim = pair.dim();
        let mollifier = Mollifier::new(dim, eps)?;
        let alpha = pair.alpha();
        let cfg = QuadratureConfig { near_radius: eps / 8.0, ..QuadratureConfig::default() }.without_estimate();
        let mut s = Vec::new();
        let uniform = 480;
        for k in 0..=uniform {
            s.push(3.0 * eps * k as f64 / uniform as f64);
        }
        let s_max = 400.0 * eps;
        let geo = 360;
        let q = (s_max / (3.0 * eps)).powf(1.0 / geo as f64);
        for k in 1..=geo {
            s.push(3.0 * eps * q.powi(k));
        }
        let m = mollifier.clone();
        let v = s
            .iter()
            .map(|&sv| {
                if sv == 0.0 {
                    return 0.0;
                }
                if sv >= 2.0 * eps {
                    return ball_profile(&pair.kernel, &m, sv);
                }
                let x = point::scale(&point::E1, sv);
                let spec = RadialSpec { gamma: alpha, delta: (eps / 8.0).min(sv + eps), r_max: sv + eps, far_kappa: None };
                let edge = [Interface { center: x, radius: eps, width: eps / 16.0 }];
                // ∫ t^{α−1} ∫_S ρ_ε(x − tθ) θ₁ dθ dt
                polar_integral(&cfg, dim, &point::ORIGIN, spec, &edge, false, pair.constant(), |theta, t| {
                    m.eval(&point::axpy(&x, -t, theta)) * theta[0]
                })
                .value
            })
            .collect();
        Ok(MollifiedDeltaPair { pair: pair.clone(), mollifier, table: Arc::new(RadialTable { s, v, s_max }) })
    }

    pub fn eps(&self) -> f64 {
        self.mollifier.eps()
    }

    pub fn pair(&self) -> &DeltaPairField {
        &self.pair
    }

    fn radial(&self, w: &Point) -> Point {
        let r = point::norm(w);
        if r == 0.0 {
            return [0.0; 3];
        }
        if r >= self.table.s_max {
            return self.pair.kernel.eval(w);
        }
        point::scale(w, self.table.interpolate(r) / r)
    }

    pub fn eval(&self, x: &Point) -> Point {
        let (y, z) = self.pair.poles();
        point::sub(&self.radial(&point::sub(x, &y)), &self.radial(&point::sub(x, &z)))
    }

    pub fn field(&self) -> VectorField {
        let me = self.clone();
        let (y, z) = self.pair.poles();
        let eps = self.eps();
        let mut support = self.pair.kernel.dipole_hint(&y, &z);
        if let SupportHint::Decaying { radius, .. } = &mut support {
            *radius = radius.max(eps * 2.0 + point::dist(&y, &z));
        }
        VectorField::closed(self.pair.dim(), "mollified-delta-pair", move |x| me.eval(x))
            .with_support(support)
            .with_interface(Interface { center: y, radius: eps, width: eps / 4.0 })
            .with_interface(Interface { center: z, radius: eps, width: eps / 4.0 })
    }

    /// ρ_ε(x − y) − ρ_ε(x − z).
    pub fn divergence_density(&self, x: &Point) -> f64 {
        let (y, z) = self.pair.poles();
        self.mollifier.eval(&point::sub(x, &y)) - self.mollifier.eval(&point::sub(x, &z))
    }
}
