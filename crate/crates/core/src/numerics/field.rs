//! Scalar and vector fields on ℝⁿ with the metadata the quadrature engine
//! needs to split its integrals: support or decay, interfaces across which
//! the field is only piecewise smooth, and integrable point singularities.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::grid::GridSamples;
use super::point::{self, Point};
use crate::error::{FracError, Result};

/// Where a field lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SupportHint {
    /// Zero outside the closed ball `B_radius(center)`.
    Compact { center: Point, radius: f64 },
    /// `|f(y)| ≤ bound·|y − center|^{−exponent}` whenever `|y − center| ≥ radius`.
    /// `radius` doubles as the effective support used for periodic embedding.
    Decaying { center: Point, radius: f64, bound: f64, exponent: f64 },
    /// Nothing known.
    Unknown,
}

impl SupportHint {
    pub fn center(&self) -> Option<Point> {
        match self {
            SupportHint::Compact { center, .. } | SupportHint::Decaying { center, .. } => {
                Some(*center)
            }
            SupportHint::Unknown => None,
        }
    }

    /// Radius outside which the field is zero or decays at its declared rate.
    pub fn radius(&self) -> Option<f64> {
        match self {
            SupportHint::Compact { radius, .. } | SupportHint::Decaying { radius, .. } => {
                Some(*radius)
            }
            SupportHint::Unknown => None,
        }
    }

    /// Decay exponent; `None` for compact support (infinitely fast) and unknown.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            SupportHint::Decaying { exponent, .. } => Some(*exponent),
            _ => None,
        }
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, SupportHint::Unknown)
    }

    /// Upper bound of `|f(y)|` over `|y − x| ≥ r`, when the hint gives one.
    pub fn sup_beyond(&self, x: &Point, r: f64) -> Option<f64> {
        match *self {
            SupportHint::Compact { center, radius } => {
                if r > point::dist(x, &center) + radius {
                    Some(0.0)
                } else {
                    None
                }
            }
            SupportHint::Decaying { center, radius, bound, exponent } => {
                let d = r - point::dist(x, &center);
                if d >= radius && d > 0.0 {
                    Some(bound * d.powf(-exponent))
                } else {
                    None
                }
            }
            SupportHint::Unknown => None,
        }
    }

    /// Whether the field vanishes identically on `|y − x| ≥ r`.
    pub fn vanishes_beyond(&self, x: &Point, r: f64) -> bool {
        matches!(self, SupportHint::Compact { center, radius } if r >= point::dist(x, center) + radius)
    }

    /// Equivalent hint about another centre.
    pub fn recenter(&self, c0: &Point) -> SupportHint {
        match *self {
            SupportHint::Compact { center, radius } => SupportHint::Compact {
                center: *c0,
                radius: radius + point::dist(&center, c0),
            },
            SupportHint::Decaying { center, radius, bound, exponent } => {
                let d = point::dist(&center, c0);
                if d == 0.0 {
                    return *self;
                }
                let r0 = radius + 2.0 * d;
                // |y − c| ≥ |y − c0| − d ≥ |y − c0|·(1 − d/r0) on |y − c0| ≥ r0
                SupportHint::Decaying {
                    center: *c0,
                    radius: r0,
                    bound: bound * (1.0 - d / r0).powf(-exponent),
                    exponent,
                }
            }
            SupportHint::Unknown => SupportHint::Unknown,
        }
    }

    /// Hint for the sum `a·f + b·g` given hints for `f` and `g`.
    pub fn combine(&self, a: f64, other: &SupportHint, b: f64) -> SupportHint {
        if a == 0.0 {
            return other.scale(b);
        }
        if b == 0.0 {
            return self.scale(a);
        }
        let Some(c0) = self.center() else {
            return SupportHint::Unknown;
        };
        let lhs = self.recenter(&c0).scale(a);
        let rhs = other.recenter(&c0).scale(b);
        match (lhs, rhs) {
            (
                SupportHint::Compact { radius: r1, .. },
                SupportHint::Compact { radius: r2, .. },
            ) => SupportHint::Compact { center: c0, radius: r1.max(r2) },
            (SupportHint::Unknown, _) | (_, SupportHint::Unknown) => SupportHint::Unknown,
            (l, r) => {
                let radius = l.radius().unwrap().max(r.radius().unwrap()).max(1.0);
                let s = match (l.exponent(), r.exponent()) {
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!(),
                };
                let part = |h: &SupportHint| match *h {
                    SupportHint::Decaying { bound, exponent, .. } => {
                        bound * radius.powf(s - exponent)
                    }
                    _ => 0.0,
                };
                SupportHint::Decaying {
                    center: c0,
                    radius,
                    bound: part(&l) + part(&r),
                    exponent: s,
                }
            }
        }
    }

    /// Hint for `a·f`.
    pub fn scale(&self, a: f64) -> SupportHint {
        match *self {
            SupportHint::Decaying { center, radius, bound, exponent } => SupportHint::Decaying {
                center,
                radius,
                bound: bound * a.abs(),
                exponent,
            },
            other => other,
        }
    }
}

/// Sphere across which a field is only piecewise smooth (`width == 0`) or
/// varies on the short length scale `width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interface {
    pub center: Point,
    pub radius: f64,
    pub width: f64,
}

/// Integrable point singularity, `|f(y)| ≲ |y − at|^{−order}` with `order < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub at: Point,
    pub order: f64,
}

/// Metadata shared by scalar and vector fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMeta {
    pub dim: usize,
    pub support: SupportHint,
    pub lipschitz: Option<f64>,
    pub sup_norm: Option<f64>,
    pub interfaces: Vec<Interface>,
    pub poles: Vec<Pole>,
    pub label: String,
}

impl FieldMeta {
    fn new(dim: usize, label: &str) -> Self {
        FieldMeta {
            dim,
            support: SupportHint::Unknown,
            lipschitz: None,
            sup_norm: None,
            interfaces: Vec::new(),
            poles: Vec::new(),
            label: label.to_string(),
        }
    }

    /// Meta of `a·f + b·g`.
    fn combine(&self, a: f64, other: &FieldMeta, b: f64) -> FieldMeta {
        let mut interfaces = self.interfaces.clone();
        interfaces.extend(other.interfaces.iter().copied());
        let mut poles = self.poles.clone();
        poles.extend(other.poles.iter().copied());
        FieldMeta {
            dim: self.dim,
            support: self.support.combine(a, &other.support, b),
            lipschitz: match (self.lipschitz, other.lipschitz) {
                (Some(x), Some(y)) => Some(a.abs() * x + b.abs() * y),
                _ => None,
            },
            sup_norm: match (self.sup_norm, other.sup_norm) {
                (Some(x), Some(y)) => Some(a.abs() * x + b.abs() * y),
                _ => None,
            },
            interfaces,
            poles,
            label: format!("{a}*{}+{b}*{}", self.label, other.label),
        }
    }
}

type ScalarFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

#[derive(Clone)]
enum ScalarEval {
    Closed(ScalarFn),
    Grid(Arc<GridSamples>),
}

/// Real-valued field on ℝⁿ.
#[derive(Clone)]
pub struct ScalarField {
    eval: ScalarEval,
    meta: FieldMeta,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("meta", &self.meta).finish()
    }
}

impl ScalarField {
    /// Field given by a closed-form rule.
    pub fn closed(dim: usize, label: &str, f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField { eval: ScalarEval::Closed(Arc::new(f)), meta: FieldMeta::new(dim, label) }
    }

    /// Field given by samples with multilinear interpolation; zero outside a
    /// non-periodic grid box.
    pub fn from_grid(samples: GridSamples, label: &str) -> Self {
        let dim = samples.spec.dim();
        let mut meta = FieldMeta::new(dim, label);
        if !samples.spec.is_periodic() {
            let c = samples.spec.center();
            let radius = (0..dim).map(|i| 0.5 * samples.spec.side(i)).map(|h| h * h).sum::<f64>().sqrt();
            meta.support = SupportHint::Compact { center: c, radius };
        }
        meta.sup_norm = Some(samples.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        ScalarField { eval: ScalarEval::Grid(Arc::new(samples)), meta }
    }

    /// Constant field (no support: the operators annihilate it exactly).
    pub fn constant(dim: usize, c: f64) -> Self {
        let mut s = ScalarField::closed(dim, "constant", move |_| c);
        s.meta.lipschitz = Some(0.0);
        s.meta.sup_norm = Some(c.abs());
        s.meta.support = if c == 0.0 {
            SupportHint::Compact { center: point::ORIGIN, radius: 0.0 }
        } else {
            SupportHint::Unknown
        };
        s
    }

    pub fn with_support(mut self, support: SupportHint) -> Self {
        self.meta.support = support;
        self
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.meta.lipschitz = Some(l);
        self
    }

    pub fn with_sup_norm(mut self, s: f64) -> Self {
        self.meta.sup_norm = Some(s);
        self
    }

    pub fn with_interface(mut self, iface: Interface) -> Self {
        self.meta.interfaces.push(iface);
        self
    }

    pub fn with_pole(mut self, pole: Pole) -> Self {
        self.meta.poles.push(pole);
        self
    }

    pub fn meta(&self) -> &FieldMeta {
        &self.meta
    }

    pub fn dim(&self) -> usize {
        self.meta.dim
    }

    pub fn support(&self) -> &SupportHint {
        &self.meta.support
    }

    pub fn label(&self) -> &str {
        &self.meta.label
    }

    /// True for the exact constant produced by [`ScalarField::constant`] or
    /// any field declared with Lipschitz constant 0.
    pub fn is_constant(&self) -> bool {
        self.meta.lipschitz == Some(0.0)
    }

    #[inline]
    pub fn eval(&self, x: &Point) -> f64 {
        if let SupportHint::Compact { center, radius } = self.meta.support {
            if point::norm2(&point::sub(x, &center)) > radius * radius {
                return 0.0;
            }
        }
        match &self.eval {
            ScalarEval::Closed(f) => f(x),
            ScalarEval::Grid(g) => g.interpolate(x),
        }
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &ScalarField, b: f64) -> ScalarField {
        let (f, g) = (self.clone(), other.clone());
        let meta = self.meta.combine(a, &other.meta, b);
        ScalarField {
            eval: ScalarEval::Closed(Arc::new(move |x| a * f.eval(x) + b * g.eval(x))),
            meta,
        }
    }

    /// `x ↦ self(λ·x)`.
    pub fn dilate(&self, lambda: f64) -> ScalarField {
        let f = self.clone();
        let mut meta = self.meta.clone();
        meta.support = match self.meta.support {
            SupportHint::Compact { center, radius } => SupportHint::Compact {
                center: point::scale(&center, 1.0 / lambda),
                radius: radius / lambda,
            },
            SupportHint::Decaying { center, radius, bound, exponent } => SupportHint::Decaying {
                center: point::scale(&center, 1.0 / lambda),
                radius: radius / lambda,
                bound: bound * lambda.powf(-exponent),
                exponent,
            },
            SupportHint::Unknown => SupportHint::Unknown,
        };
        meta.lipschitz = meta.lipschitz.map(|l| l * lambda);
        for iface in &mut meta.interfaces {
            iface.center = point::scale(&iface.center, 1.0 / lambda);
            iface.radius /= lambda;
            iface.width /= lambda;
        }
        for pole in &mut meta.poles {
            pole.at = point::scale(&pole.at, 1.0 / lambda);
        }
        meta.label = format!("{}(λ={lambda})", meta.label);
        ScalarField {
            eval: ScalarEval::Closed(Arc::new(move |x| f.eval(&point::scale(x, lambda)))),
            meta,
        }
    }

    /// `x ↦ self(x − v)`.
    pub fn translate(&self, v: &Point) -> ScalarField {
        let f = self.clone();
        let v = *v;
        let mut meta = self.meta.clone();
        meta.support = match self.meta.support {
            SupportHint::Compact { center, radius } => {
                SupportHint::Compact { center: point::add(&center, &v), radius }
            }
            SupportHint::Decaying { center, radius, bound, exponent } => SupportHint::Decaying {
                center: point::add(&center, &v),
                radius,
                bound,
                exponent,
            },
            SupportHint::Unknown => SupportHint::Unknown,
        };
        for iface in &mut meta.interfaces {
            iface.center = point::add(&iface.center, &v);
        }
        for pole in &mut meta.poles {
            pole.at = point::add(&pole.at, &v);
        }
        ScalarField {
            eval: ScalarEval::Closed(Arc::new(move |x| f.eval(&point::sub(x, &v)))),
            meta,
        }
    }

    /// Pointwise product, keeping the better of the two support hints.
    pub fn product(&self, other: &ScalarField) -> ScalarField {
        let (f, g) = (self.clone(), other.clone());
        let mut meta = self.meta.combine(1.0, &other.meta, 1.0);
        meta.support = product_support(&self.meta, &other.meta);
        meta.lipschitz = match (self.meta.lipschitz, self.meta.sup_norm, other.meta.lipschitz, other.meta.sup_norm) {
            (Some(l1), Some(s1), Some(l2), Some(s2)) => Some(l1 * s2 + l2 * s1),
            _ => None,
        };
        meta.sup_norm = match (self.meta.sup_norm, other.meta.sup_norm) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        meta.label = format!("{}*{}", self.label(), other.label());
        ScalarField {
            eval: ScalarEval::Closed(Arc::new(move |x| f.eval(x) * g.eval(x))),
            meta,
        }
    }
}

fn product_support(a: &FieldMeta, b: &FieldMeta) -> SupportHint {
    let bounded = |m: &FieldMeta| m.sup_norm.is_some() || m.lipschitz == Some(0.0);
    match (&a.support, &b.support) {
        (SupportHint::Compact { .. }, _) => a.support,
        (_, SupportHint::Compact { .. }) => b.support,
        (SupportHint::Decaying { .. }, _) if bounded(b) => a.support.scale(b.sup_norm.unwrap_or(1.0)),
        (_, SupportHint::Decaying { .. }) if bounded(a) => b.support.scale(a.sup_norm.unwrap_or(1.0)),
        _ => SupportHint::Unknown,
    }
}

#[derive(Clone)]
enum VectorEval {
    Closed(VectorFn),
    Components(Vec<ScalarField>),
}

/// ℝⁿ-valued field on ℝⁿ; unused trailing components are zero.
#[derive(Clone)]
pub struct VectorField {
    eval: VectorEval,
    meta: FieldMeta,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField").field("meta", &self.meta).finish()
    }
}

impl VectorField {
    pub fn closed(dim: usize, label: &str, f: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        VectorField { eval: VectorEval::Closed(Arc::new(f)), meta: FieldMeta::new(dim, label) }
    }

    /// Field assembled from `n` scalar components. All components must
    /// agree on dimension; the hints are merged.
    pub fn from_components(components: Vec<ScalarField>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(FracError::config("vector field needs at least one component"));
        };
        let dim = first.dim();
        if components.len() != dim || components.iter().any(|c| c.dim() != dim) {
            return Err(FracError::config(format!(
                "vector field in dimension {dim} needs {dim} components of that dimension"
            )));
        }
        let mut meta = first.meta.clone();
        for c in &components[1..] {
            meta = meta.combine(1.0, &c.meta, 1.0);
        }
        meta.label = components.iter().map(|c| c.label()).collect::<Vec<_>>().join(",");
        Ok(VectorField { eval: VectorEval::Components(components), meta })
    }

    /// `g(x)·v` for a fixed vector `v`.
    pub fn scalar_times_vector(g: &ScalarField, v: Point) -> Self {
        let g2 = g.clone();
        let mut meta = g.meta.clone();
        let vn = point::norm(&v);
        meta.support = g.meta.support.scale(vn);
        meta.lipschitz = meta.lipschitz.map(|l| l * vn);
        meta.sup_norm = meta.sup_norm.map(|s| s * vn);
        meta.label = format!("{}*v", g.label());
        VectorField {
            eval: VectorEval::Closed(Arc::new(move |x| point::scale(&v, g2.eval(x)))),
            meta,
        }
    }

    pub fn constant(dim: usize, v: Point) -> Self {
        let mut f = VectorField::closed(dim, "constant", move |_| v);
        f.meta.lipschitz = Some(0.0);
        f.meta.sup_norm = Some(point::norm(&v));
        if point::norm(&v) == 0.0 {
            f.meta.support = SupportHint::Compact { center: point::ORIGIN, radius: 0.0 };
        }
        f
    }

    pub fn with_support(mut self, support: SupportHint) -> Self {
        self.meta.support = support;
        self
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.meta.lipschitz = Some(l);
        self
    }

    pub fn with_sup_norm(mut self, s: f64) -> Self {
        self.meta.sup_norm = Some(s);
        self
    }

    pub fn with_interface(mut self, iface: Interface) -> Self {
        self.meta.interfaces.push(iface);
        self
    }

    pub fn with_pole(mut self, pole: Pole) -> Self {
        self.meta.poles.push(pole);
        self
    }

    pub fn meta(&self) -> &FieldMeta {
        &self.meta
    }

    pub fn dim(&self) -> usize {
        self.meta.dim
    }

    pub fn support(&self) -> &SupportHint {
        &self.meta.support
    }

    pub fn label(&self) -> &str {
        &self.meta.label
    }

    pub fn is_constant(&self) -> bool {
        self.meta.lipschitz == Some(0.0)
    }

    #[inline]
    pub fn eval(&self, x: &Point) -> Point {
        if let SupportHint::Compact { center, radius } = self.meta.support {
            if point::norm2(&point::sub(x, &center)) > radius * radius {
                return [0.0; 3];
            }
        }
        match &self.eval {
            VectorEval::Closed(f) => f(x),
            VectorEval::Components(cs) => {
                let mut out = [0.0; 3];
                for (o, c) in out.iter_mut().zip(cs) {
                    *o = c.eval(x);
                }
                out
            }
        }
    }

    /// Scalar component `i` sharing this field's metadata.
    pub fn component(&self, i: usize) -> ScalarField {
        let f = self.clone();
        let mut meta = self.meta.clone();
        meta.label = format!("{}[{i}]", self.meta.label);
        ScalarField { eval: ScalarEval::Closed(Arc::new(move |x| f.eval(x)[i])), meta }
    }

    /// `g·F`.
    pub fn times_scalar(&self, g: &ScalarField) -> VectorField {
        let (f, g2) = (self.clone(), g.clone());
        let mut meta = self.meta.combine(1.0, &g.meta, 1.0);
        meta.support = product_support(&self.meta, &g.meta);
        meta.lipschitz = match (self.meta.lipschitz, self.meta.sup_norm, g.meta.lipschitz, g.meta.sup_norm) {
            (Some(l1), Some(s1), Some(l2), Some(s2)) => Some(l1 * s2 + l2 * s1),
            _ => None,
        };
        meta.sup_norm = match (self.meta.sup_norm, g.meta.sup_norm) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        meta.label = format!("{}*{}", g.label(), self.label());
        VectorField {
            eval: VectorEval::Closed(Arc::new(move |x| point::scale(&f.eval(x), g2.eval(x)))),
            meta,
        }
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &VectorField, b: f64) -> VectorField {
        let (f, g) = (self.clone(), other.clone());
        let meta = self.meta.combine(a, &other.meta, b);
        VectorField {
            eval: VectorEval::Closed(Arc::new(move |x| {
                let (u, v) = (f.eval(x), g.eval(x));
                [a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]]
            })),
            meta,
        }
    }
}
