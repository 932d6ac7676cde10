//! Experiment configuration: TOML (or JSON) in, validated and normalised.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use fracfield::quadrature::QuadratureConfig;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Op,
    Verify,
    Convergence,
    Decay,
    Bench,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Op => "op",
            Kind::Verify => "verify",
            Kind::Convergence => "convergence",
            Kind::Decay => "decay",
            Kind::Bench => "bench",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Direct,
    Spectral,
    Both,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Direct => "direct",
            Engine::Spectral => "spectral",
            Engine::Both => "both",
        }
    }

    pub fn direct(&self) -> bool {
        matches!(self, Engine::Direct | Engine::Both)
    }

    pub fn spectral(&self) -> bool {
        matches!(self, Engine::Spectral | Engine::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    FracGradient,
    FracDivergence,
    RieszPotential,
    RieszTransform,
}

impl Operator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Operator::FracGradient => "frac-gradient",
            Operator::FracDivergence => "frac-divergence",
            Operator::RieszPotential => "riesz-potential",
            Operator::RieszTransform => "riesz-transform",
        }
    }
}

/// Exponent in [1, ∞]; written as a number or the string "inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Exponent(v)),
            Raw::Word(w) if matches!(w.as_str(), "inf" | "infinity" | "Infinity") => Ok(Exponent(f64::INFINITY)),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got \"{w}\""))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub at: Vec<f64>,
    pub weight: f64,
}

/// Named closed-form field templates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldDef {
    /// Scalar Gaussian, or the vector field `g·direction` when a direction is given.
    Gaussian {
        center: Vec<f64>,
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        direction: Option<Vec<f64>>,
    },
    DeltaPair {
        y: Vec<f64>,
        z: Vec<f64>,
        alpha: f64,
    },
    Convolved {
        atoms: Vec<Atom>,
        alpha: f64,
    },
    IndicatorBall {
        center: Vec<f64>,
        r: f64,
    },
    Cantor {
        level: u32,
    },
}

impl FieldDef {
    pub fn type_name(&self) -> &'static str {
        match self {
            FieldDef::Gaussian { .. } => "gaussian",
            FieldDef::DeltaPair { .. } => "delta-pair",
            FieldDef::Convolved { .. } => "convolved",
            FieldDef::IndicatorBall { .. } => "indicator-ball",
            FieldDef::Cantor { .. } => "cantor",
        }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, FieldDef::Gaussian { .. })
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, FieldDef::Gaussian { direction: None, .. } | FieldDef::IndicatorBall { .. })
    }

    pub fn is_vector(&self) -> bool {
        matches!(self, FieldDef::Gaussian { direction: Some(_), .. } | FieldDef::DeltaPair { .. } | FieldDef::Convolved { .. })
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSection {
    pub dir: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: "out".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectralSection {
    /// Side of the periodic box centred at the origin.
    pub side: f64,
    pub resolution: usize,
}

impl Default for SpectralSection {
    fn default() -> Self {
        SpectralSection { side: 16.0, resolution: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    pub side: f64,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpSection {
    pub field: String,
    pub operator: Operator,
    /// Order α, or β for the Riesz potential; unused by the Riesz transform.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default = "engine_direct")]
    pub engine: Engine,
    pub grid: GridSection,
}

fn engine_direct() -> Engine {
    Engine::Direct
}

fn engine_both() -> Engine {
    Engine::Both
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct VerifySection {
    /// Identity names to run; empty runs the whole suite.
    pub filter: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tighten: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<QuadratureConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<QuadratureConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSection {
    pub field: String,
    pub alpha: f64,
    pub point: Vec<f64>,
    #[serde(default = "engine_both")]
    pub engine: Engine,
    #[serde(default = "default_resolutions")]
    pub resolutions: Vec<usize>,
    #[serde(default = "default_factors")]
    pub factors: Vec<f64>,
}

fn default_resolutions() -> Vec<usize> {
    vec![32, 64, 128, 256]
}

fn default_factors() -> Vec<f64> {
    vec![0.125, 0.25, 0.5, 1.0, 2.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometric {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySection {
    pub subject: String,
    #[serde(default = "half")]
    pub alpha: f64,
    #[serde(default = "p_inf")]
    pub p: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometric: Option<Geometric>,
}

fn half() -> f64 {
    0.5
}

fn p_inf() -> Exponent {
    Exponent(f64::INFINITY)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSection {
    pub field: String,
    #[serde(default = "half")]
    pub alpha: f64,
    #[serde(default = "hundred")]
    pub points: usize,
    #[serde(default = "one")]
    pub radius: f64,
}

fn hundred() -> usize {
    100
}

fn default_dim() -> usize {
    2
}

fn default_seed() -> u64 {
    7
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub spectral: SpectralSection,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub fields: BTreeMap<String, FieldDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<OpSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecaySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchSection>,
}

/// A configuration problem located by its path inside the document.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn diag(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Config(Diagnostic { path: path.into(), message: message.into() }.to_string())
}

/// Deserialize from any serde format, reporting unknown keys and type
/// errors with their path.
fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<ExperimentConfig, CliError> {
    let mut unknown = Vec::new();
    // `?` segments mark Option layers
    let mut record = |path: serde_ignored::Path<'_>| {
        let clean: Vec<String> = path.to_string().split('.').filter(|s| *s != "?").map(str::to_string).collect();
        unknown.push(clean.join("."));
    };
    let ignoring = serde_ignored::Deserializer::new(de, &mut record);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(ignoring).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        diag(path, e.into_inner().to_string())
    })?;
    if let Some(first) = unknown.first() {
        return Err(diag(first.clone(), "unknown key"));
    }
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        deserialize(toml::Deserializer::new(text))
    }

    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg = deserialize(&mut de)?;
        de.end().map_err(|e| diag("", e.to_string()))?;
        Ok(cfg)
    }

    /// Read a file; `.json` selects JSON, anything else TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises to TOML")
    }

    /// Pin the experiment kind and fill the section it needs.
    pub fn normalize(mut self, kind: Kind) -> Result<Self, CliError> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(diag("kind", format!("config is for '{}' but '{}' was requested", k.as_str(), kind.as_str())));
            }
        }
        self.kind = Some(kind);
        if kind == Kind::Verify && self.verify.is_none() {
            self.verify = Some(VerifySection::default());
        }
        if let Some(v) = self.verify.as_mut() {
            v.filter.sort();
            v.filter.dedup();
        }
        Ok(self)
    }

    /// Hex SHA-256 of the normalised TOML text.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_toml().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn field(&self, path: &str, name: &str) -> Result<&FieldDef, CliError> {
        self.fields.get(name).ok_or_else(|| diag(path, format!("no field named '{name}' in [fields]")))
    }

    /// Check references and parameter ranges for the pinned kind.
    pub fn validate(&self) -> Result<(), CliError> {
        let kind = self.kind.ok_or_else(|| diag("kind", "experiment kind not set"))?;
        if !(1..=3).contains(&self.dim) {
            return Err(diag("dim", format!("must be 1, 2 or 3, got {}", self.dim)));
        }
        if !(self.spectral.side > 0.0 && self.spectral.side.is_finite()) {
            return Err(diag("spectral.side", "must be positive"));
        }
        if self.spectral.resolution < 8 || !self.spectral.resolution.is_multiple_of(2) {
            return Err(diag("spectral.resolution", "must be even and at least 8"));
        }
        self.quadrature.validate().map_err(|e| diag("quadrature", strip(&e)))?;
        for (name, def) in &self.fields {
            self.validate_field(&format!("fields.{name}"), def)?;
        }
        match kind {
            Kind::Op => self.validate_op(),
            Kind::Verify => self.validate_verify(),
            Kind::Convergence => self.validate_convergence(),
            Kind::Decay => self.validate_decay(),
            Kind::Bench => self.validate_bench(),
        }
    }

    fn point(&self, path: &str, v: &[f64]) -> Result<(), CliError> {
        if v.len() != self.dim {
            return Err(diag(path, format!("expected {} coordinates, got {}", self.dim, v.len())));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(diag(path, "coordinates must be finite"));
        }
        Ok(())
    }

    fn validate_field(&self, path: &str, def: &FieldDef) -> Result<(), CliError> {
        match def {
            FieldDef::Gaussian { center, width, amplitude, direction } => {
                self.point(&format!("{path}.center"), center)?;
                positive(&format!("{path}.width"), *width)?;
                if !amplitude.is_finite() {
                    return Err(diag(format!("{path}.amplitude"), "must be finite"));
                }
                if let Some(d) = direction {
                    self.point(&format!("{path}.direction"), d)?;
                    if d.iter().all(|c| *c == 0.0) {
                        return Err(diag(format!("{path}.direction"), "must be non-zero"));
                    }
                }
            }
            FieldDef::DeltaPair { y, z, alpha } => {
                self.point(&format!("{path}.y"), y)?;
                self.point(&format!("{path}.z"), z)?;
                order(&format!("{path}.alpha"), *alpha)?;
                if y == z {
                    return Err(diag(format!("{path}.z"), "poles must be distinct"));
                }
            }
            FieldDef::Convolved { atoms, alpha } => {
                if atoms.is_empty() {
                    return Err(diag(format!("{path}.atoms"), "need at least one atom"));
                }
                for (i, a) in atoms.iter().enumerate() {
                    self.point(&format!("{path}.atoms[{i}].at"), &a.at)?;
                    if !a.weight.is_finite() {
                        return Err(diag(format!("{path}.atoms[{i}].weight"), "must be finite"));
                    }
                }
                order(&format!("{path}.alpha"), *alpha)?;
            }
            FieldDef::IndicatorBall { center, r } => {
                self.point(&format!("{path}.center"), center)?;
                positive(&format!("{path}.r"), *r)?;
            }
            FieldDef::Cantor { level } => {
                if *level > fracfield::analytic::MAX_CANTOR_LEVEL {
                    return Err(diag(format!("{path}.level"), format!("must be at most {}", fracfield::analytic::MAX_CANTOR_LEVEL)));
                }
                if self.dim > 2 {
                    return Err(diag(path, "the Cantor measure needs dim 1 or 2"));
                }
            }
        }
        Ok(())
    }

    fn validate_op(&self) -> Result<(), CliError> {
        let op = self.op.as_ref().ok_or_else(|| diag("op", "missing [op] section"))?;
        let def = self.field("op.field", &op.field)?;
        match op.operator {
            Operator::FracGradient | Operator::RieszPotential | Operator::RieszTransform if !def.is_scalar() => {
                return Err(diag("op.field", format!("{} needs a scalar field, '{}' is {}", op.operator.as_str(), op.field, def.type_name())));
            }
            Operator::FracDivergence if !def.is_vector() => {
                return Err(diag("op.field", format!("frac-divergence needs a vector field, '{}' is {}", op.field, def.type_name())));
            }
            _ => {}
        }
        match (op.operator, op.alpha) {
            (Operator::RieszTransform, Some(_)) => return Err(diag("op.alpha", "the Riesz transform takes no order")),
            (Operator::RieszTransform, None) => {}
            (Operator::RieszPotential, Some(b)) => {
                if !(b > 0.0 && b < self.dim as f64) {
                    return Err(diag("op.alpha", format!("Riesz potential order must lie in (0, {}), got {b}", self.dim)));
                }
            }
            (_, Some(a)) => order("op.alpha", a)?,
            (_, None) => return Err(diag("op.alpha", format!("{} needs an order", op.operator.as_str()))),
        }
        let g = &op.grid;
        if let Some(c) = &g.center {
            self.point("op.grid.center", c)?;
        }
        positive("op.grid.side", g.side)?;
        if g.resolution < 4 {
            return Err(diag("op.grid.resolution", "must be at least 4"));
        }
        if op.engine.spectral() {
            self.smooth_for_spectral(&op.field, def)?;
            let c = g.center.clone().unwrap_or(vec![0.0; self.dim]);
            let reach = c.iter().map(|v| v.abs()).fold(0.0, f64::max) + g.side / 2.0;
            if reach > self.spectral.side / 2.0 {
                return Err(diag("op.grid", format!("output grid reaches {reach}, outside the periodic box of side {}", self.spectral.side)));
            }
        }
        Ok(())
    }

    fn smooth_for_spectral(&self, name: &str, def: &FieldDef) -> Result<(), CliError> {
        if !def.is_smooth() {
            return Err(CliError::Precondition(format!(
                "spectral engine requires smooth field ('{name}' is a {} field)",
                def.type_name()
            )));
        }
        Ok(())
    }

    fn validate_verify(&self) -> Result<(), CliError> {
        let v = self.verify.as_ref().ok_or_else(|| diag("verify", "missing [verify] section"))?;
        for (i, name) in v.filter.iter().enumerate() {
            if !crate::commands::SUITE_NAMES.contains(&name.as_str()) {
                return Err(diag(
                    format!("verify.filter[{i}]"),
                    format!("unknown identity '{name}'; known: {}", crate::commands::SUITE_NAMES.join(", ")),
                ));
            }
        }
        if let Some(t) = v.tighten {
            positive("verify.tighten", t)?;
        }
        if let Some(q) = &v.inner {
            q.validate().map_err(|e| diag("verify.inner", strip(&e)))?;
        }
        if let Some(q) = &v.outer {
            q.validate().map_err(|e| diag("verify.outer", strip(&e)))?;
        }
        if self.dim != 2 {
            return Err(diag("dim", "the verification suite runs in dimension 2"));
        }
        Ok(())
    }

    fn validate_convergence(&self) -> Result<(), CliError> {
        let c = self.convergence.as_ref().ok_or_else(|| diag("convergence", "missing [convergence] section"))?;
        let def = self.field("convergence.field", &c.field)?;
        if !def.is_scalar() {
            return Err(diag("convergence.field", format!("needs a scalar field, '{}' is {}", c.field, def.type_name())));
        }
        order("convergence.alpha", c.alpha)?;
        self.point("convergence.point", &c.point)?;
        if c.engine.spectral() {
            if c.resolutions.len() < 2 {
                return Err(diag("convergence.resolutions", format!("a convergence sweep needs at least 2 levels, got {}", c.resolutions.len())));
            }
            if c.resolutions.windows(2).any(|w| w[1] <= w[0]) || c.resolutions.iter().any(|n| !n.is_multiple_of(2) || *n < 8) {
                return Err(diag("convergence.resolutions", "must be even, at least 8 and strictly increasing"));
            }
            self.smooth_for_spectral(&c.field, def)?;
        }
        if c.engine.direct() {
            if c.factors.len() < 2 {
                return Err(diag("convergence.factors", format!("a convergence sweep needs at least 2 levels, got {}", c.factors.len())));
            }
            if c.factors.windows(2).any(|w| w[1] <= w[0]) || c.factors.iter().any(|s| !(*s > 0.0)) {
                return Err(diag("convergence.factors", "must be positive and strictly increasing"));
            }
        }
        Ok(())
    }

    fn validate_decay(&self) -> Result<(), CliError> {
        let d = self.decay.as_ref().ok_or_else(|| diag("decay", "missing [decay] section"))?;
        let def = self.field("decay.subject", &d.subject)?;
        if def.is_scalar() {
            return Err(diag("decay.subject", format!("needs a vector field or a measure, '{}' is {}", d.subject, def.type_name())));
        }
        order("decay.alpha", d.alpha)?;
        if !(d.p.0 >= 1.0) {
            return Err(diag("decay.p", format!("must lie in [1, inf], got {}", d.p.0)));
        }
        if let Some(c) = &d.center {
            self.point("decay.center", c)?;
        }
        match (&d.radii, &d.geometric) {
            (Some(_), Some(_)) => return Err(diag("decay", "give either radii or geometric, not both")),
            (None, None) => return Err(diag("decay", "missing radii or geometric")),
            (Some(r), None) => {
                if r.len() < 2 {
                    return Err(diag("decay.radii", "need at least two radii"));
                }
                for (i, v) in r.iter().enumerate() {
                    positive(&format!("decay.radii[{i}]"), *v)?;
                }
            }
            (None, Some(g)) => {
                positive("decay.geometric.min", g.min)?;
                if !(g.max > g.min && g.max.is_finite()) {
                    return Err(diag("decay.geometric.max", "must be finite and exceed min"));
                }
                if g.count < 2 {
                    return Err(diag("decay.geometric.count", "need at least two radii"));
                }
            }
        }
        if def.is_smooth() {
            self.smooth_for_spectral(&d.subject, def)?;
        }
        Ok(())
    }

    fn validate_bench(&self) -> Result<(), CliError> {
        let b = self.bench.as_ref().ok_or_else(|| diag("bench", "missing [bench] section"))?;
        let def = self.field("bench.field", &b.field)?;
        if !def.is_scalar() {
            return Err(diag("bench.field", format!("needs a scalar field, '{}' is {}", b.field, def.type_name())));
        }
        self.smooth_for_spectral(&b.field, def)?;
        order("bench.alpha", b.alpha)?;
        if b.points == 0 {
            return Err(diag("bench.points", "empty point set"));
        }
        positive("bench.radius", b.radius)?;
        if b.radius > self.spectral.side / 2.0 {
            return Err(diag("bench.radius", "points must lie inside the periodic box"));
        }
        Ok(())
    }
}

impl DecaySection {
    pub fn radii(&self) -> Vec<f64> {
        match (&self.radii, &self.geometric) {
            (Some(r), _) => r.clone(),
            (None, Some(g)) => {
                let ratio = (g.max / g.min).powf(1.0 / (g.count - 1) as f64);
                (0..g.count).map(|k| g.min * ratio.powi(k as i32)).collect()
            }
            (None, None) => Vec::new(),
        }
    }
}

fn positive(path: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(diag(path, format!("must be positive and finite, got {v}")))
    }
}

fn order(path: &str, a: f64) -> Result<(), CliError> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(diag(path, format!("order must lie in (0, 1), got {a}")))
    }
}

fn strip(e: &fracfield::FracError) -> String {
    match e {
        fracfield::FracError::Config(m) | fracfield::FracError::Domain(m) => m.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
dim = 2

[fields.g]
type = "gaussian"
center = [0.0, 0.1]
width = 1.0

[fields.p]
type = "delta-pair"
y = [0.3, 0.1]
z = [-0.4, 0.2]
alpha = 0.6

[op]
field = "g"
operator = "frac-gradient"
alpha = 0.5
engine = "spectral"
grid = { side = 4.0, resolution = 16 }

[decay]
subject = "p"
p = "inf"
geometric = { min = 0.01, max = 0.1, count = 5 }
"#;

    #[test]
    fn round_trip_is_a_fixed_point() {
        let a = ExperimentConfig::from_toml_str(SAMPLE).unwrap().normalize(Kind::Op).unwrap();
        let text = a.to_toml();
        let b = ExperimentConfig::from_toml_str(&text).unwrap().normalize(Kind::Op).unwrap();
        assert_eq!(a, b);
        assert_eq!(text, b.to_toml());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(ExperimentConfig::from_json_str(&json).unwrap(), a);
    }

    #[test]
    fn unknown_key_reports_path() {
        let bad = SAMPLE.replace("width = 1.0", "width = 1.0\nwidht = 2.0");
        let err = ExperimentConfig::from_toml_str(&bad).unwrap_err().to_string();
        assert!(err.contains("fields.g") && err.contains("widht"), "{err}");
    }

    #[test]
    fn type_error_reports_path() {
        let bad = SAMPLE.replace("resolution = 16", "resolution = \"many\"");
        let err = ExperimentConfig::from_toml_str(&bad).unwrap_err().to_string();
        assert!(err.contains("op.grid.resolution"), "{err}");
    }

    #[test]
    fn dangling_reference_rejected() {
        let bad = SAMPLE.replace("field = \"g\"", "field = \"q\"");
        let cfg = ExperimentConfig::from_toml_str(&bad).unwrap().normalize(Kind::Op).unwrap();
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("op.field: no field named 'q'"), "{err}");
    }

    #[test]
    fn kind_mismatch_rejected() {
        let text = format!("kind = \"bench\"\n{SAMPLE}");
        assert!(ExperimentConfig::from_toml_str(&text).unwrap().normalize(Kind::Op).is_err());
    }

    #[test]
    fn digest_ignores_formatting() {
        let a = ExperimentConfig::from_toml_str(SAMPLE).unwrap().normalize(Kind::Op).unwrap();
        let b = ExperimentConfig::from_toml_str(&a.to_toml()).unwrap().normalize(Kind::Op).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn geometric_radii() {
        let cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        let r = cfg.decay.unwrap().radii();
        assert_eq!(r.len(), 5);
        assert!((r[4] - 0.1).abs() < 1e-15);
    }
}
