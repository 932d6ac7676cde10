use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};

/// How a check turns its numbers into a pass flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    /// `|lhs − rhs| ≤ max(absolute, relative·|rhs|, estimate_factor·est_err)`.
    Match { absolute: f64, relative: f64, estimate_factor: f64 },
    /// One-sided estimate `lhs ≤ (1 + slack)·rhs`.
    AtMost { slack: f64 },
    /// One-sided floor `lhs ≥ rhs − slack`.
    AtLeast { slack: f64 },
    /// Recorded without a pass/fail decision (always passes).
    Informational,
}

impl Criterion {
    /// The central default: `max(1e-3, 5 × estimate)`.
    pub const DEFAULT: Criterion = Criterion::Match { absolute: 1e-3, relative: 0.0, estimate_factor: 5.0 };

    pub fn relative(relative: f64) -> Criterion {
        Criterion::Match { absolute: 0.0, relative, estimate_factor: 5.0 }
    }

    pub fn absolute(absolute: f64) -> Criterion {
        Criterion::Match { absolute, relative: 0.0, estimate_factor: 5.0 }
    }

    /// Same criterion with every allowance replaced by `tol` (estimate
    /// allowance dropped). Used to force tight runs.
    pub fn tightened(self, tol: f64) -> Criterion {
        match self {
            Criterion::Match { .. } => Criterion::Match { absolute: tol, relative: 0.0, estimate_factor: 0.0 },
            Criterion::AtMost { .. } => Criterion::AtMost { slack: tol },
            Criterion::AtLeast { .. } => Criterion::AtLeast { slack: tol },
            Criterion::Informational => Criterion::Informational,
        }
    }

    /// Threshold, the branch that set it, and the pass flag.
    pub fn judge(&self, lhs: f64, rhs: f64, est_err: f64) -> (f64, &'static str, bool) {
        let finite = lhs.is_finite() && rhs.is_finite();
        match *self {
            Criterion::Match { absolute, relative, estimate_factor } => {
                let candidates = [
                    (absolute, "absolute"),
                    (relative * rhs.abs(), "relative"),
                    (estimate_factor * est_err, "estimate"),
                ];
                let (tol, branch) = candidates
                    .iter()
                    .copied()
                    .fold((0.0, "absolute"), |acc, c| if c.0 > acc.0 { c } else { acc });
                (tol, branch, finite && (lhs - rhs).abs() <= tol)
            }
            Criterion::AtMost { slack } => {
                let tol = slack * rhs.abs();
                (tol, "upper_bound", finite && lhs <= rhs + tol + 1e-300)
            }
            Criterion::AtLeast { slack } => (slack, "lower_bound", finite && lhs >= rhs - slack),
            Criterion::Informational => (f64::INFINITY, "informational", true),
        }
    }

    fn name(&self) -> String {
        match *self {
            Criterion::Match { absolute, relative, estimate_factor } => {
                format!("match(abs={absolute:e},rel={relative:e},est={estimate_factor})")
            }
            Criterion::AtMost { slack } => format!("at_most(slack={slack:e})"),
            Criterion::AtLeast { slack } => format!("at_least(slack={slack:e})"),
            Criterion::Informational => "informational".to_string(),
        }
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    /// Summed quadrature error estimate of both sides.
    pub est_err: f64,
    pub criterion: String,
    pub tolerance: f64,
    /// Which allowance set the tolerance.
    pub bound_by: String,
    pub pass: bool,
    pub seconds: f64,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn new(name: &str, params: BTreeMap<String, String>, lhs: f64, rhs: f64, est_err: f64, criterion: Criterion) -> Self {
        let abs_err = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        let (tolerance, bound_by, pass) = criterion.judge(lhs, rhs, est_err);
        VerifyReport {
            name: name.to_string(),
            params,
            lhs,
            rhs,
            abs_err,
            rel_err,
            est_err,
            criterion: criterion.name(),
            tolerance,
            bound_by: bound_by.to_string(),
            pass,
            seconds: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// One tab-separated `key=value` line. Params are flattened as
    /// `param.<key>`, notes as a `;`-joined list.
    pub fn to_line(&self) -> String {
        let clean = |s: &str| s.replace(['\t', '\n', '\r'], " ");
        let mut out = String::new();
        let _ = write!(out, "name={}", clean(&self.name));
        for (k, v) in &self.params {
            let _ = write!(out, "\tparam.{}={}", clean(k), clean(v));
        }
        let _ = write!(
            out,
            "\tlhs={:e}\trhs={:e}\tabs_err={:e}\trel_err={:e}\test_err={:e}\tcriterion={}\ttolerance={:e}\tbound_by={}\tpass={}\tseconds={:.3}",
            self.lhs, self.rhs, self.abs_err, self.rel_err, self.est_err, self.criterion, self.tolerance, self.bound_by, self.pass, self.seconds
        );
        if !self.notes.is_empty() {
            let joined: Vec<String> = self.notes.iter().map(|n| clean(n).replace(';', ",")).collect();
            let _ = write!(out, "\tnotes={}", joined.join(";"));
        }
        out
    }

    /// Inverse of [`VerifyReport::to_line`].
    pub fn from_line(line: &str) -> Result<Self> {
        let mut r = VerifyReport {
            name: String::new(),
            params: BTreeMap::new(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            est_err: f64::NAN,
            criterion: String::new(),
            tolerance: f64::NAN,
            bound_by: String::new(),
            pass: false,
            seconds: 0.0,
            notes: Vec::new(),
        };
        let num = |k: &str, v: &str| v.parse::<f64>().map_err(|_| FracError::config(format!("bad number for {k}: {v}")));
        for field in line.trim_end().split('\t') {
            let (k, v) = field.split_once('=').ok_or_else(|| FracError::config(format!("malformed field '{field}'")))?;
            match k {
                "name" => r.name = v.to_string(),
                "lhs" => r.lhs = num(k, v)?,
                "rhs" => r.rhs = num(k, v)?,
                "abs_err" => r.abs_err = num(k, v)?,
                "rel_err" => r.rel_err = num(k, v)?,
                "est_err" => r.est_err = num(k, v)?,
                "criterion" => r.criterion = v.to_string(),
                "tolerance" => r.tolerance = num(k, v)?,
                "bound_by" => r.bound_by = v.to_string(),
                "pass" => r.pass = v == "true",
                "seconds" => r.seconds = num(k, v)?,
                "notes" => r.notes = v.split(';').map(str::to_string).collect(),
                _ => match k.strip_prefix("param.") {
                    Some(p) => {
                        r.params.insert(p.to_string(), v.to_string());
                    }
                    None => return Err(FracError::config(format!("unknown report field '{k}'"))),
                },
            }
        }
        if r.name.is_empty() {
            return Err(FracError::config("report line without a name"));
        }
        Ok(r)
    }
}

/// Build a parameter record from `(key, value)` pairs.
pub fn params<I, K, V>(pairs: I) -> BTreeMap<String, String>
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: ToString,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v.to_string())).collect()
}
