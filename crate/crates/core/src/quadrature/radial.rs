//! Radial node sets for ∫_0^∞ H(r) r^{γ−1} dr.
//!
//! * `[0, δ]`: substitution u = r^γ, which absorbs the r^{γ−1} weight, then
//!   Gauss–Legendre in u.
//! * `[δ, R]`: geometrically graded Gauss–Legendre panels, split at
//!   breakpoints (interface crossings) and graded towards them.
//! * `[R, ∞)`: r = R·w^{−1/κ} for w ∈ (0, 1], which makes an integrand
//!   decaying like r^{−1−κ} flat in w.
//!
//! Weights returned include the r^{γ−1} factor and all Jacobians.

use crate::numerics::gauss::GaussRule;

#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialSpec {
    /// Exponent γ > 0 of the r^{γ−1} weight.
    pub gamma: f64,
    /// Near-field radius δ.
    pub delta: f64,
    /// End of the mid-field, R.
    pub r_max: f64,
    /// Decay rate κ of the far integrand; `None` truncates at R.
    pub far_kappa: Option<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct RadialRules {
    pub near: GaussRule,
    pub mid: GaussRule,
    pub far: GaussRule,
    pub mid_panels: usize,
    pub far_panels: usize,
}

/// Breakpoint at radius `at`; with `width > 0` panels are graded down to
/// that scale on both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Break {
    pub at: f64,
    pub width: f64,
}

pub(crate) fn build(spec: &RadialSpec, rules: &RadialRules, breaks: &[Break], out: &mut Vec<(f64, f64)>) {
    out.clear();
    let gamma = spec.gamma;
    let delta = spec.delta.min(spec.r_max);
    let mut edges: Vec<f64> = Vec::with_capacity(rules.mid_panels + 2 + 8 * breaks.len());
    edges.push(0.0);
    edges.push(delta);
    if spec.r_max > delta {
        let p = rules.mid_panels.max(1);
        let q = (spec.r_max / delta).powf(1.0 / p as f64);
        let mut e = delta;
        for _ in 1..p {
            e *= q;
            edges.push(e);
        }
        edges.push(spec.r_max);
    }
    if !breaks.is_empty() {
        let base = edges.clone();
        for b in breaks {
            if !(b.at > 0.0 && b.at < spec.r_max) {
                continue;
            }
            edges.push(b.at);
            if b.width > 0.0 {
                // local panel scale from the base grid
                let scale = base
                    .windows(2)
                    .find(|w| w[0] <= b.at && b.at <= w[1])
                    .map(|w| w[1] - w[0])
                    .unwrap_or(b.at);
                let mut s = b.width;
                while s < 0.5 * scale {
                    for e in [b.at - s, b.at + s] {
                        if e > 0.0 && e < spec.r_max {
                            edges.push(e);
                        }
                    }
                    s *= 2.0;
                }
            }
        }
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs().max(1e-300));
    }
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        if a == 0.0 {
            // u = r^γ on [0, b^γ]
            let ub = b.powf(gamma);
            for (u, wu) in rules.near.on(0.0, ub) {
                let r = if gamma == 1.0 { u } else { u.powf(1.0 / gamma) };
                out.push((r, wu / gamma));
            }
        } else {
            for (r, wr) in rules.mid.on(a, b) {
                let jac = if gamma == 1.0 { 1.0 } else { r.powf(gamma - 1.0) };
                out.push((r, wr * jac));
            }
        }
    }
    if let Some(kappa) = spec.far_kappa {
        let r0 = spec.r_max;
        let np = rules.far_panels.max(1);
        let mut hi = 1.0;
        for k in 0..np {
            let lo = if k + 1 == np { 0.0 } else { hi * 0.25 };
            for (w, ww) in rules.far.on(lo, hi) {
                let r = r0 * w.powf(-1.0 / kappa);
                let jac = (r0 / kappa) * w.powf(-1.0 / kappa - 1.0) * r.powf(gamma - 1.0);
                if jac.is_finite() {
                    out.push((r, ww * jac));
                }
            }
            hi = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> RadialRules {
        RadialRules {
            near: GaussRule::new(12),
            mid: GaussRule::new(10),
            far: GaussRule::new(16),
            mid_panels: 12,
            far_panels: 3,
        }
    }

    fn integrate(spec: &RadialSpec, breaks: &[Break], h: impl Fn(f64) -> f64) -> f64 {
        let mut nodes = Vec::new();
        build(spec, &rules(), breaks, &mut nodes);
        nodes.iter().map(|(r, w)| w * h(*r)).sum()
    }

    #[test]
    fn weight_singularity_is_absorbed() {
        // ∫_0^2 r^{−0.7} dr = 2^{0.3}/0.3
        let spec = RadialSpec { gamma: 0.3, delta: 0.1, r_max: 2.0, far_kappa: None };
        let v = integrate(&spec, &[], |_| 1.0);
        assert!((v - 2f64.powf(0.3) / 0.3).abs() < 1e-12);
    }

    #[test]
    fn algebraic_tail_is_exact() {
        // ∫_0^∞ r^{0.5−1} (1 + r)^{−2} dr = Γ(0.5)Γ(1.5)/Γ(2) = π/2
        let spec = RadialSpec { gamma: 0.5, delta: 0.1, r_max: 10.0, far_kappa: Some(1.5) };
        let v = integrate(&spec, &[], |r| (1.0 + r).powi(-2));
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-7, "{v}");
    }

    #[test]
    fn breakpoints_resolve_kinks() {
        // ∫_0^3 |r − 1.3| dr
        let spec = RadialSpec { gamma: 1.0, delta: 0.2, r_max: 3.0, far_kappa: None };
        let exact = 0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7;
        let v = integrate(&spec, &[Break { at: 1.3, width: 0.0 }], |r| (r - 1.3f64).abs());
        assert!((v - exact).abs() < 1e-12);
        // endpoint singularity |r − 1.3|^{−0.5} with grading
        let exact = 2.0 * 1.3f64.sqrt() + 2.0 * 1.7f64.sqrt();
        let v = integrate(&spec, &[Break { at: 1.3, width: 1e-10 }], |r| (r - 1.3f64).abs().powf(-0.5));
        assert!((v - exact).abs() < 1e-4 * exact, "{v} vs {exact}");
    }
}
