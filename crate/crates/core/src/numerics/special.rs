//! Gamma function, normalisation constants of the fractional operators,
//! and Kummer's confluent hypergeometric function (used by the closed-form
//! Gaussian fields).

use std::f64::consts::PI;

use crate::error::{FracError, Result};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Γ(x) for x > 0 without argument checking.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_pos(1.0 - x))
    } else if x > 171.0 {
        f64::INFINITY
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
    }
}

/// ln Γ(x) for x > 0.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x)
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
    }
}

/// Γ(x) for positive real `x`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(FracError::domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_pos(x))
}

/// Renormalisation constant μ_{n,α} = 2^α π^{−n/2} Γ((n+α+1)/2) / Γ((1−α)/2),
/// defined for −1 < α < 1. Negative orders appear in the delta-pair fields.
pub fn mu_const(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(FracError::domain(format!(
            "mu_const requires -1 < alpha < 1, got {alpha}"
        )));
    }
    let nf = n as f64;
    Ok(2f64.powf(alpha) * PI.powf(-nf / 2.0) * gamma_pos((nf + alpha + 1.0) / 2.0)
        / gamma_pos((1.0 - alpha) / 2.0))
}

/// Volume of the unit ball in (possibly fractional) dimension `s`.
pub fn omega_const(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(FracError::domain(format!("omega_const requires s > 0, got {s}")));
    }
    Ok(PI.powf(s / 2.0) / gamma_pos((s + 2.0) / 2.0))
}

/// Surface measure of the unit sphere in ℝⁿ, `n·ω_n`.
pub fn sphere_area(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * PI.powf(nf / 2.0) / gamma_pos(nf / 2.0)
}

/// Constant in front of the Riesz potential of order β ∈ (0, n).
pub fn riesz_potential_const(n: usize, beta: f64) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    if !(beta > 0.0 && beta < nf) {
        return Err(FracError::domain(format!(
            "Riesz potential order must lie in (0, {n}), got {beta}"
        )));
    }
    Ok(2f64.powf(-beta) * PI.powf(-nf / 2.0) * gamma_pos((nf - beta) / 2.0)
        / gamma_pos(beta / 2.0))
}

/// Constant π^{−(n+1)/2} Γ((n+1)/2) of the Riesz transform; equals μ_{n,0}.
pub fn riesz_transform_const(n: usize) -> f64 {
    let nf = n as f64;
    PI.powf(-(nf + 1.0) / 2.0) * gamma_pos((nf + 1.0) / 2.0)
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(FracError::domain(format!("dimension must be 1, 2 or 3, got {n}")))
    }
}

/// Kummer's function M(a, b, x) for real `x`, `b > 0`.
///
/// Negative arguments go through M(a,b,x) = eˣ M(b−a, b, −x), which turns
/// the alternating series into one with positive terms when b > a; very
/// large |x| uses the algebraic asymptotic expansion.
pub fn kummer_m(a: f64, b: f64, x: f64) -> f64 {
    if x >= 0.0 {
        return kummer_series(a, b, x);
    }
    let z = -x;
    if z <= 600.0 || b - a <= 0.0 {
        return (-z).exp() * kummer_series(b - a, b, z);
    }
    // M(a,b,−z) ~ Γ(b)/Γ(b−a) z^{−a} Σ_s (a)_s (a−b+1)_s / s! z^{−s}
    let lead = (ln_gamma_pos(b) - ln_gamma_pos(b - a) - a * z.ln()).exp();
    let mut term = 1.0;
    let mut sum = 1.0;
    for s in 0..60 {
        let sf = s as f64;
        let next = term * (a + sf) * (a - b + 1.0 + sf) / ((sf + 1.0) * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn kummer_series(a: f64, b: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    while k < 5000.0 {
        term *= (a + k) * x / ((b + k) * (k + 1.0));
        sum += term;
        k += 1.0;
        if term.abs() <= 1e-17 * sum.abs() && k > x {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    sum
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_classical_values() {
        assert!(rel(gamma_fn(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-13);
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-13);
    }

    #[test]
    fn gamma_against_high_precision_values() {
        // 30-digit reference values
        let cases = [
            (1.25, 0.906_402_477_055_477_077_982_671_288_967),
            (0.1, 9.513_507_698_668_731_836_292_487_177_27),
            (4.7, 15.431_411_600_047_431_711_956_331_094_9),
            (10.3, 716_430.689_062_375_244_547_629_654_715),
        ];
        for (x, g) in cases {
            assert!(rel(gamma_fn(x).unwrap(), g) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(gamma_fn(0.0), Err(FracError::Domain(_))));
        assert!(gamma_fn(-1.5).is_err());
        assert!(gamma_fn(f64::NAN).is_err());
    }

    #[test]
    fn gamma_recurrence_sweep() {
        for i in 1..=50 {
            let x = i as f64 * 0.1;
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_consistent() {
        for x in [0.3, 1.7, 12.5, 40.0] {
            assert!((ln_gamma_pos(x) - gamma_pos(x).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_reference_values() {
        let cases = [
            (2, 0.5, 0.114_111_419_793_701_561_950_134_714_662),
            (1, -0.5, 0.398_942_280_401_432_677_939_946_059_934),
            (2, 0.6, 0.097_882_326_395_349_852_053_031_228_807_4),
            (2, 0.3, 0.138_539_792_105_297_127_622_628_783_174),
            (2, -0.6, 0.165_621_210_485_902_453_611_239_629_545),
        ];
        for (n, a, v) in cases {
            assert!(rel(mu_const(n, a).unwrap(), v) < 1e-12, "n={n} a={a}");
        }
    }

    #[test]
    fn mu_vanishes_at_unit_order() {
        let near_one = mu_const(2, 1.0 - 1e-9).unwrap();
        assert!(near_one > 0.0 && near_one < 1e-8);
        assert!(mu_const(2, 1.0).is_err());
        assert!(mu_const(2, -1.0).is_err());
    }

    #[test]
    fn mu_times_gamma_is_continuous() {
        let mut prev = None;
        for i in -90..=90 {
            let a = i as f64 / 100.0;
            let v = mu_const(2, a).unwrap() * gamma_pos((1.0 - a) / 2.0);
            assert!(v > 0.0 && v.is_finite());
            if let Some(p) = prev {
                assert!(rel(v, p) < 0.05);
            }
            prev = Some(v);
        }
    }

    #[test]
    fn omega_values() {
        assert!(rel(omega_const(2.0).unwrap(), PI) < 1e-14);
        assert!(rel(omega_const(1.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(omega_const(1.5).unwrap(), 2.567_540_753_190_446_794_450_912_574_53) < 1e-12);
        assert!(omega_const(0.0).is_err());
        assert!(rel(sphere_area(3), 4.0 * PI) < 1e-14);
        assert!(rel(sphere_area(2), 2.0 * PI) < 1e-14);
        assert!(rel(sphere_area(1), 2.0) < 1e-14);
    }

    #[test]
    fn riesz_transform_const_is_mu_zero() {
        for n in 1..=3 {
            assert!(rel(riesz_transform_const(n), mu_const(n, 0.0).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn kummer_special_cases() {
        // M(a, a, x) = e^x
        for x in [-700.0, -50.0, -3.0, 0.0, 2.5] {
            let v = kummer_m(1.3, 1.3, x);
            let e = f64::exp(x);
            assert!((v - e).abs() <= 1e-12 * e.max(1e-300), "x = {x}");
        }
        // M(1, 2, x) = (e^x − 1)/x
        for x in [-40.0, -1.0, 0.5, 3.0] {
            let v = kummer_m(1.0, 2.0, x);
            assert!(rel(v, (x.exp() - 1.0) / x) < 1e-12);
        }
        // Asymptotic branch continues the series branch smoothly.
        let lo = kummer_m(1.75, 2.0, -599.0);
        let hi = kummer_m(1.75, 2.0, -601.0);
        assert!(rel(lo, 3.81132853424756e-6) < 1e-10);
        assert!(rel(hi, 3.78913269184896e-6) < 1e-10);
    }
}
