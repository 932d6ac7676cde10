#![allow(clippy::excessive_precision)]

use fracfield::analytic::{indicator_ball, DeltaPairField, GaussianBump};
use fracfield::exec::Execution;
use fracfield::quadrature::{
    besov_seminorm, frac_divergence, frac_gradient, lp_norm, nl_divergence, nl_gradient, riesz_potential, riesz_transform,
    QuadratureConfig,
};
use fracfield::{GridSpec, ScalarField, VectorField};
use proptest::prelude::*;

// Hankel-transform quadrature of the Fourier multipliers at 30 digits, for
// e^{−π|x|²} in the plane.
const GRAD_06_AT_HALF: f64 = -0.878869388367770496118896456672;
const DIV_05_AT_03_04: f64 = -0.468576765735218751855904090834;
const POT_05_AT_0: f64 = 0.650850629866015834758658684256;
const RIESZ_AT_1: f64 = -0.217112380659518519708605790713;
const NL_DIV_05_AT_02: f64 = 0.140612412359764943057472262464;
const BESOV_04_Q2: f64 = 27.6945890873470121610268444785;

fn gauss() -> ScalarField {
    GaussianBump::standard(2).field()
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn gradient_of_gaussian() {
    let r = frac_gradient(&gauss(), 0.6, &[0.5, 0.0, 0.0], &cfg()).unwrap();
    assert!((r.value[0] - GRAD_06_AT_HALF).abs() < 1e-8, "{:?}", r);
    assert!(r.value[1].abs() < 1e-10);
    assert!(r.error < 1e-4);
    let o = frac_gradient(&gauss(), 0.6, &[0.0; 3], &cfg()).unwrap();
    assert!(o.value[0].abs() < 1e-10 && o.value[1].abs() < 1e-10);
}

#[test]
fn divergence_of_gaussian_field() {
    let f = GaussianBump::standard(2).vector_field([1.0, 0.0, 0.0]);
    let r = frac_divergence(&f, 0.5, &[0.3, 0.4, 0.0], &cfg()).unwrap();
    assert!((r.value - DIV_05_AT_03_04).abs() < 1e-8, "{r:?}");
}

#[test]
fn potential_and_transform_of_gaussian() {
    let p = riesz_potential(&gauss(), 0.5, &[0.0; 3], &cfg()).unwrap();
    assert!((p.value - POT_05_AT_0).abs() < 1e-7, "{p:?}");
    let t = riesz_transform(&gauss(), &[1.0, 0.0, 0.0], &cfg()).unwrap();
    assert!((t.value[0] - RIESZ_AT_1).abs() < 1e-7, "{t:?}");
    let o = riesz_transform(&gauss(), &[0.0; 3], &cfg()).unwrap();
    assert!(o.value[0].abs() < 1e-10);
}

#[test]
fn nonlocal_divergence_of_gaussians() {
    let f = GaussianBump::standard(2).vector_field([1.0, 0.0, 0.0]);
    let r = nl_divergence(&gauss(), &f, 0.5, &[0.2, 0.0, 0.0], &cfg()).unwrap();
    assert!((r.value - NL_DIV_05_AT_02).abs() < 1e-7, "{r:?}");
}

#[test]
fn constants_give_zero() {
    let c = ScalarField::constant(2, 3.0);
    let x = [0.2, -0.1, 0.0];
    assert_eq!(frac_gradient(&c, 0.5, &x, &cfg()).unwrap().value, [0.0; 3]);
    let v = VectorField::constant(2, [1.0, 2.0, 0.0]);
    assert_eq!(frac_divergence(&v, 0.5, &x, &cfg()).unwrap().value, 0.0);
    assert_eq!(nl_gradient(&c, &gauss(), 0.5, &x, &cfg()).unwrap().value, [0.0; 3]);
    assert_eq!(nl_gradient(&gauss(), &c, 0.5, &x, &cfg()).unwrap().value, [0.0; 3]);
    assert_eq!(nl_divergence(&c, &GaussianBump::standard(2).vector_field([1.0, 0.0, 0.0]), 0.5, &x, &cfg()).unwrap().value, 0.0);
    assert_eq!(nl_divergence(&gauss(), &v, 0.5, &x, &cfg()).unwrap().value, 0.0);
}

#[test]
fn nl_gradient_vanishes_at_centre_of_symmetry() {
    let r = nl_gradient(&gauss(), &gauss(), 0.5, &[0.0; 3], &cfg()).unwrap();
    assert!(r.value[0].abs() < 1e-4 && r.value[1].abs() < 1e-4);
}

#[test]
fn pair_divergence_vanishes_off_the_poles() {
    let pair = DeltaPairField::new(2, [0.3, 0.1, 0.0], [-0.4, 0.2, 0.0], 0.6).unwrap();
    let tau = cfg().tolerance;
    for x in [[1.0, 1.0, 0.0], [0.0, -0.6, 0.0], [2.5, 0.3, 0.0]] {
        let r = frac_divergence(&pair.field(), 0.6, &x, &cfg()).unwrap();
        assert!(r.value.abs() < 10.0 * tau, "{x:?}: {r:?}");
    }
}

#[test]
fn potential_is_positive_for_positive_input() {
    for x in [[0.0; 3], [3.0, 0.0, 0.0], [10.0, -4.0, 0.0]] {
        assert!(riesz_potential(&gauss(), 0.7, &x, &cfg()).unwrap().value > 0.0);
    }
}

#[test]
fn far_points_keep_relative_accuracy() {
    let g = GaussianBump::standard(2);
    for d in [1.2, 1.5, 2.0, 3.0, 5.0, 8.0, 30.0] {
        let x = [d * 0.6, d * 0.8, 0.0];
        let want = g.frac_gradient(0.5, &x).unwrap();
        let got = frac_gradient(&g.field(), 0.5, &x, &cfg()).unwrap();
        let err = fracfield::numerics::point::dist(&got.value, &want);
        let rel = err / fracfield::numerics::point::norm(&want);
        assert!(rel < 1e-4, "d = {d}: rel {rel:e}");
        assert!(err <= got.error + 1e-12 * fracfield::numerics::point::norm(&want), "d = {d}: error {err:e} above estimate {:e}", got.error);
    }
}

#[test]
fn lebesgue_norms() {
    let disc = indicator_ball(2, [0.0; 3], 1.0).unwrap();
    let grid = GridSpec::cube(2, &[0.0; 3], 3.0, 1024, false).unwrap();
    assert!((lp_norm(&disc, 1.0, &grid).unwrap() - std::f64::consts::PI).abs() < 1e-3);
    let g = gauss();
    let box8 = GridSpec::cube(2, &[0.0; 3], 12.0, 384, false).unwrap();
    assert!((lp_norm(&g, 2.0, &box8).unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
    let small = GridSpec::cube(2, &[0.0; 3], 4.0, 64, false).unwrap();
    assert!(lp_norm(&g, 2.0, &small).is_err());
    let sup = lp_norm(&g.translate(&[0.013, 0.0, 0.0]), f64::INFINITY, &box8).unwrap();
    for k in (0..box8.len()).step_by(101) {
        assert!(sup >= g.eval(&box8.point(k)).abs() - 1e-15);
    }
    assert!((sup - 1.0).abs() < 1e-10);
}

#[test]
fn besov_of_interval_indicator() {
    // ‖χ(·+h) − χ‖₁ = 2 min(|h|, 1) gives 4(1/(1−α) + 1/α)
    let chi = indicator_ball(1, [0.5, 0.0, 0.0], 0.5).unwrap();
    let b = besov_seminorm(&chi, 0.5, 1.0, &cfg(), Execution::Parallel).unwrap();
    assert!((b.value - 16.0).abs() < 0.02 * 16.0, "{b:?}");
}

#[test]
fn besov_of_gaussian() {
    let b = besov_seminorm(&gauss(), 0.4, 2.0, &cfg(), Execution::Parallel).unwrap();
    assert!((b.value - BESOV_04_Q2).abs() < 1e-2 * BESOV_04_Q2, "{b:?}");
    assert_eq!(besov_seminorm(&ScalarField::constant(2, 1.0), 0.4, 2.0, &cfg(), Execution::Sequential).unwrap().value, 0.0);
}

#[test]
fn order_outside_range_rejected() {
    assert!(frac_gradient(&gauss(), 1.2, &[0.0; 3], &cfg()).is_err());
    assert!(riesz_potential(&gauss(), 2.5, &[0.0; 3], &cfg()).is_err());
}

fn cheap() -> QuadratureConfig {
    QuadratureConfig { angular_nodes: 24, mid_panels: 10, error_estimate: false, ..QuadratureConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gradient_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, x0 in -1.0f64..1.0, x1 in -1.0f64..1.0) {
        // the combination may take a different quadrature layout, so agreement
        // is up to the summed error estimates
        let c = QuadratureConfig { error_estimate: true, ..cheap() };
        let f = gauss();
        let h = GaussianBump::new(2, [0.3, -0.2, 0.0], 0.7, 1.0).unwrap().field();
        let x = [x0, x1, 0.0];
        let lhs = frac_gradient(&f.linear_combination(a, &h, b), 0.5, &x, &c).unwrap();
        let gf = frac_gradient(&f, 0.5, &x, &c).unwrap();
        let gh = frac_gradient(&h, 0.5, &x, &c).unwrap();
        let tol = lhs.error + a.abs() * gf.error + b.abs() * gh.error + 1e-12;
        for i in 0..2 {
            prop_assert!((lhs.value[i] - (a * gf.value[i] + b * gh.value[i])).abs() <= tol);
        }
    }

    #[test]
    fn gradient_is_homogeneous(lambda in 0.5f64..2.0, alpha in 0.2f64..0.8) {
        // ∇^α[f(λ·)](x) = λ^α (∇^α f)(λx)
        let x = [0.3, 0.2, 0.0];
        let lx = [lambda * 0.3, lambda * 0.2, 0.0];
        let lhs = frac_gradient(&gauss().dilate(lambda), alpha, &x, &cheap()).unwrap().value;
        let rhs = frac_gradient(&gauss(), alpha, &lx, &cheap()).unwrap().value;
        for i in 0..2 {
            prop_assert!((lhs[i] - lambda.powf(alpha) * rhs[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn gradient_commutes_with_translation(v0 in -2.0f64..2.0, v1 in -2.0f64..2.0) {
        let v = [v0, v1, 0.0];
        let x = [0.25, -0.1, 0.0];
        let shifted = fracfield::numerics::point::sub(&x, &v);
        let lhs = frac_gradient(&gauss().translate(&v), 0.6, &x, &cheap()).unwrap().value;
        let rhs = frac_gradient(&gauss(), 0.6, &shifted, &cheap()).unwrap().value;
        for i in 0..2 {
            prop_assert!((lhs[i] - rhs[i]).abs() < 1e-8);
        }
    }
}
