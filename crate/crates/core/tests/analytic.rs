use fracfield::analytic::{
    cantor_dimension, cantor_measure, cutoff_annulus, grad_chi_ball, grad_cutoff_annulus, loglog_slope, mollified_indicator,
    ConvolvedField, DeltaPairField, GaussianBump, MollifiedDeltaPair,
};
use fracfield::numerics::measure::measure_ball_mass;
use fracfield::numerics::point::{dist, norm, scale, sub};
use fracfield::numerics::{mu_const, omega_const};
use fracfield::quadrature::{frac_gradient, QuadratureConfig};
use fracfield::{Point, RadonMeasure};
use proptest::prelude::*;

fn close(a: &Point, b: &Point, rel: f64) -> bool {
    dist(a, b) <= rel * norm(b)
}

#[test]
fn pair_is_antisymmetric_in_its_poles() {
    let p = DeltaPairField::new(2, [0.3, 0.1, 0.0], [-0.4, 0.2, 0.0], 0.6).unwrap();
    let q = p.swapped();
    for x in [[0.0, 0.0, 0.0], [1.0, -2.0, 0.0], [0.31, 0.1, 0.0]] {
        let (a, b) = (p.eval(&x), q.eval(&x));
        assert!((a[0] + b[0]).abs() < 1e-14 && (a[1] + b[1]).abs() < 1e-14);
    }
}

#[test]
fn pair_blows_up_like_the_kernel() {
    let y = [0.3, 0.1, 0.0];
    let p = DeltaPairField::new(2, y, [-0.4, 0.2, 0.0], 0.5).unwrap();
    for t in [1e-3, 1e-5] {
        let x = [0.3 + t, 0.1, 0.0];
        let ratio = norm(&p.eval(&x)) * t.powf(2.0 - 0.5) / p.constant();
        assert!((ratio - 1.0).abs() < 20.0 * t, "t = {t}: {ratio}");
    }
}

#[test]
fn pair_integrability_range() {
    let p = DeltaPairField::new(2, [0.0; 3], [1.0, 0.0, 0.0], 0.5).unwrap();
    let r = p.lp_range();
    assert!(r.contains(1.2));
    assert!(!r.contains(1.5));
}

#[test]
fn convolution_with_single_atom_is_the_pair() {
    let nu = RadonMeasure::from_atoms(2, vec![([0.0; 3], 1.0)]).unwrap();
    let g = ConvolvedField::new(&nu, 0.6).unwrap();
    let pair = DeltaPairField::new(2, [0.0; 3], [1.0, 0.0, 0.0], 0.6).unwrap();
    for x in [[0.3, 0.4, 0.0], [-2.0, 1.0, 0.0], [0.9, -0.05, 0.0]] {
        assert!(close(&g.eval(&x), &pair.eval(&x), 1e-14));
    }
}

#[test]
fn convolution_is_linear_in_the_measure() {
    let w = [0.2, 0.7, 0.0];
    let nu = RadonMeasure::from_atoms(2, vec![([0.0; 3], 1.0), (w, 1.0)]).unwrap();
    let g = ConvolvedField::new(&nu, 0.4).unwrap();
    let a = DeltaPairField::new(2, [0.0; 3], [1.0, 0.0, 0.0], 0.4).unwrap();
    let b = DeltaPairField::new(2, w, [1.2, 0.7, 0.0], 0.4).unwrap();
    let x = [0.5, -0.3, 0.0];
    let sum = [a.eval(&x)[0] + b.eval(&x)[0], a.eval(&x)[1] + b.eval(&x)[1], 0.0];
    assert!(close(&g.eval(&x), &sum, 1e-14));
    assert_eq!(g.divergence_measure().atoms().len(), 4);
    assert!(g.divergence_measure().total_mass().abs() < 1e-15);
}

#[test]
fn cantor_counts() {
    let mu = cantor_measure(8, 1).unwrap();
    assert!((mu.total_mass() - 1.0).abs() < 1e-14);
    assert_eq!(measure_ball_mass(&RadonMeasure::empty(1), &[0.0; 3], 1.0), 0.0);
    for j in 1..6 {
        let r = 3f64.powi(-j);
        let m = measure_ball_mass(&mu, &[0.0; 3], r);
        assert!((m - 2f64.powi(-j)).abs() <= 2f64.powi(-8), "j = {j}: {m}");
    }
    let k = 10;
    let mu = cantor_measure(k, 2).unwrap();
    let radii: Vec<f64> = (0..k as i32).map(|j| 3f64.powi(-j) * 1.0001).collect();
    let masses: Vec<f64> = radii.iter().map(|r| measure_ball_mass(&mu, &[0.0; 3], *r)).collect();
    assert!((loglog_slope(&radii, &masses) - cantor_dimension()).abs() < 0.05);
    assert!(cantor_measure(13, 1).is_err());
}

#[test]
fn indicator_gradient_vanishes_at_the_centre() {
    let g = grad_chi_ball(2, 1.0, &[0.2, 0.1, 0.0], 0.5, &[0.2, 0.1, 0.0], 16).unwrap();
    assert_eq!(g.value, [0.0; 3]);
}

#[test]
fn indicator_gradient_far_field() {
    let (r, alpha) = (0.5, 0.4);
    for dim in [1usize, 2, 3] {
        let x0 = [0.1, 0.0, 0.0];
        let y = [0.1 + 50.0 * r * 0.6, 50.0 * r * 0.8 * (dim > 1) as u8 as f64, 0.0];
        let g = grad_chi_ball(dim, r, &x0, alpha, &y, 16).unwrap().value;
        let d = dist(&y, &x0);
        let mag = mu_const(dim, alpha).unwrap() * omega_const(dim as f64).unwrap() * r.powi(dim as i32) * d.powf(-(dim as f64) - alpha);
        let want = scale(&sub(&x0, &y), mag / d);
        assert!(close(&g, &want, 0.05), "n = {dim}: {g:?} vs {want:?}");
    }
}

#[test]
fn indicator_gradient_against_mollified_indicator() {
    let (r, alpha) = (1.0, 0.5);
    let x0 = [0.0; 3];
    let cfg = QuadratureConfig::default();
    let smooth = mollified_indicator(2, x0, r, r / 50.0).unwrap();
    for y in [[0.3, 0.2, 0.0], [0.0, 0.7, 0.0], [1.2, 0.0, 0.0], [-1.0, 1.0, 0.0], [2.5, -1.5, 0.0]] {
        let want = grad_chi_ball(2, r, &x0, alpha, &y, 24).unwrap().value;
        let got = frac_gradient(&smooth, alpha, &y, &cfg).unwrap().value;
        assert!(close(&got, &want, 0.02), "{y:?}: {got:?} vs {want:?}");
    }
}

#[test]
fn annulus_cutoff_tends_to_the_indicator() {
    let (r, alpha) = (1.0, 0.5);
    let x = [0.0; 3];
    let cfg = QuadratureConfig::default();
    for y in [[0.4, 0.3, 0.0], [1.6, 0.2, 0.0]] {
        let g: Vec<Point> = [8.0, 16.0, 32.0]
            .iter()
            .map(|k| grad_cutoff_annulus(2, r / k, r, &x, alpha, &y, &cfg).unwrap())
            .collect();
        // first-order in ε: Richardson on the two finest
        let extrap = [2.0 * g[2][0] - g[1][0], 2.0 * g[2][1] - g[1][1], 0.0];
        let want = grad_chi_ball(2, r, &x, alpha, &y, 24).unwrap().value;
        assert!(close(&extrap, &want, 0.01), "{y:?}: {extrap:?} vs {want:?}");
    }
}

#[test]
fn annulus_cutoff_against_direct_quadrature() {
    let (r, eps, alpha) = (1.0, 0.25, 0.5);
    let x = [0.0; 3];
    let cfg = QuadratureConfig::default();
    let h = cutoff_annulus(2, x, r, eps).unwrap();
    for y in [[0.5, 0.0, 0.0], [1.1, 0.3, 0.0], [2.0, -1.0, 0.0]] {
        let want = grad_cutoff_annulus(2, eps, r, &x, alpha, &y, &cfg).unwrap();
        let got = frac_gradient(&h, alpha, &y, &cfg).unwrap().value;
        assert!(close(&got, &want, 0.02), "{y:?}: {got:?} vs {want:?}");
    }
}

#[test]
fn mollified_pair_density() {
    let pair = DeltaPairField::new(2, [0.3, 0.1, 0.0], [-0.4, 0.2, 0.0], 0.6).unwrap();
    let m = MollifiedDeltaPair::new(&pair, 0.3).unwrap();
    let peak = fracfield::numerics::smooth::Mollifier::new(2, 0.3).unwrap().peak();
    assert!((m.divergence_density(&[0.3, 0.1, 0.0]) - peak).abs() < 1e-12);
    assert_eq!(m.divergence_density(&[2.0, 2.0, 0.0]), 0.0);
    // far from both poles the mollified field approaches the pair
    let x = [6.0, -3.0, 0.0];
    assert!(close(&m.eval(&x), &pair.eval(&x), 1e-2));
}

#[test]
fn gaussian_closed_forms_are_consistent() {
    // ∇^α at α → 1 approaches the classical gradient
    let g = GaussianBump::standard(2);
    let x = [0.3, -0.2, 0.0];
    let near_one = g.frac_gradient(0.999, &x).unwrap();
    assert!(close(&near_one, &g.gradient(&x), 5e-3));
    assert!((g.lp_norm(2.0) - 0.5f64.sqrt()).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_poles_negates(y0 in -1.0f64..1.0, y1 in -1.0f64..1.0, x0 in -2.0f64..2.0, x1 in -2.0f64..2.0, alpha in 0.1f64..0.9) {
        let p = DeltaPairField::new(2, [y0, y1, 0.0], [y1, -y0 + 0.5, 0.0], alpha);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let x = [x0, x1, 0.0];
        let (a, b) = (p.eval(&x), p.swapped().eval(&x));
        prop_assume!(a.iter().all(|v| v.is_finite()));
        prop_assert!((a[0] + b[0]).abs() <= 1e-12 * (1.0 + a[0].abs()));
        prop_assert!((a[1] + b[1]).abs() <= 1e-12 * (1.0 + a[1].abs()));
    }

    #[test]
    fn indicator_gradient_points_inward_outside(t in 1.05f64..5.0, phi in 0.0f64..6.0, alpha in 0.1f64..0.9) {
        let y = [t * phi.cos(), t * phi.sin(), 0.0];
        let g = grad_chi_ball(2, 1.0, &[0.0; 3], alpha, &y, 16).unwrap().value;
        prop_assert!(g[0] * y[0] + g[1] * y[1] < 0.0);
    }
}
