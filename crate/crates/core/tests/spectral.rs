use fracfield::analytic::{DeltaPairField, GaussianBump};
use fracfield::spectral::{self, PeriodicField};
use fracfield::verify::band_limited;
use fracfield::GridSpec;
use proptest::prelude::*;

const TAU: f64 = std::f64::consts::TAU;

fn torus(dim: usize, n: usize) -> GridSpec {
    GridSpec::cube(dim, &[0.0; 3], TAU, n, true).unwrap()
}

#[test]
fn single_mode_gradient_matches_closed_form() {
    // f = cos(2x + 3y): ∇^α f = −ω|ω|^{α−1} sin(ω·x)
    let alpha = 0.4;
    let w = [2.0, 3.0];
    let f = PeriodicField::sample(torus(2, 32), |x| (w[0] * x[0] + w[1] * x[1]).cos()).unwrap();
    let g = spectral::spectral_frac_gradient(&f, alpha).unwrap();
    let r = (13.0f64).sqrt().powf(alpha - 1.0);
    for k in (0..f.spec().len()).step_by(37) {
        let x = f.spec().point(k);
        let s = (w[0] * x[0] + w[1] * x[1]).sin();
        assert!((g.component(0)[k] + w[0] * r * s).abs() < 1e-12);
        assert!((g.component(1)[k] + w[1] * r * s).abs() < 1e-12);
    }
}

#[test]
fn potential_of_mode() {
    let f = PeriodicField::sample(torus(1, 16), |x| (3.0 * x[0]).sin()).unwrap();
    let p = spectral::spectral_riesz_potential(&f, 0.5).unwrap();
    for k in 0..16 {
        let x = f.spec().point(k);
        assert!((p.component(0)[k] - (3.0 * x[0]).sin() / 3f64.sqrt()).abs() < 1e-13);
    }
}

#[test]
fn constant_maps_to_zero() {
    let f = PeriodicField::sample(torus(2, 16), |_| 2.5).unwrap();
    assert!(spectral::spectral_frac_gradient(&f, 0.5).unwrap().max_abs() < 1e-13);
    assert!(spectral::spectral_riesz_transform(&f).unwrap().max_abs() < 1e-13);
}

#[test]
fn gradient_divergence_duality() {
    let f = band_limited(2, TAU, 32, 8, 1).unwrap();
    let a = band_limited(2, TAU, 32, 8, 2).unwrap();
    let b = band_limited(2, TAU, 32, 8, 3).unwrap();
    let v = PeriodicField::new(f.spec().clone(), vec![a.component(0).to_vec(), b.component(0).to_vec()]).unwrap();
    for alpha in [0.3, 0.5, 0.7] {
        let lhs = spectral::spectral_frac_gradient(&f, alpha).unwrap().inner(&v).unwrap();
        let rhs = -f.inner(&spectral::spectral_frac_divergence(&v, alpha).unwrap()).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }
}

#[test]
fn riesz_squares_sum_to_minus_identity() {
    let f = band_limited(3, TAU, 16, 10, 5).unwrap();
    let rf = spectral::spectral_riesz_transform(&f).unwrap();
    let mut sum = vec![0.0; f.spec().len()];
    for i in 0..3 {
        let c = PeriodicField::scalar(f.spec().clone(), rf.component(i).to_vec()).unwrap();
        let rr = spectral::spectral_riesz_transform(&c).unwrap();
        for (s, v) in sum.iter_mut().zip(rr.component(i)) {
            *s += v;
        }
    }
    for (s, v) in sum.iter().zip(f.component(0)) {
        assert!((s + v).abs() < 1e-12);
    }
}

#[test]
fn factorization_through_potential() {
    let f = band_limited(2, TAU, 32, 6, 9).unwrap();
    let lhs = spectral::spectral_frac_gradient(&f, 0.6).unwrap();
    let rhs = spectral::spectral_gradient(&spectral::spectral_riesz_potential(&f, 0.4).unwrap()).unwrap();
    assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * lhs.max_abs());
}

#[test]
fn embedding_accepts_gaussian_and_rejects_pair() {
    let g = GaussianBump::standard(2).field();
    assert!(spectral::embed(&g, 16.0, 64).is_ok());
    assert!(spectral::embed(&g, 4.0, 64).is_err());
    assert!(spectral::embed(&g, 16.0, 48).is_err());
    let pair = DeltaPairField::new(2, [0.3, 0.0, 0.0], [-0.3, 0.0, 0.0], 0.5).unwrap();
    let err = spectral::embed_vector(&pair.field(), 16.0, 64).unwrap_err();
    assert!(err.to_string().contains("spectral engine requires smooth field"), "{err}");
}

#[test]
fn order_out_of_range_rejected() {
    let f = band_limited(1, TAU, 16, 2, 1).unwrap();
    assert!(spectral::spectral_frac_gradient(&f, 1.5).is_err());
    assert!(spectral::spectral_riesz_potential(&f, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn semigroup_any_orders(a in 0.05f64..0.9, b in 0.05f64..0.9, seed in 0u64..1000) {
        let f = band_limited(2, TAU, 16, 5, seed).unwrap();
        let lhs = spectral::spectral_riesz_potential(&spectral::spectral_riesz_potential(&f, b).unwrap(), a).unwrap();
        let rhs = spectral::spectral_riesz_potential(&f, a + b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * rhs.max_abs().max(1e-300));
    }

    #[test]
    fn gradient_is_linear(s in -3.0f64..3.0, seed in 0u64..1000, alpha in 0.1f64..0.9) {
        let f = band_limited(2, TAU, 16, 4, seed).unwrap();
        let h = band_limited(2, TAU, 16, 4, seed + 1).unwrap();
        let sum = PeriodicField::scalar(
            f.spec().clone(),
            f.component(0).iter().zip(h.component(0)).map(|(a, b)| a + s * b).collect(),
        ).unwrap();
        let gs = spectral::spectral_frac_gradient(&sum, alpha).unwrap();
        let gf = spectral::spectral_frac_gradient(&f, alpha).unwrap();
        let gh = spectral::spectral_frac_gradient(&h, alpha).unwrap();
        for j in 0..2 {
            for k in 0..f.spec().len() {
                let want = gf.component(j)[k] + s * gh.component(j)[k];
                prop_assert!((gs.component(j)[k] - want).abs() < 1e-11);
            }
        }
    }
}
