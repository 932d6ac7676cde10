//! Angular rules on S^{n−1}.
//!
//! All rules contain antipodal pairs, so the half rules used with
//! symmetrised integrands integrate `g(θ) + g(−θ)` over a half sphere.

use std::f64::consts::PI;

use crate::numerics::gauss::GaussRule;
use crate::numerics::point::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub dirs: Vec<Point>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Full-sphere rule. `m` is the number of circle nodes (n = 2) or the
    /// azimuthal count (n = 3, with m/2 Gauss nodes in the polar cosine).
    pub fn full(dim: usize, m: usize) -> Self {
        let half = Self::half(dim, m);
        let mut dirs = half.dirs.clone();
        let mut weights = half.weights.clone();
        for (d, w) in half.dirs.iter().zip(&half.weights) {
            dirs.push([-d[0], -d[1], -d[2]]);
            weights.push(*w);
        }
        SphereRule { dirs, weights }
    }

    /// Half of the full rule: one representative of each antipodal pair.
    pub fn half(dim: usize, m: usize) -> Self {
        match dim {
            1 => SphereRule { dirs: vec![[1.0, 0.0, 0.0]], weights: vec![1.0] },
            2 => {
                let m = m.max(4) & !1;
                let w = 2.0 * PI / m as f64;
                let dirs = (0..m / 2)
                    .map(|j| {
                        let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                        [phi.cos(), phi.sin(), 0.0]
                    })
                    .collect();
                SphereRule { dirs, weights: vec![w; m / 2] }
            }
            _ => {
                let m = m.max(4) & !1;
                let polar = GaussRule::new((m / 2).max(2));
                let waz = 2.0 * PI / m as f64;
                let mut dirs = Vec::new();
                let mut weights = Vec::new();
                for (z, wz) in polar.nodes.iter().zip(&polar.weights) {
                    let s = (1.0 - z * z).max(0.0).sqrt();
                    for j in 0..m / 2 {
                        let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                        dirs.push([s * phi.cos(), s * phi.sin(), *z]);
                        weights.push(wz * waz);
                    }
                }
                SphereRule { dirs, weights }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::sphere_area;

    #[test]
    fn total_weight_is_sphere_area() {
        for dim in 1..=3 {
            let full = SphereRule::full(dim, 16);
            let s: f64 = full.weights.iter().sum();
            assert!((s - sphere_area(dim)).abs() < 1e-12, "dim {dim}");
            let h: f64 = SphereRule::half(dim, 16).weights.iter().sum();
            assert!((2.0 * h - sphere_area(dim)).abs() < 1e-12);
        }
    }

    #[test]
    fn second_moments() {
        // ∫ θ_i θ_j = δ_ij |S|/n
        for dim in 2..=3 {
            let r = SphereRule::full(dim, 24);
            for i in 0..dim {
                for j in 0..dim {
                    let v: f64 = r.dirs.iter().zip(&r.weights).map(|(d, w)| w * d[i] * d[j]).sum();
                    let e = if i == j { sphere_area(dim) / dim as f64 } else { 0.0 };
                    assert!((v - e).abs() < 1e-12);
                }
            }
        }
    }
}
