//! n-dimensional complex FFTs by 1-D passes along each axis. Plans are
//! shared through one planner behind a mutex, so concurrent first use of a
//! length is safe.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
    p.plan_fft(len, direction)
}

/// In-place transform of row-major data with the given per-axis counts
/// (last axis fastest). Unnormalised in both directions.
pub(crate) fn transform(data: &mut [Complex64], counts: &[usize], direction: FftDirection) {
    let total: usize = counts.iter().product();
    debug_assert_eq!(total, data.len());
    let dim = counts.len();
    for axis in 0..dim {
        let len = counts[axis];
        let stride: usize = counts[axis + 1..].iter().product();
        let fft = plan(len, direction);
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let mut line = vec![Complex64::default(); len];
        let block = len * stride;
        for outer in 0..total / block {
            for inner in 0..stride {
                let base = outer * block + inner;
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[base + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

pub(crate) fn forward(data: &mut [Complex64], counts: &[usize]) {
    transform(data, counts, FftDirection::Forward);
}

/// Inverse transform including the 1/N normalisation.
pub(crate) fn inverse(data: &mut [Complex64], counts: &[usize]) {
    transform(data, counts, FftDirection::Inverse);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Flat index of the mode −m for the mode with per-axis indices `idx`.
pub(crate) fn mirror(idx: &[usize; 3], counts: &[usize]) -> usize {
    let mut flat = 0;
    for (i, &n) in counts.iter().enumerate() {
        flat = flat * n + (n - idx[i]) % n;
    }
    flat
}

/// Spectra of two real fields from one complex transform of `a + i b`.
pub(crate) fn forward_real_pair(a: &[f64], b: &[f64], counts: &[usize]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut z: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| Complex64::new(*x, *y)).collect();
    forward(&mut z, counts);
    let mut fa = vec![Complex64::default(); z.len()];
    let mut fb = vec![Complex64::default(); z.len()];
    let mut idx = [0usize; 3];
    for flat in 0..z.len() {
        let zc = z[mirror(&idx, counts)].conj();
        fa[flat] = 0.5 * (z[flat] + zc);
        fb[flat] = Complex64::new(0.0, -0.5) * (z[flat] - zc);
        // advance the multi-index, last axis fastest
        for i in (0..counts.len()).rev() {
            idx[i] += 1;
            if idx[i] < counts[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    (fa, fb)
}

pub(crate) fn forward_real(a: &[f64], counts: &[usize]) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = a.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    forward(&mut z, counts);
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_2d() {
        let counts = [8, 16];
        let orig: Vec<Complex64> = (0..128).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let mut d = orig.clone();
        forward(&mut d, &counts);
        inverse(&mut d, &counts);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn matches_direct_dft_1d() {
        let n = 8;
        let x: Vec<f64> = (0..n).map(|k| (k as f64).powi(2) * 0.1 - 1.0).collect();
        let f = forward_real(&x, &[n]);
        for (m, fm) in f.iter().enumerate() {
            let mut s = Complex64::default();
            for (k, xk) in x.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * (m * k) as f64 / n as f64;
                s += xk * Complex64::new(ang.cos(), ang.sin());
            }
            assert!((s - fm).norm() < 1e-12);
        }
    }

    #[test]
    fn real_pair_split() {
        let counts = [4, 8];
        let a: Vec<f64> = (0..32).map(|k| (k as f64 * 0.7).sin()).collect();
        let b: Vec<f64> = (0..32).map(|k| (k as f64 * 1.3).cos() + 0.5).collect();
        let (fa, fb) = forward_real_pair(&a, &b, &counts);
        let (ea, eb) = (forward_real(&a, &counts), forward_real(&b, &counts));
        for k in 0..32 {
            assert!((fa[k] - ea[k]).norm() < 1e-12);
            assert!((fb[k] - eb[k]).norm() < 1e-12);
        }
    }
}
