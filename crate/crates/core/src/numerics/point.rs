//! Points in ℝⁿ, n ≤ 3, stored as `[f64; 3]` with unused trailing
//! coordinates set to zero so that norms and dot products need no
//! dimension argument.

pub type Point = [f64; 3];

pub const ORIGIN: Point = [0.0; 3];

#[inline]
pub fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: &Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// `a + s·b`
#[inline]
pub fn axpy(a: &Point, s: f64, b: &Point) -> Point {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

#[inline]
pub fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm2(a: &Point) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &Point) -> f64 {
    norm2(a).sqrt()
}

#[inline]
pub fn dist2(a: &Point, b: &Point) -> f64 {
    norm2(&sub(a, b))
}

#[inline]
pub fn dist(a: &Point, b: &Point) -> f64 {
    norm(&sub(a, b))
}

/// Build a point from a slice of at most three coordinates.
pub fn from_slice(xs: &[f64]) -> Point {
    let mut p = ORIGIN;
    for (dst, src) in p.iter_mut().zip(xs) {
        *dst = *src;
    }
    p
}

/// Unit vector along axis `i`.
pub fn unit(i: usize) -> Point {
    let mut p = ORIGIN;
    p[i] = 1.0;
    p
}

/// Canonical direction `e₁`.
pub const E1: Point = [1.0, 0.0, 0.0];
