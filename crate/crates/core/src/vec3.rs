//! Minimal 3-vector helpers over `[f64; 3]`.
//!
//! Positions and forces stay as plain arrays throughout the crate; these free
//! functions cover the handful of operations the numerics need.

pub type Vec3 = [f64; 3];

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm2(a: Vec3) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    norm2(a).sqrt()
}

#[inline]
pub fn dist(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

/// Unit vector along `a`. Returns `None` for vectors shorter than `1e-12`.
#[inline]
pub fn normalized(a: Vec3) -> Option<Vec3> {
    let n = norm(a);
    if n < 1e-12 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}
