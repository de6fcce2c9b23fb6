//! Fixed-size real and complex 3-vectors used for wavevectors, polarization
//! vectors, and dipole moments.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];

pub const ZERO_C: CVec3 = [Complex64::ZERO, Complex64::ZERO, Complex64::ZERO];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn normalize(a: Vec3) -> Result<Vec3> {
    let n = norm(a);
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::Domain(format!(
            "cannot normalize vector with norm {n}"
        )));
    }
    Ok(scale(1.0 / n, a))
}

/// Promote a real vector to a complex one.
pub fn lift(a: Vec3) -> CVec3 {
    [a[0].into(), a[1].into(), a[2].into()]
}

/// Bilinear dot product `sum_i a_i b_i` (no conjugation).
pub fn bilinear(a: CVec3, b: CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hermitian inner product `sum_i conj(a_i) b_i`.
pub fn hermitian(a: CVec3, b: CVec3) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

pub fn conj3(a: CVec3) -> CVec3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

pub fn cnorm(a: CVec3) -> f64 {
    hermitian(a, a).re.sqrt()
}

pub fn cscale(s: Complex64, a: CVec3) -> CVec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn cadd(a: CVec3, b: CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Cross product of a real vector with a complex one.
pub fn cross_rc(a: Vec3, b: CVec3) -> CVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        assert_eq!(cross([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), [0.0, 0.0, 1.0]);
        assert_eq!(cross([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn normalize_rejects_zero() {
        assert!(normalize([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn hermitian_conjugates_left_argument() {
        let i = Complex64::i();
        let a = [i, Complex64::ZERO, Complex64::ZERO];
        assert_eq!(hermitian(a, a).re, 1.0);
        assert_eq!(bilinear(a, a), -Complex64::ONE);
    }
}
