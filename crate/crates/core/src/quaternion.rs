use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A quaternion `w + x i + y j + z k` over `f64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Modulus `|q|`.
    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_pure(self) -> bool {
        self.w == 0.0
    }
}

/// Hamilton product. Not commutative: `i * j = k` but `j * i = -k`.
impl Mul for Quaternion {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;

    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Add for Quaternion {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        Self::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_table() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::I * Quaternion::I, Quaternion::real(-1.0));
        assert_eq!(Quaternion::K * Quaternion::K, Quaternion::real(-1.0));
    }

    #[test]
    fn modulus_of_all_ones() {
        assert_eq!(Quaternion::new(1.0, 1.0, 1.0, 1.0).abs(), 2.0);
        assert_eq!(Quaternion::ZERO.abs(), 0.0);
    }

    #[test]
    fn conj_product_is_real_norm() {
        let q = Quaternion::new(0.5, -1.25, 2.0, 3.5);
        let p = q * q.conj();
        assert_eq!(p.x, 0.0);
        assert_eq!(p.y, 0.0);
        assert_eq!(p.z, 0.0);
        assert!((p.w - q.norm_sqr()).abs() < 1e-12);
    }
}
