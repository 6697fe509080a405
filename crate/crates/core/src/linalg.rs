//! Fixed-size vectors and 2x2 matrices used at every grid node.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::scalar::Real;

/// A point or vector in R³.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction. Zero stays zero.
    #[inline]
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n > T::zero() {
            *self / n
        } else {
            *self
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        Vec3::new(
            U::lit(self.x.as_f64()),
            U::lit(self.y.as_f64()),
            U::lit(self.z.as_f64()),
        )
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for Vec3<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Mat2<T> {
    #[inline]
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    #[inline]
    pub fn symmetric(a: T, b: T, d: T) -> Self {
        Self::new(a, b, b, d)
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    #[inline]
    pub fn trace(&self) -> T {
        self.a + self.d
    }

    #[inline]
    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    /// Inverse; the caller guarantees `det != 0`.
    #[inline]
    pub fn inverse(&self) -> Self {
        let det = self.det();
        Self::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    #[inline]
    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    #[inline]
    pub fn mul_mat(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    #[inline]
    pub fn mul_vec(&self, v: [T; 2]) -> [T; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// `vᵀ M v`.
    #[inline]
    pub fn quadratic_form(&self, v: [T; 2]) -> T {
        let mv = self.mul_vec(v);
        v[0] * mv[0] + v[1] * mv[1]
    }

    #[inline]
    pub fn scale(&self, s: T) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    #[inline]
    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    #[inline]
    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    /// `B - (tr B / 2) I`.
    #[inline]
    pub fn traceless(&self) -> Self {
        let half = self.trace() / T::lit(2.0);
        Self::new(self.a - half, self.b, self.c, self.d - half)
    }

    #[inline]
    pub fn frobenius(&self) -> T {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    /// Eigenvalues `(λ₁, λ₂)` with `λ₁ ≥ λ₂`, assuming they are real.
    ///
    /// A slightly negative discriminant (roundoff at umbilic points) is clamped to zero.
    #[inline]
    pub fn real_eigenvalues(&self) -> (T, T) {
        let half_tr = self.trace() / T::lit(2.0);
        let disc = (half_tr * half_tr - self.det()).max(T::zero());
        let root = disc.sqrt();
        (half_tr + root, half_tr - root)
    }
}

/// Values that finite-difference stencils and interpolation can combine linearly.
pub trait Linear<T>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {
    fn zero_value() -> Self;
}

impl<T: Real> Linear<T> for T {
    #[inline]
    fn zero_value() -> Self {
        T::zero()
    }
}

impl<T: Real> Linear<T> for Vec3<T> {
    #[inline]
    fn zero_value() -> Self {
        Vec3::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_right_handed() {
        let e1 = Vec3::new(1.0, 0.0, 0.0);
        let e2 = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(e1.cross(&e2), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn eigenvalues_match_trace_and_det() {
        let m = Mat2::new(2.0_f64, 1.0, 0.5, -1.0);
        let (l1, l2) = m.real_eigenvalues();
        assert!(l1 >= l2);
        assert!((l1 + l2 - m.trace()).abs() < 1e-14);
        assert!((l1 * l2 - m.det()).abs() < 1e-14);
    }

    #[test]
    fn traceless_part_has_zero_trace() {
        let m = Mat2::new(3.0_f64, 1.0, 1.0, 5.0);
        assert_eq!(m.traceless().trace(), 0.0);
        assert_eq!(Mat2::<f64>::identity().traceless(), Mat2::zero());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat2::new(2.0_f64, 0.3, 0.3, 1.5);
        let p = m.mul_mat(&m.inverse());
        assert!((p.a - 1.0).abs() < 1e-15 && p.b.abs() < 1e-15);
        assert!(p.c.abs() < 1e-15 && (p.d - 1.0).abs() < 1e-15);
    }
}
