//! The scalar-field abstraction shared by every matrix routine.
//!
//! `f64`, [`Complex64`] and [`Quaternion`] all implement [`Scalar`], so the
//! proximity operators and the PCP solver are written once and run over ℝ,
//! ℂ or ℍ. Only the SVD is field-specific.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::Matrix;
use crate::quaternion::Quaternion;
use crate::svd::{self, SvdResult};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    /// `false` only for ℍ.
    const COMMUTATIVE: bool;
    /// Number of real components per scalar (1, 2 or 4).
    const REAL_DIM: usize;
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn magnitude(self) -> f64;
    fn norm_sqr(self) -> f64;
    fn real_part(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn is_finite(self) -> bool;

    /// `Re(self · conj(other))`, the real inner product of the components.
    fn re_dot(self, other: Self) -> f64;

    /// Embedding into ℍ (ℝ ⊂ ℂ ⊂ ℍ).
    fn to_quaternion(self) -> Quaternion;

    /// Builds a scalar from its first [`Scalar::REAL_DIM`] real components.
    fn from_components(parts: &[f64]) -> Self;

    /// Thin SVD over this field.
    fn thin_svd(a: &Matrix<Self>) -> Result<SvdResult<Self>>;

    /// Nonincreasing singular values.
    fn singular_values(a: &Matrix<Self>) -> Result<Vec<f64>> {
        Ok(Self::thin_svd(a)?.sigma)
    }

    /// Singular triplets with `σ > floor` only.
    fn leading_svd(a: &Matrix<Self>, floor: f64) -> Result<SvdResult<Self>> {
        Ok(Self::thin_svd(a)?.truncated(floor))
    }
}

impl Scalar for f64 {
    const COMMUTATIVE: bool = true;
    const REAL_DIM: usize = 1;
    const NAME: &'static str = "real";

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn real_part(self) -> f64 {
        self
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn re_dot(self, other: Self) -> f64 {
        self * other
    }
    #[inline]
    fn to_quaternion(self) -> Quaternion {
        Quaternion::from_real(self)
    }
    #[inline]
    fn from_components(parts: &[f64]) -> Self {
        parts[0]
    }
    fn thin_svd(a: &Matrix<Self>) -> Result<SvdResult<Self>> {
        svd::real_svd(a)
    }
}

impl Scalar for Complex64 {
    const COMMUTATIVE: bool = true;
    const REAL_DIM: usize = 2;
    const NAME: &'static str = "complex";

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.re.hypot(self.im)
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    #[inline]
    fn real_part(self) -> f64 {
        self.re
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        Complex64::new(self.re * s, self.im * s)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
    #[inline]
    fn re_dot(self, other: Self) -> f64 {
        self.re * other.re + self.im * other.im
    }
    #[inline]
    fn to_quaternion(self) -> Quaternion {
        Quaternion::from_complex(self)
    }
    #[inline]
    fn from_components(parts: &[f64]) -> Self {
        Complex64::new(parts[0], parts[1])
    }
    fn thin_svd(a: &Matrix<Self>) -> Result<SvdResult<Self>> {
        svd::complex_svd(a)
    }
}

impl Scalar for Quaternion {
    const COMMUTATIVE: bool = false;
    const REAL_DIM: usize = 4;
    const NAME: &'static str = "quaternion";

    #[inline]
    fn zero() -> Self {
        Quaternion::ZERO
    }
    #[inline]
    fn one() -> Self {
        Quaternion::ONE
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Quaternion::from_real(x)
    }
    #[inline]
    fn conj(self) -> Self {
        Quaternion::conj(self)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        Quaternion::magnitude(self)
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        Quaternion::norm_sqr(self)
    }
    #[inline]
    fn real_part(self) -> f64 {
        self.re
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        Quaternion::scale(self, s)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Quaternion::is_finite(self)
    }
    #[inline]
    fn re_dot(self, other: Self) -> f64 {
        self.re * other.re + self.i * other.i + self.j * other.j + self.k * other.k
    }
    #[inline]
    fn to_quaternion(self) -> Quaternion {
        self
    }
    #[inline]
    fn from_components(parts: &[f64]) -> Self {
        Quaternion::new(parts[0], parts[1], parts[2], parts[3])
    }
    fn thin_svd(a: &Matrix<Self>) -> Result<SvdResult<Self>> {
        svd::quaternion_svd(a)
    }
    fn singular_values(a: &Matrix<Self>) -> Result<Vec<f64>> {
        svd::quaternion_singular_values(a)
    }
    fn leading_svd(a: &Matrix<Self>, floor: f64) -> Result<SvdResult<Self>> {
        svd::quaternion_leading_svd(a, floor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field<F: Scalar>(samples: &[F]) {
        for &p in samples {
            for &q in samples {
                let lhs = (p * q).magnitude();
                let rhs = p.magnitude() * q.magnitude();
                assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
                let c1 = (p * q).conj();
                let c2 = q.conj() * p.conj();
                assert!((c1 - c2).magnitude() <= 1e-12 * (1.0 + c1.magnitude()));
                assert!((p.re_dot(q) - (p * q.conj()).real_part()).abs() <= 1e-12 * (1.0 + rhs));
                if F::COMMUTATIVE {
                    assert_eq!(p * q, q * p);
                }
            }
        }
    }

    #[test]
    fn field_laws() {
        check_field(&[0.0, -1.5, 2.0, 3.25]);
        check_field(&[
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.25),
            Complex64::new(0.0, -3.0),
        ]);
        check_field(&[
            Quaternion::new(1.0, 2.0, 3.0, 4.0),
            Quaternion::new(-0.5, 0.0, 1.5, -2.0),
            Quaternion::J,
        ]);
    }

    #[test]
    fn commutativity_flags() {
        assert!(f64::COMMUTATIVE);
        assert!(Complex64::COMMUTATIVE);
        assert!(!Quaternion::COMMUTATIVE);
        let (i, j) = (Quaternion::I, Quaternion::J);
        assert_ne!(i * j, j * i);
    }
}
