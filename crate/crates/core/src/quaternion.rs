//! Quaternion scalars `q = re + i·î + j·ĵ + k·k̂` in Cartesian form.
//!
//! Multiplication is the Hamilton product and does not commute. A quaternion
//! can also be written as a pair of complex numbers `q = x + y·ĵ` with
//! `x = re + i·î` and `y = j + k·î`; that representation is what the complex
//! matrix isomorphism and the stereo spectrogram multiplexing build on.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Self { re, i, j, k }
    }

    #[inline]
    pub const fn from_real(re: f64) -> Self {
        Self::new(re, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im, 0.0, 0.0)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.i, -self.j, -self.k)
    }

    /// Sum of squared components.
    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    /// Euclidean magnitude, scaled by the largest component so that values
    /// near `f64::MAX` do not overflow.
    pub fn magnitude(self) -> f64 {
        let scale = self
            .re
            .abs()
            .max(self.i.abs())
            .max(self.j.abs())
            .max(self.k.abs());
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let (a, b, c, d) = (self.re / scale, self.i / scale, self.j / scale, self.k / scale);
        scale * (a * a + b * b + c * c + d * d).sqrt()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.i.is_finite() && self.j.is_finite() && self.k.is_finite()
    }

    /// Splits `q` into `(x, y)` with `q = x + y·ĵ`.
    #[inline]
    pub fn to_complex_pair(self) -> (Complex64, Complex64) {
        (Complex64::new(self.re, self.i), Complex64::new(self.j, self.k))
    }

    /// Inverse of [`Quaternion::to_complex_pair`].
    #[inline]
    pub fn from_complex_pair(x: Complex64, y: Complex64) -> Self {
        Self::new(x.re, x.im, y.re, y.im)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }
}

impl From<f64> for Quaternion {
    fn from(re: f64) -> Self {
        Self::from_real(re)
    }
}

impl From<Complex64> for Quaternion {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.i + rhs.i, self.j + rhs.j, self.k + rhs.k)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.i - rhs.i, self.j - rhs.j, self.k - rhs.k)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.re * q.re - p.i * q.i - p.j * q.j - p.k * q.k,
            p.re * q.i + p.i * q.re + p.j * q.k - p.k * q.j,
            p.re * q.j - p.i * q.k + p.j * q.re + p.k * q.i,
            p.re * q.k + p.i * q.j - p.j * q.i + p.k * q.re,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.re, self.i, self.j, self.k)
    }
}
