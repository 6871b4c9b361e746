//! Dense row-major matrices over any [`Scalar`] field.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix with `diag` on the diagonal.
    pub fn from_diagonal(diag: &[F]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[F] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [F] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<F> {
        self.data
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[F]) {
        assert_eq!(values.len(), self.rows);
        for (r, &v) in values.iter().enumerate() {
            self[(r, c)] = v;
        }
    }

    pub fn map<G: Scalar>(&self, f: impl FnMut(F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    /// Entrywise embedding into a larger field (ℝ → ℂ → ℍ).
    pub fn cast<G: Scalar + From<F>>(&self) -> Matrix<G> {
        self.map(G::from)
    }

    pub fn zip_map(&self, other: &Self, mut f: impl FnMut(F, F) -> F) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape(),
                got: other.shape(),
            });
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| x.scale(s))
    }

    /// Matrix product `self · rhs`, with `self`'s entries on the left of each
    /// scalar product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.cols, rhs.cols),
                got: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let lhs_row = &self.data[r * self.cols..(r + 1) * self.cols];
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, &a) in lhs_row.iter().enumerate() {
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)])
    }

    /// `⟨A, B⟩ = Re tr(A·B*)`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a.re_dot(b))
            .sum())
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sqr().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Entrywise ℓ1 norm.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).sum()
    }

    pub fn count_above(&self, threshold: f64) -> usize {
        self.data.iter().filter(|x| x.magnitude() > threshold).count()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &F {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

// The operator forms panic on shape mismatch; use `zip_map`/`matmul` for
// fallible versions.
impl<F: Scalar> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: Self) -> Matrix<F> {
        self.zip_map(rhs, |a, b| a + b).expect("matrix add: shape mismatch")
    }
}

impl<F: Scalar> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: Self) -> Matrix<F> {
        self.zip_map(rhs, |a, b| a - b).expect("matrix sub: shape mismatch")
    }
}

impl<F: Scalar> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: Self) -> Matrix<F> {
        self.matmul(rhs).expect("matrix mul: shape mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;
    use num_complex::Complex64;

    #[test]
    fn rejects_bad_length() {
        assert!(Matrix::<f64>::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn quaternion_identity_inner() {
        let i2 = Matrix::<Quaternion>::identity(2);
        assert_eq!(i2.inner(&i2).unwrap(), 2.0);
    }

    #[test]
    fn inner_shape_mismatch() {
        let a = Matrix::<f64>::zeros(2, 3);
        let b = Matrix::<f64>::zeros(3, 2);
        assert!(matches!(a.inner(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn max_abs_examples() {
        assert_eq!(Matrix::<Quaternion>::zeros(3, 2).max_abs(), 0.0);
        let m = Matrix::new(
            1,
            2,
            vec![Quaternion::new(1.0, 2.0, 3.0, 4.0), Quaternion::ONE],
        )
        .unwrap();
        assert!((m.max_abs() - 30f64.sqrt()).abs() < 1e-15);
        let r = Matrix::new(2, 2, vec![1.0, -7.5, 3.0, 0.0]).unwrap();
        assert_eq!(r.max_abs(), 7.5);
    }

    #[test]
    fn matmul_keeps_operand_order() {
        let a = Matrix::new(1, 1, vec![Quaternion::I]).unwrap();
        let b = Matrix::new(1, 1, vec![Quaternion::J]).unwrap();
        assert_eq!((&a * &b)[(0, 0)], Quaternion::K);
        assert_eq!((&b * &a)[(0, 0)], -Quaternion::K);
    }

    #[test]
    fn inner_is_re_trace_of_product_with_adjoint() {
        let a = Matrix::from_fn(2, 3, |r, c| Complex64::new(r as f64 + 1.0, c as f64 - 1.0));
        let b = Matrix::from_fn(2, 3, |r, c| Complex64::new(c as f64 * 0.5, r as f64 - 2.0));
        let direct = (&a * &b.adjoint()).trace().re;
        assert!((a.inner(&b).unwrap() - direct).abs() < 1e-12);
        assert!((a.inner(&a).unwrap() - a.frobenius_sqr()).abs() < 1e-12);
    }

    #[test]
    fn cast_ladder() {
        let r = Matrix::new(1, 2, vec![1.5, -2.0]).unwrap();
        let c: Matrix<Complex64> = r.cast();
        let q: Matrix<Quaternion> = c.cast();
        assert_eq!(q[(0, 1)], Quaternion::from_real(-2.0));
    }
}
