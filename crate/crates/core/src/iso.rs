//! Isomorphisms from quaternion matrices to complex and real ones.

use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::quaternion::Quaternion;

/// Splits `A` into complex matrices `(X, Y)` with `A = X + Y·ĵ`.
pub fn split_complex(a: &Matrix<Quaternion>) -> (Matrix<Complex64>, Matrix<Complex64>) {
    let x = a.map(|q| q.to_complex_pair().0);
    let y = a.map(|q| q.to_complex_pair().1);
    (x, y)
}

/// Inverse of [`split_complex`]. Panics if the shapes differ.
pub fn join_complex(x: &Matrix<Complex64>, y: &Matrix<Complex64>) -> Matrix<Quaternion> {
    assert_eq!(x.shape(), y.shape(), "join_complex: shape mismatch");
    Matrix::from_fn(x.rows(), x.cols(), |r, c| {
        Quaternion::from_complex_pair(x[(r, c)], y[(r, c)])
    })
}

/// The complex adjoint `χ(A) = [[X, Y], [−conj(Y), conj(X)]]` of an m×n
/// quaternion matrix, a 2m×2n complex matrix.
///
/// χ is an injective ring homomorphism that commutes with the conjugate
/// transpose, so products and adjoints can be computed on either side.
pub fn chi(a: &Matrix<Quaternion>) -> Matrix<Complex64> {
    let (m, n) = a.shape();
    Matrix::from_fn(2 * m, 2 * n, |r, c| {
        let (x, y) = a[(r % m, c % n)].to_complex_pair();
        match (r < m, c < n) {
            (true, true) => x,
            (true, false) => y,
            (false, true) => -y.conj(),
            (false, false) => x.conj(),
        }
    })
}

/// Reads `A` back from the top block row of a 2m×2n complex adjoint.
pub fn chi_inverse(c: &Matrix<Complex64>) -> Matrix<Quaternion> {
    assert!(c.rows() % 2 == 0 && c.cols() % 2 == 0, "chi_inverse: odd shape");
    let (m, n) = (c.rows() / 2, c.cols() / 2);
    Matrix::from_fn(m, n, |r, col| {
        Quaternion::from_complex_pair(c[(r, col)], c[(r, col + n)])
    })
}

/// The real m×4n layout `[Re(A), Im_i(A), Im_j(A), Im_k(A)]`.
pub fn real_embed(a: &Matrix<Quaternion>) -> Matrix<f64> {
    let (m, n) = a.shape();
    Matrix::from_fn(m, 4 * n, |r, c| a[(r, c % n)].to_array()[c / n])
}

/// Inverse of [`real_embed`].
pub fn real_unembed(r: &Matrix<f64>) -> Matrix<Quaternion> {
    assert!(r.cols() % 4 == 0, "real_unembed: column count not a multiple of 4");
    let n = r.cols() / 4;
    Matrix::from_fn(r.rows(), n, |row, c| {
        Quaternion::new(
            r[(row, c)],
            r[(row, c + n)],
            r[(row, c + 2 * n)],
            r[(row, c + 3 * n)],
        )
    })
}
