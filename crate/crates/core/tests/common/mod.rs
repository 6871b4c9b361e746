#![allow(dead_code)]

use qpcp::{Matrix, Quaternion, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scalar<F: Scalar>(rng: &mut ChaCha8Rng) -> F {
    let parts: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    F::from_components(&parts)
}

pub fn matrix<F: Scalar>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<F> {
    Matrix::from_fn(m, n, |_, _| scalar(rng))
}

/// Random matrix of rank at most `r`.
pub fn low_rank<F: Scalar>(rng: &mut ChaCha8Rng, m: usize, n: usize, r: usize) -> Matrix<F> {
    let p = matrix::<F>(rng, m, r);
    let q = matrix::<F>(rng, n, r);
    p.matmul(&q.adjoint()).unwrap()
}

pub fn quat(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<Quaternion> {
    matrix(rng, m, n)
}

/// `‖a − b‖_F / max(‖b‖_F, tiny)`.
pub fn rel_diff<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> f64 {
    (a - b).frobenius() / b.frobenius().max(1e-300)
}

pub fn rel_diff_samples(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den.max(1e-300)).sqrt()
}

/// Largest deviation of `Q*Q` from the identity.
pub fn orthonormality_error<F: Scalar>(q: &Matrix<F>) -> f64 {
    let g = q.adjoint().matmul(q).unwrap();
    let eye = Matrix::<F>::identity(g.rows());
    (&g - &eye).max_abs()
}

pub fn white_noise(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}
