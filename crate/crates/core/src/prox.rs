//! Proximity operators of the entrywise ℓ1 norm and the trace norm.
//!
//! Both use the `argmin_x ½‖z − x‖² + λ·f(x)` convention, so the ℓ1 prox
//! shrinks every entry's magnitude by `λ` and the trace prox shrinks every
//! singular value by `λ`, over ℝ, ℂ and ℍ alike.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::svd::{leading_svd, singular_values};

/// A validated, strictly positive shrinkage threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxParams {
    threshold: f64,
}

impl ProxParams {
    pub fn new(threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "prox threshold must be positive and finite, got {threshold}"
            )));
        }
        Ok(Self { threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn l1<F: Scalar>(&self, z: &Matrix<F>) -> Matrix<F> {
        prox_l1(z, self.threshold)
    }

    pub fn trace<F: Scalar>(&self, z: &Matrix<F>) -> Result<Matrix<F>> {
        prox_trace(z, self.threshold)
    }
}

/// Real soft-thresholding `S_λ[x]`.
#[inline]
pub fn soft_threshold_real(x: f64, lambda: f64) -> f64 {
    if x > lambda {
        x - lambda
    } else if x < -lambda {
        x + lambda
    } else {
        0.0
    }
}

/// Shrinks a single scalar: `(1 − λ/|z|)₊ · z`, and 0 for `z = 0`.
#[inline]
pub fn shrink<F: Scalar>(z: F, lambda: f64) -> F {
    if F::REAL_DIM == 1 {
        return F::from_real(soft_threshold_real(z.real_part(), lambda));
    }
    let mag = z.magnitude();
    if mag <= lambda {
        F::zero()
    } else {
        z.scale(1.0 - lambda / mag)
    }
}

/// Entrywise ℓ1 prox. Each entry keeps its direction (phase) and loses `λ`
/// of magnitude, clamped at zero.
pub fn prox_l1<F: Scalar>(z: &Matrix<F>, lambda: f64) -> Matrix<F> {
    debug_assert!(lambda >= 0.0);
    z.map(|x| shrink(x, lambda))
}

/// Singular value thresholding `U (Σ − λ)₊ V*`.
pub fn prox_trace<F: Scalar>(z: &Matrix<F>, lambda: f64) -> Result<Matrix<F>> {
    Ok(prox_trace_ranked(z, lambda)?.0)
}

/// [`prox_trace`] that also reports how many singular values survived.
pub fn prox_trace_ranked<F: Scalar>(z: &Matrix<F>, lambda: f64) -> Result<(Matrix<F>, usize)> {
    debug_assert!(lambda >= 0.0);
    let dec = leading_svd(z, lambda)?;
    let shrunk: Vec<f64> = dec.sigma.iter().map(|&s| (s - lambda).max(0.0)).collect();
    let rank = shrunk.iter().filter(|&&s| s > 0.0).count();
    Ok((dec.compose(&shrunk), rank))
}

/// Trace (nuclear) norm, the sum of singular values.
pub fn trace_norm<F: Scalar>(a: &Matrix<F>) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}
