//! Principal component pursuit by the inexact augmented Lagrange multiplier
//! method: `min ‖A‖_* + λ‖E‖₁ s.t. X = A + E`, over ℝ, ℂ or ℍ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::prox::{prox_l1, prox_trace_ranked, trace_norm};
use crate::scalar::Scalar;
use crate::svd::spectral_norm;

/// Entries of `E` above this magnitude count towards `nnz`.
pub const SPARSE_SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Trade-off multiplier: `λ = k / √max(m, n)`.
    pub k: f64,
    /// Initial penalty. `None` selects `1.25 / ‖X‖₂`.
    pub mu0: Option<f64>,
    /// Penalty growth factor per iteration.
    pub rho: f64,
    /// `μ` stops growing at `mu0 · mu_max_ratio`.
    pub mu_max_ratio: f64,
    /// Stop once `‖X − A − E‖_F / ‖X‖_F < tol`.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            mu0: None,
            rho: 1.6,
            mu_max_ratio: 1e7,
            tol: 1e-7,
            max_iters: 1000,
        }
    }
}

impl SolverConfig {
    pub fn with_k(k: f64) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.k > 0.0 && self.k.is_finite()) {
            return bad(format!("k must be positive, got {}", self.k));
        }
        if let Some(mu0) = self.mu0 {
            if !(mu0 > 0.0 && mu0.is_finite()) {
                return bad(format!("mu0 must be positive, got {mu0}"));
            }
        }
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return bad(format!("rho must exceed 1, got {}", self.rho));
        }
        if !(self.mu_max_ratio >= 1.0) {
            return bad(format!("mu_max_ratio must be at least 1, got {}", self.mu_max_ratio));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        Ok(())
    }
}

/// `k / √max(m, n)`.
pub fn lambda_for(shape: (usize, usize), k: f64) -> f64 {
    k / (shape.0.max(shape.1) as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcpSolution<F> {
    /// Low-rank part `A`.
    pub low_rank: Matrix<F>,
    /// Sparse part `E`.
    pub sparse: Matrix<F>,
    pub iterations: usize,
    /// Relative residual `‖X − A − E‖_F / ‖X‖_F` after each iteration.
    pub residuals: Vec<f64>,
    /// Singular values of `A` that survived the last thresholding step.
    pub rank: usize,
    /// Entries of `E` with magnitude above [`SPARSE_SUPPORT_TOL`].
    pub nnz: usize,
    pub converged: bool,
    pub lambda: f64,
}

impl<F: Scalar> PcpSolution<F> {
    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

/// Per-iteration progress passed to the callback of [`pcp_solve_with`].
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub iteration: usize,
    pub residual: f64,
    pub mu: f64,
    pub rank: usize,
}

pub fn pcp_solve<F: Scalar>(x: &Matrix<F>, config: &SolverConfig) -> Result<PcpSolution<F>> {
    pcp_solve_with(x, config, |_| {})
}

/// Runs the IALM iteration
///
/// ```text
/// A ← prox_trace(X − E + Y/μ, 1/μ)
/// E ← prox_l1(X − A + Y/μ, λ/μ)
/// Y ← Y + μ (X − A − E)
/// ```
///
/// starting from `E = 0`, `Y = X / max(‖X‖₂, ‖X‖_∞/λ)`. Hitting `max_iters`
/// is not an error; the returned solution has `converged == false`.
pub fn pcp_solve_with<F: Scalar>(
    x: &Matrix<F>,
    config: &SolverConfig,
    mut progress: impl FnMut(&Progress),
) -> Result<PcpSolution<F>> {
    config.validate()?;
    if x.is_empty() {
        return Err(Error::EmptyInput("PCP input matrix"));
    }
    if !x.is_finite() {
        return Err(Error::InvalidInput("PCP input has non-finite entries".into()));
    }
    let (m, n) = x.shape();
    let lambda = lambda_for((m, n), config.k);
    let x_norm = x.frobenius();
    if x_norm == 0.0 {
        return Ok(PcpSolution {
            low_rank: Matrix::zeros(m, n),
            sparse: Matrix::zeros(m, n),
            iterations: 0,
            residuals: Vec::new(),
            rank: 0,
            nnz: 0,
            converged: true,
            lambda,
        });
    }

    let spec = spectral_norm(x)?;
    let dual_norm = spec.max(x.max_abs() / lambda);
    let mut y = x.scale(1.0 / dual_norm);
    let mut e = Matrix::<F>::zeros(m, n);
    let mut a = Matrix::<F>::zeros(m, n);
    let mut mu = config.mu0.unwrap_or(1.25 / spec);
    let mu_max = mu * config.mu_max_ratio;

    let mut residuals = Vec::new();
    let mut rank = 0;
    let mut converged = false;
    let mut work = Matrix::<F>::zeros(m, n);

    for iteration in 1..=config.max_iters {
        let inv_mu = 1.0 / mu;

        fill(&mut work, x, &e, &y, inv_mu);
        let (next_a, next_rank) = prox_trace_ranked(&work, inv_mu)?;
        a = next_a;
        rank = next_rank;

        fill(&mut work, x, &a, &y, inv_mu);
        e = prox_l1(&work, lambda * inv_mu);

        let mut gap_sqr = 0.0;
        for (((yv, &xv), &av), &ev) in y
            .as_mut_slice()
            .iter_mut()
            .zip(x.as_slice())
            .zip(a.as_slice())
            .zip(e.as_slice())
        {
            let gap = xv - av - ev;
            gap_sqr += gap.norm_sqr();
            *yv += gap.scale(mu);
        }
        let residual = gap_sqr.sqrt() / x_norm;
        residuals.push(residual);
        progress(&Progress {
            iteration,
            residual,
            mu,
            rank,
        });
        mu = (mu * config.rho).min(mu_max);
        if residual < config.tol {
            converged = true;
            break;
        }
    }

    let nnz = e.count_above(SPARSE_SUPPORT_TOL);
    Ok(PcpSolution {
        low_rank: a,
        sparse: e,
        iterations: residuals.len(),
        residuals,
        rank,
        nnz,
        converged,
        lambda,
    })
}

/// `out ← x − minus + y·scale`.
fn fill<F: Scalar>(out: &mut Matrix<F>, x: &Matrix<F>, minus: &Matrix<F>, y: &Matrix<F>, scale: f64) {
    for (((o, &xv), &mv), &yv) in out
        .as_mut_slice()
        .iter_mut()
        .zip(x.as_slice())
        .zip(minus.as_slice())
        .zip(y.as_slice())
    {
        *o = xv - mv + yv.scale(scale);
    }
}

/// `‖A‖_* + λ‖E‖₁`.
pub fn pcp_objective<F: Scalar>(a: &Matrix<F>, e: &Matrix<F>, lambda: f64) -> Result<f64> {
    Ok(trace_norm(a)? + lambda * e.l1_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;

    #[test]
    fn lambda_examples() {
        assert!((lambda_for((100, 100), 1.0) - 0.1).abs() < 1e-15);
        assert_eq!(lambda_for((706, 2584), 1.5), 1.5 / 2584f64.sqrt());
        assert_eq!(lambda_for((30, 7), 3.0), 3.0 / 30f64.sqrt());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        for bad in [
            SolverConfig { k: 0.0, ..Default::default() },
            SolverConfig { rho: 1.0, ..Default::default() },
            SolverConfig { tol: 0.0, ..Default::default() },
            SolverConfig { max_iters: 0, ..Default::default() },
            SolverConfig { mu0: Some(-1.0), ..Default::default() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn zero_input_is_trivial() {
        let x = Matrix::<Quaternion>::zeros(4, 3);
        let sol = pcp_solve(&x, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 0);
        assert_eq!(sol.low_rank, x);
        assert_eq!(sol.sparse, x);
    }

    #[test]
    fn rejects_bad_input() {
        let x = Matrix::new(1, 2, vec![1.0, f64::INFINITY]).unwrap();
        assert!(matches!(
            pcp_solve(&x, &SolverConfig::default()),
            Err(Error::InvalidInput(_))
        ));
        let empty = Matrix::<f64>::zeros(0, 3);
        assert!(matches!(
            pcp_solve(&empty, &SolverConfig::default()),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn rank_one_input_is_all_low_rank() {
        let u: Vec<f64> = (0..20).map(|i| ((i as f64) * 0.7).sin() + 1.2).collect();
        let v: Vec<f64> = (0..15).map(|i| ((i as f64) * 0.3).cos() + 0.4).collect();
        let x = Matrix::from_fn(20, 15, |r, c| u[r] * v[c]);
        let sol = pcp_solve(&x, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert!(sol.sparse.frobenius() / x.frobenius() < 1e-6);
        assert!((&sol.low_rank - &x).frobenius() / x.frobenius() < 1e-6);
    }

    #[test]
    fn non_convergence_is_reported() {
        let x = Matrix::from_fn(6, 5, |r, c| ((r * 5 + c) as f64).sin());
        let cfg = SolverConfig {
            max_iters: 2,
            tol: 1e-300,
            ..Default::default()
        };
        let mut seen = Vec::new();
        let sol = pcp_solve_with(&x, &cfg, |p| seen.push(p.iteration)).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 2);
        assert_eq!(seen, vec![1, 2]);
    }
}
