//! Thin singular value decompositions over ℝ, ℂ and ℍ.
//!
//! Real and complex matrices go straight to a dense bidiagonalization SVD.
//! A quaternion matrix `A` is decomposed through its complex adjoint `χ(A)`:
//! every singular value of `A` shows up twice in `χ(A)`, and a complex left
//! singular vector `[w1; w2]` of `χ(A)` maps back to the quaternion vector
//! `w1 − conj(w2)·ĵ` (likewise for the right vectors). Degenerate pairs are
//! resolved with a pivoted quaternion Gram–Schmidt inside each cluster of
//! equal singular values.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{self as faer_svd, ComputeSvdVectors};
use faer::traits::ComplexField;
use faer::{Mat, Par};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::iso::chi;
use crate::matrix::Matrix;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

/// `A = U · diag(sigma) · V*` with `U` m×r, `V` n×r, `r = min(m, n)`, and
/// `sigma` nonincreasing and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult<F> {
    pub u: Matrix<F>,
    pub sigma: Vec<f64>,
    pub v: Matrix<F>,
}

impl<F: Scalar> SvdResult<F> {
    /// `U · diag(weights) · V*`, where `weights` replaces the singular values.
    pub fn compose(&self, weights: &[f64]) -> Matrix<F> {
        assert_eq!(weights.len(), self.sigma.len());
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = Matrix::zeros(m, n);
        for (t, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for r in 0..m {
                let left = self.u[(r, t)].scale(w);
                for c in 0..n {
                    out[(r, c)] += left * self.v[(c, t)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<F> {
        self.compose(&self.sigma)
    }

    /// Number of singular values strictly above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.sigma.iter().filter(|&&s| s > tol).count()
    }
}

/// Thin SVD of `a`. Non-finite entries are rejected.
pub fn svd<F: Scalar>(a: &Matrix<F>) -> Result<SvdResult<F>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    F::thin_svd(a)
}

/// The singular triplets of `a` with `σ > floor`, in nonincreasing order.
/// `u` and `v` have one column per returned value.
pub fn leading_svd<F: Scalar>(a: &Matrix<F>, floor: f64) -> Result<SvdResult<F>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    F::leading_svd(a, floor)
}

impl<F: Scalar> SvdResult<F> {
    /// Keeps the leading triplets with `σ > floor`.
    pub fn truncated(self, floor: f64) -> Self {
        let p = self.rank(floor);
        if p == self.sigma.len() {
            return self;
        }
        let SvdResult { u, mut sigma, v } = self;
        sigma.truncate(p);
        SvdResult {
            u: Matrix::from_fn(u.rows(), p, |i, j| u[(i, j)]),
            sigma,
            v: Matrix::from_fn(v.rows(), p, |i, j| v[(i, j)]),
        }
    }
}

/// Nonincreasing singular values of `a`.
pub fn singular_values<F: Scalar>(a: &Matrix<F>) -> Result<Vec<f64>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    F::singular_values(a)
}

/// Size above which [`spectral_norm`] switches to power iteration.
const DIRECT_SPECTRAL_LIMIT: usize = 512;

/// Largest singular value. Uses a full SVD for `min(m, n) ≤ 512` and power
/// iteration on `A*A` (relative tolerance 1e-8, at most 1000 steps) beyond.
pub fn spectral_norm<F: Scalar>(a: &Matrix<F>) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    if a.rows().min(a.cols()) <= DIRECT_SPECTRAL_LIMIT {
        return Ok(singular_values(a)?[0]);
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(power_iteration(a, 1e-8, 1000))
}

fn matvec<F: Scalar>(a: &Matrix<F>, x: &[F]) -> Vec<F> {
    (0..a.rows())
        .map(|r| {
            a.as_slice()[r * a.cols()..(r + 1) * a.cols()]
                .iter()
                .zip(x)
                .fold(F::zero(), |acc, (&aij, &xj)| acc + aij * xj)
        })
        .collect()
}

fn adjoint_matvec<F: Scalar>(a: &Matrix<F>, y: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); a.cols()];
    for (r, &yr) in y.iter().enumerate() {
        for (o, &arc) in out.iter_mut().zip(&a.as_slice()[r * a.cols()..(r + 1) * a.cols()]) {
            *o += arc.conj() * yr;
        }
    }
    out
}

fn vec_norm<F: Scalar>(x: &[F]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn power_iteration<F: Scalar>(a: &Matrix<F>, tol: f64, max_iters: usize) -> f64 {
    let n = a.cols();
    // Deterministic, non-symmetric start so it is unlikely to be orthogonal
    // to the top singular vector.
    let mut x: Vec<F> = (0..n)
        .map(|i| F::from_real(1.0 + 0.5 * ((i as f64) * 0.618_033_988_749_895).fract()))
        .collect();
    let nx = vec_norm(&x);
    x.iter_mut().for_each(|v| *v = v.scale(1.0 / nx));
    let mut estimate = 0.0;
    for _ in 0..max_iters {
        let ax = matvec(a, &x);
        let sigma = vec_norm(&ax);
        if sigma == 0.0 {
            return 0.0;
        }
        let mut next = adjoint_matvec(a, &ax);
        let norm = vec_norm(&next);
        next.iter_mut().for_each(|v| *v = v.scale(1.0 / norm));
        x = next;
        if (sigma - estimate).abs() <= tol * sigma {
            return sigma;
        }
        estimate = sigma;
    }
    estimate
}

/// Dense thin SVD through faer, single-threaded so results are reproducible.
fn faer_thin_svd<T: ComplexField>(a: Mat<T>) -> Result<(Mat<T>, Vec<T>, Mat<T>)> {
    let (m, n) = a.shape();
    let size = m.min(n);
    let mut u = Mat::<T>::zeros(m, size);
    let mut v = Mat::<T>::zeros(n, size);
    let mut s = faer::diag::Diag::<T>::zeros(size);
    let par = Par::Seq;
    let mut buffer = MemBuffer::new(faer_svd::svd_scratch::<T>(
        m,
        n,
        ComputeSvdVectors::Thin,
        ComputeSvdVectors::Thin,
        par,
        Default::default(),
    ));
    faer_svd::svd(
        a.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        Some(v.as_mut()),
        par,
        MemStack::new(&mut buffer),
        Default::default(),
    )
    .map_err(|_| Error::SvdNoConvergence)?;
    let s = s.column_vector().iter().cloned().collect();
    Ok((u, s, v))
}

fn empty_svd<F: Scalar>(m: usize, n: usize) -> SvdResult<F> {
    SvdResult {
        u: Matrix::zeros(m, 0),
        sigma: Vec::new(),
        v: Matrix::zeros(n, 0),
    }
}

pub(crate) fn real_svd(a: &Matrix<f64>) -> Result<SvdResult<f64>> {
    with_retries(a, real_svd_once)
}

pub(crate) fn complex_svd(a: &Matrix<Complex64>) -> Result<SvdResult<Complex64>> {
    with_retries(a, complex_svd_once)
}

/// The bidiagonal QR iteration occasionally stalls on matrices with exactly
/// repeated singular values. On failure the input is multiplied on the right
/// by a Householder reflector `H`, which leaves the singular values alone,
/// and the right vectors are mapped back through `H`.
fn with_retries<F: Scalar>(
    a: &Matrix<F>,
    once: fn(&Matrix<F>) -> Result<SvdResult<F>>,
) -> Result<SvdResult<F>> {
    match once(a) {
        Err(Error::SvdNoConvergence) if a.cols() > 1 => {}
        other => return other,
    }
    for attempt in 1..=3 {
        let h = reflector::<F>(a.cols(), attempt);
        match once(&a.matmul(&h)?) {
            Err(Error::SvdNoConvergence) => continue,
            Err(e) => return Err(e),
            Ok(mut dec) => {
                dec.v = h.matmul(&dec.v)?;
                return Ok(dec);
            }
        }
    }
    Err(Error::SvdNoConvergence)
}

/// `I − 2ww*/‖w‖²` for a fixed pseudo-random `w`.
fn reflector<F: Scalar>(n: usize, attempt: usize) -> Matrix<F> {
    let golden = 0.618_033_988_749_895;
    let w: Vec<f64> = (0..n)
        .map(|i| 0.5 + ((i * attempt + attempt) as f64 * golden).fract())
        .collect();
    let norm_sqr: f64 = w.iter().map(|x| x * x).sum();
    Matrix::from_fn(n, n, |r, c| {
        let delta = if r == c { 1.0 } else { 0.0 };
        F::from_real(delta - 2.0 * w[r] * w[c] / norm_sqr)
    })
}

fn real_svd_once(a: &Matrix<f64>) -> Result<SvdResult<f64>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(empty_svd(m, n));
    }
    let (u, s, v) = faer_thin_svd(Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]))?;
    Ok(SvdResult {
        u: Matrix::from_fn(m, s.len(), |i, j| u[(i, j)]),
        sigma: s.into_iter().map(|x| x.max(0.0)).collect(),
        v: Matrix::from_fn(n, v.ncols(), |i, j| v[(i, j)]),
    })
}

fn complex_svd_once(a: &Matrix<Complex64>) -> Result<SvdResult<Complex64>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(empty_svd(m, n));
    }
    let (u, s, v) = faer_thin_svd(Mat::<Complex64>::from_fn(m, n, |i, j| a[(i, j)]))?;
    Ok(SvdResult {
        u: Matrix::from_fn(m, s.len(), |i, j| u[(i, j)]),
        sigma: s.into_iter().map(|x| x.re.max(0.0)).collect(),
        v: Matrix::from_fn(n, v.ncols(), |i, j| v[(i, j)]),
    })
}

// Consecutive singular values of χ(A) closer than this (relative to the
// largest) are treated as one degenerate cluster.
const CLUSTER_TOL: f64 = 1e-10;
// Values at or below this (relative) are treated as numerically zero.
const NULL_TOL: f64 = 1e-12;
// Accepted vectors whose singular values differ from a candidate's by more
// than this (relative) are orthogonal to it up to rounding and are skipped
// during projection.
const PROJECTION_WINDOW: f64 = 1e-4;
// Smallest residual norm for a candidate to count as a new direction.
const MIN_RESIDUAL: f64 = 1e-6;

/// `u*·w` for quaternion column vectors.
fn qdot(u: &[Quaternion], w: &[Quaternion]) -> Quaternion {
    u.iter()
        .zip(w)
        .fold(Quaternion::ZERO, |acc, (&a, &b)| acc + a.conj() * b)
}

/// `x ← x − y·c`.
fn qaxpy(x: &mut [Quaternion], y: &[Quaternion], c: Quaternion) {
    for (xi, &yi) in x.iter_mut().zip(y) {
        *xi -= yi * c;
    }
}

fn qnorm(x: &[Quaternion]) -> f64 {
    x.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Quaternion vector whose complex adjoint has `[top; bottom]` as first column.
fn from_adjoint_column(col: &[Complex64]) -> Vec<Quaternion> {
    let half = col.len() / 2;
    (0..half)
        .map(|i| Quaternion::from_complex_pair(col[i], -col[i + half].conj()))
        .collect()
}

struct Basis {
    vectors: Vec<Vec<Quaternion>>,
    sigma: Vec<f64>,
}

impl Basis {
    fn new() -> Self {
        Self {
            vectors: Vec::new(),
            sigma: Vec::new(),
        }
    }

    /// Residual of `x` after projecting out accepted vectors. With `window`
    /// set, only vectors whose singular value lies within it are used.
    /// Returns the residual and the projection coefficients used.
    fn residual(
        &self,
        x: &[Quaternion],
        window: Option<(f64, f64)>,
    ) -> (Vec<Quaternion>, Vec<(usize, Quaternion)>) {
        let mut res = x.to_vec();
        let mut coeffs = Vec::new();
        for (k, b) in self.vectors.iter().enumerate() {
            if let Some((centre, width)) = window {
                if (self.sigma[k] - centre).abs() > width {
                    continue;
                }
            }
            let c = qdot(b, &res);
            qaxpy(&mut res, b, c);
            coeffs.push((k, c));
        }
        (res, coeffs)
    }
}

pub(crate) fn quaternion_svd(a: &Matrix<Quaternion>) -> Result<SvdResult<Quaternion>> {
    quaternion_svd_impl(a, None)
}

/// Each singular value of `A` appears twice among those of `χ(A)`.
pub(crate) fn quaternion_singular_values(a: &Matrix<Quaternion>) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let s = complex_svd(&chi(a))?.sigma;
    Ok(monotone(s.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()))
}

pub(crate) fn quaternion_leading_svd(
    a: &Matrix<Quaternion>,
    floor: f64,
) -> Result<SvdResult<Quaternion>> {
    quaternion_svd_impl(a, Some(floor))
}

/// With `floor` set, stops after the last singular value above it and skips
/// the null-space completion.
fn quaternion_svd_impl(a: &Matrix<Quaternion>, floor: Option<f64>) -> Result<SvdResult<Quaternion>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(empty_svd(m, n));
    }
    let r = m.min(n);
    let adj = complex_svd(&chi(a))?;
    let s = &adj.sigma;
    let sigma_max = s[0];
    let cluster_tol = CLUSTER_TOL * sigma_max;
    let null_tol = NULL_TOL * sigma_max;
    let window = PROJECTION_WINDOW * sigma_max;

    let left: Vec<Vec<Quaternion>> = (0..2 * r)
        .map(|c| from_adjoint_column(&adj.u.column(c)))
        .collect();
    let right: Vec<Vec<Quaternion>> = (0..2 * r)
        .map(|c| from_adjoint_column(&adj.v.column(c)))
        .collect();

    // Clusters of (nearly) equal singular values, each of even length.
    let null_start = s.iter().position(|&x| x <= null_tol).unwrap_or(2 * r);
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for c in 1..=null_start {
        let breaks = c == null_start || s[c - 1] - s[c] > cluster_tol;
        if breaks {
            match clusters.last_mut() {
                Some(last) if (last.1 - last.0) % 2 == 1 => last.1 = c,
                _ => clusters.push((start, c)),
            }
            start = c;
        }
    }
    let mut tail_start = null_start;
    if let Some(&(lo, hi)) = clusters.last() {
        if (hi - lo) % 2 == 1 {
            clusters.pop();
            tail_start = lo;
        }
    }

    let mut us = Basis::new();
    let mut vs = Vec::<Vec<Quaternion>>::new();

    'clusters: for &(lo, hi) in &clusters {
        let mut pool: Vec<usize> = (lo..hi).collect();
        for t in 0..(hi - lo) / 2 {
            let value = 0.5 * (s[lo + 2 * t] + s[lo + 2 * t + 1]);
            if floor.is_some_and(|f| value <= f) {
                break 'clusters;
            }
            let best = pool
                .iter()
                .enumerate()
                .map(|(slot, &c)| {
                    let (res, coeffs) = us.residual(&left[c], Some((value, window)));
                    (slot, c, qnorm(&res), res, coeffs)
                })
                .max_by(|a, b| a.2.total_cmp(&b.2));
            let Some((slot, c, norm, res, coeffs)) = best else {
                break;
            };
            if norm < MIN_RESIDUAL {
                break;
            }
            pool.swap_remove(slot);
            let mut v = right[c].clone();
            for &(k, coef) in &coeffs {
                qaxpy(&mut v, &vs[k], coef);
            }
            let inv = 1.0 / norm;
            us.vectors.push(res.iter().map(|q| q.scale(inv)).collect());
            us.sigma.push(value);
            vs.push(v.iter().map(|q| q.scale(inv)).collect());
        }
    }

    if floor.is_some() {
        let p = us.vectors.len();
        return Ok(SvdResult {
            u: Matrix::from_fn(m, p, |i, j| us.vectors[j][i]),
            sigma: monotone(us.sigma),
            v: Matrix::from_fn(n, p, |i, j| vs[j][i]),
        });
    }

    // Whatever is left carries (numerically) zero singular values: complete
    // U and V independently to orthonormal sets.
    let mut tail_sigma: Vec<f64> = s[tail_start..]
        .chunks(2)
        .map(|p| p.iter().sum::<f64>() / p.len() as f64)
        .collect();
    tail_sigma.truncate(r - us.vectors.len());
    while tail_sigma.len() < r - us.vectors.len() {
        tail_sigma.push(0.0);
    }
    let mut vb = Basis {
        vectors: vs,
        sigma: us.sigma.clone(),
    };
    let tail_left: Vec<&Vec<Quaternion>> = left[tail_start..].iter().collect();
    let tail_right: Vec<&Vec<Quaternion>> = right[tail_start..].iter().collect();
    complete_basis(&mut us, &tail_left, m, &tail_sigma);
    complete_basis(&mut vb, &tail_right, n, &tail_sigma);
    debug_assert_eq!(us.vectors.len(), r);
    debug_assert_eq!(vb.vectors.len(), r);

    let u = Matrix::from_fn(m, r, |i, j| us.vectors[j][i]);
    let v = Matrix::from_fn(n, r, |i, j| vb.vectors[j][i]);
    Ok(SvdResult {
        u,
        sigma: monotone(us.sigma),
        v,
    })
}

/// Clamps tiny ordering violations left by pair averaging.
fn monotone(mut sigma: Vec<f64>) -> Vec<f64> {
    for t in 1..sigma.len() {
        if sigma[t] > sigma[t - 1] {
            sigma[t] = sigma[t - 1];
        }
    }
    sigma
}

/// Extends `basis` with `sigmas.len()` orthonormal vectors of length `dim`,
/// drawing on `candidates` first and then on the standard basis.
fn complete_basis(basis: &mut Basis, candidates: &[&Vec<Quaternion>], dim: usize, sigmas: &[f64]) {
    let unit = |i: usize| {
        let mut e = vec![Quaternion::ZERO; dim];
        e[i] = Quaternion::ONE;
        e
    };
    let mut pool: Vec<Vec<Quaternion>> = candidates.iter().map(|c| (*c).clone()).collect();
    pool.extend((0..dim).map(unit));
    for &value in sigmas {
        let mut best: Option<(usize, f64, Vec<Quaternion>)> = None;
        for (slot, cand) in pool.iter().enumerate() {
            let (mut res, _) = basis.residual(cand, None);
            // second pass keeps the completion orthogonal to working precision
            let (again, _) = basis.residual(&res, None);
            res = again;
            let norm = qnorm(&res);
            if best.as_ref().is_none_or(|b| norm > b.1) {
                best = Some((slot, norm, res));
            }
            if norm > 0.9 {
                break;
            }
        }
        let (slot, norm, res) = best.expect("candidate pool cannot be empty");
        assert!(norm > MIN_RESIDUAL, "basis completion ran out of directions");
        pool.swap_remove(slot);
        basis.vectors.push(res.iter().map(|q| q.scale(1.0 / norm)).collect());
        basis.sigma.push(value);
    }
}
