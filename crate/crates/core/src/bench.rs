//! Synthetic low-rank plus sparse recovery experiments.
//!
//! An instance is `X = A₀ + E₀` with `A₀ = P·Q*` (P m×r, Q n×r) and `E₀`
//! supported on a uniformly random set of `round(sparsity·m·n)` entries.
//! Every real component of P, Q and the nonzero entries of E₀ is drawn
//! i.i.d. from N(0, 1) by a ChaCha RNG seeded from the `RecoverySpec`, so instances
//! are reproducible bit for bit.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pcp::{pcp_solve, SolverConfig};
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

/// Magnitude above which a recovered sparse entry counts as support.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;
/// A run succeeds when `rel_err_a` is at most this.
pub const SUCCESS_TOL: f64 = 1e-4;
/// Fraction of seeds that must succeed for a configuration to pass.
pub const REQUIRED_SUCCESS_RATE: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Real, Field::Complex, Field::Quaternion];

    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
            Field::Quaternion => "quaternion",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            "quaternion" | "h" | "q" => Ok(Field::Quaternion),
            other => Err(Error::InvalidConfig(format!("unknown field '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoverySpec {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    /// Fraction of corrupted entries, in `[0, 1)`.
    pub sparsity: f64,
    pub field: Field,
    pub seed: u64,
    pub k: f64,
}

impl RecoverySpec {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidConfig("matrix dimensions must be positive".into()));
        }
        if self.rank > self.m.min(self.n) {
            return Err(Error::InvalidConfig(format!(
                "rank {} exceeds min({}, {})",
                self.rank, self.m, self.n
            )));
        }
        if !(0.0..1.0).contains(&self.sparsity) {
            return Err(Error::InvalidConfig(format!(
                "sparsity must be in [0, 1), got {}",
                self.sparsity
            )));
        }
        if !(self.k > 0.0) {
            return Err(Error::InvalidConfig(format!("k must be positive, got {}", self.k)));
        }
        Ok(())
    }

    pub fn support_size(&self) -> usize {
        (self.sparsity * (self.m * self.n) as f64).round() as usize
    }
}

/// `X = low_rank + sparse`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<F> {
    pub x: Matrix<F>,
    pub low_rank: Matrix<F>,
    pub sparse: Matrix<F>,
}

fn gaussian<F: Scalar>(rng: &mut ChaCha8Rng) -> F {
    let mut parts = [0.0; 4];
    for p in parts.iter_mut().take(F::REAL_DIM) {
        *p = rng.sample(StandardNormal);
    }
    F::from_components(&parts)
}

pub fn generate_instance<F: Scalar>(spec: &RecoverySpec) -> Result<Instance<F>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (m, n, r) = (spec.m, spec.n, spec.rank);
    let p = Matrix::<F>::from_fn(m, r, |_, _| gaussian(&mut rng));
    let q = Matrix::<F>::from_fn(n, r, |_, _| gaussian(&mut rng));
    let low_rank = p.matmul(&q.adjoint())?;
    let mut sparse = Matrix::<F>::zeros(m, n);
    let mut support = index::sample(&mut rng, m * n, spec.support_size()).into_vec();
    support.sort_unstable();
    for idx in support {
        sparse.as_mut_slice()[idx] = gaussian(&mut rng);
    }
    let x = &low_rank + &sparse;
    Ok(Instance {
        x,
        low_rank,
        sparse,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub spec: RecoverySpec,
    pub rel_err_a: f64,
    pub rel_err_e: f64,
    pub rank_recovered: usize,
    pub support_f1: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time_s: f64,
}

impl RecoveryReport {
    pub fn succeeded(&self) -> bool {
        self.rel_err_a <= SUCCESS_TOL
    }
}

fn support_f1<F: Scalar>(truth: &Matrix<F>, estimate: &Matrix<F>) -> f64 {
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (t, e) in truth.as_slice().iter().zip(estimate.as_slice()) {
        match (t.magnitude() > SUPPORT_THRESHOLD, e.magnitude() > SUPPORT_THRESHOLD) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    if tp + fp + fn_ == 0 {
        return 1.0;
    }
    2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
}

fn recover<F: Scalar>(spec: &RecoverySpec, solver: &SolverConfig) -> Result<RecoveryReport> {
    let inst = generate_instance::<F>(spec)?;
    let config = SolverConfig { k: spec.k, ..*solver };
    let start = Instant::now();
    let sol = pcp_solve(&inst.x, &config)?;
    let wall_time_s = start.elapsed().as_secs_f64();

    let a_norm = inst.low_rank.frobenius();
    let e_norm = inst.sparse.frobenius();
    let err_a = (&sol.low_rank - &inst.low_rank).frobenius();
    let err_e = (&sol.sparse - &inst.sparse).frobenius();
    let x_norm = inst.x.frobenius().max(f64::MIN_POSITIVE);
    Ok(RecoveryReport {
        spec: *spec,
        rel_err_a: if a_norm > 0.0 { err_a / a_norm } else { err_a / x_norm },
        rel_err_e: if e_norm > 0.0 { err_e / e_norm } else { err_e / x_norm },
        rank_recovered: sol.rank,
        support_f1: support_f1(&inst.sparse, &sol.sparse),
        iterations: sol.iterations,
        converged: sol.converged,
        wall_time_s,
    })
}

/// Generates the instance described by `spec`, solves it with `solver`
/// (whose `k` is overridden by the `RecoverySpec`'s) and scores the result.
pub fn run_recovery(spec: &RecoverySpec, solver: &SolverConfig) -> Result<RecoveryReport> {
    match spec.field {
        Field::Real => recover::<f64>(spec, solver),
        Field::Complex => recover::<Complex64>(spec, solver),
        Field::Quaternion => recover::<Quaternion>(spec, solver),
    }
}

/// A recovery configuration without its seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelConfig {
    pub field: Field,
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub sparsity: f64,
    pub k: f64,
}

impl PanelConfig {
    pub fn with_seed(&self, seed: u64) -> RecoverySpec {
        RecoverySpec {
            m: self.m,
            n: self.n,
            rank: self.rank,
            sparsity: self.sparsity,
            field: self.field,
            seed,
            k: self.k,
        }
    }
}

/// ℝ and ℂ at 100×100 rank 5, ℍ at 50×50 rank 3; 5% corruption, k = 1.
pub fn default_panel() -> Vec<PanelConfig> {
    Field::ALL
        .iter()
        .map(|&field| {
            let (size, rank) = if field == Field::Quaternion { (50, 3) } else { (100, 5) };
            PanelConfig {
                field,
                m: size,
                n: size,
                rank,
                sparsity: 0.05,
                k: 1.0,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSummary {
    pub config: PanelConfig,
    pub runs: usize,
    pub successes: usize,
    pub required: usize,
    pub passed: bool,
    pub median_rel_err_a: f64,
    pub max_rel_err_a: f64,
}

pub fn required_successes(runs: usize) -> usize {
    (REQUIRED_SUCCESS_RATE * runs as f64 - 1e-9).ceil() as usize
}

/// Runs every configuration for every seed, in parallel over at most `jobs`
/// threads. Reports come back in (config, seed) order regardless of `jobs`.
pub fn run_panel(
    configs: &[PanelConfig],
    seeds: &[u64],
    solver: &SolverConfig,
    jobs: usize,
) -> Result<Vec<RecoveryReport>> {
    let specs: Vec<RecoverySpec> = configs
        .iter()
        .flat_map(|c| seeds.iter().map(move |&s| c.with_seed(s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| specs.par_iter().map(|s| run_recovery(s, solver)).collect())
}

pub fn summarize(configs: &[PanelConfig], reports: &[RecoveryReport]) -> Vec<PanelSummary> {
    configs
        .iter()
        .map(|cfg| {
            let mut errs: Vec<f64> = reports
                .iter()
                .filter(|r| cfg.with_seed(r.spec.seed) == r.spec)
                .map(|r| r.rel_err_a)
                .collect();
            errs.sort_by(f64::total_cmp);
            let runs = errs.len();
            let successes = errs.iter().filter(|&&e| e <= SUCCESS_TOL).count();
            let required = required_successes(runs);
            PanelSummary {
                config: *cfg,
                runs,
                successes,
                required,
                passed: runs > 0 && successes >= required,
                median_rel_err_a: errs.get(runs / 2).copied().unwrap_or(f64::NAN),
                max_rel_err_a: errs.last().copied().unwrap_or(f64::NAN),
            }
        })
        .collect()
}
