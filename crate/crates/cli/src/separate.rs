use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use log::{info, warn};
use qpcp::{separate, SeparationMode};
use serde::Serialize;

use crate::config::{self, ConfigFile};
use crate::error::{CliError, CliResult};
use crate::io::{read_wav, write_text, write_wav};

const LONG_INPUT_SECS: f64 = 60.0;

#[derive(Debug, Args)]
pub struct SeparateArgs {
    /// Mixture WAV (16-bit PCM or 32-bit float, mono or stereo).
    pub input: PathBuf,
    /// real, complex or quaternion. Quaternion needs stereo input.
    #[arg(long)]
    pub mode: Option<SeparationMode>,
    /// Trade-off multiplier for λ = k / √max(m, n).
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// STFT window length in samples.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub hop: Option<usize>,
    /// Output directory, created if missing. Defaults to the input's directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Sidecar {
    mode: SeparationMode,
    k: f64,
    lambda: f64,
    iterations: usize,
    converged: bool,
    residual: f64,
    #[serde(rename = "rank_A")]
    rank_a: usize,
    #[serde(rename = "nnz_E")]
    nnz_e: usize,
    wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

pub fn run(args: SeparateArgs, file: &ConfigFile) -> CliResult<()> {
    let mode = config::mode(file, args.mode)?;
    let solver = config::solver_config(file, args.k, args.tol, args.max_iters)?;
    let stft_cfg = config::stft_config(file, args.window, args.hop)?;

    let mixture = read_wav(&args.input)?;
    if mode == SeparationMode::Quaternion && !mixture.is_stereo() {
        return Err(qpcp::Error::ModeInput {
            channels: mixture.num_channels(),
        }
        .into());
    }
    if mixture.duration_secs() > LONG_INPUT_SECS {
        warn!(
            "{} is {:.0} s long; separation cost grows quickly with duration",
            args.input.display(),
            mixture.duration_secs()
        );
    }

    let out_dir = match &args.out {
        Some(dir) => dir.clone(),
        None => args
            .input
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map_or_else(|| PathBuf::from("."), Path::to_path_buf),
    };
    let stem = args
        .input
        .file_stem()
        .ok_or_else(|| CliError::usage(format!("{}: no file name", args.input.display())))?
        .to_string_lossy()
        .into_owned();

    info!(
        "separating {} ({} ch, {} samples) in {mode} mode",
        args.input.display(),
        mixture.num_channels(),
        mixture.len()
    );
    let start = Instant::now();
    let result = separate(&mixture, mode, &solver, &stft_cfg)?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let report = result.report;

    let warning = (!report.converged).then(|| {
        format!(
            "solver stopped after {} iterations with residual {:.3e} above tol {:.1e}",
            report.iterations, report.residual, solver.tol
        )
    });
    if let Some(w) = &warning {
        warn!("{w}");
    }
    let sidecar = Sidecar {
        mode,
        k: solver.k,
        lambda: report.lambda,
        iterations: report.iterations,
        converged: report.converged,
        residual: report.residual,
        rank_a: report.rank,
        nnz_e: report.nnz,
        wall_time_s,
        warning,
    };
    let json = serde_json::to_string_pretty(&sidecar).map_err(|e| CliError::data(e.to_string()))?;

    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    write_wav(&out_dir.join(format!("{stem}_voice.wav")), &result.voice)?;
    write_wav(&out_dir.join(format!("{stem}_accomp.wav")), &result.accompaniment)?;
    write_text(&out_dir.join(format!("{stem}.json")), &(json + "\n"))?;
    info!(
        "done in {wall_time_s:.2} s: {} iterations, rank {}, {} sparse entries",
        report.iterations, report.rank, report.nnz
    );
    Ok(())
}
