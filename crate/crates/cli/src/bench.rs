use std::io::Write as _;
use std::path::PathBuf;

use clap::Args;
use log::info;
use qpcp::bench::{default_panel, run_panel, summarize, Field, PanelConfig, PanelSummary};
use serde::Serialize;

use crate::config::{self, ConfigFile};
use crate::error::{CliError, CliResult, Status};
use crate::io::write_atomic;

const DEFAULT_SEEDS: u64 = 20;
const QUICK_SEEDS: u64 = 3;
const QUICK_SIZE: usize = 50;

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Three seeds per field at 50×50, rank scaled to match.
    #[arg(long)]
    pub quick: bool,
    /// Restrict to one field: real, complex or quaternion.
    #[arg(long)]
    pub field: Option<Field>,
    /// Override the planted rank.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Run a single seed.
    #[arg(long, conflicts_with = "seeds")]
    pub seed: Option<u64>,
    /// Number of seeds per configuration, starting at 0.
    #[arg(long)]
    pub seeds: Option<u64>,
    /// One JSON line per run.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Per-configuration summary table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
}

#[derive(Serialize)]
struct SummaryRow {
    field: Field,
    m: usize,
    n: usize,
    rank: usize,
    sparsity: f64,
    k: f64,
    runs: usize,
    successes: usize,
    required: usize,
    passed: bool,
    median_rel_err_a: f64,
    max_rel_err_a: f64,
}

impl From<&PanelSummary> for SummaryRow {
    fn from(s: &PanelSummary) -> Self {
        let c = s.config;
        Self {
            field: c.field,
            m: c.m,
            n: c.n,
            rank: c.rank,
            sparsity: c.sparsity,
            k: c.k,
            runs: s.runs,
            successes: s.successes,
            required: s.required,
            passed: s.passed,
            median_rel_err_a: s.median_rel_err_a,
            max_rel_err_a: s.max_rel_err_a,
        }
    }
}

fn panel(args: &BenchArgs, k: f64) -> CliResult<Vec<PanelConfig>> {
    let mut configs = default_panel();
    if let Some(field) = args.field {
        configs.retain(|c| c.field == field);
    }
    for c in &mut configs {
        if args.quick {
            // keep the planted rank's share of the smaller dimension
            c.rank = (c.rank * QUICK_SIZE / c.m.min(c.n)).max(1);
            c.m = QUICK_SIZE;
            c.n = QUICK_SIZE;
        }
        if let Some(rank) = args.rank {
            c.rank = rank;
        }
        c.k = k;
        c.with_seed(0).validate()?;
    }
    Ok(configs)
}

fn describe(c: &PanelConfig) -> String {
    format!("{} {}x{} rank {}", c.field, c.m, c.n, c.rank)
}

pub fn run(args: BenchArgs, file: &ConfigFile) -> CliResult<()> {
    let solver = config::solver_config(file, args.k, args.tol, args.max_iters)?;
    let jobs = config::jobs(file, args.jobs)?;
    let configs = panel(&args, solver.k)?;
    let seeds: Vec<u64> = match (args.seed, args.seeds) {
        (Some(s), _) => vec![s],
        (None, Some(0)) => return Err(CliError::usage("--seeds must be at least 1")),
        (None, Some(n)) => (0..n).collect(),
        (None, None) if args.quick => (0..QUICK_SEEDS).collect(),
        (None, None) => (0..DEFAULT_SEEDS).collect(),
    };
    info!("{} configurations x {} seeds on {jobs} threads", configs.len(), seeds.len());

    let reports = run_panel(&configs, &seeds, &solver, jobs)?;
    let summaries = summarize(&configs, &reports);

    if let Some(path) = &args.json {
        let mut lines = String::new();
        for r in &reports {
            lines += &serde_json::to_string(r).map_err(|e| CliError::data(e.to_string()))?;
            lines.push('\n');
        }
        write_atomic(path, |f| f.write_all(lines.as_bytes()))?;
    }
    if let Some(path) = &args.csv {
        let mut table = csv::Writer::from_writer(Vec::new());
        for s in &summaries {
            table.serialize(SummaryRow::from(s)).map_err(|e| CliError::data(e.to_string()))?;
        }
        let bytes = table.into_inner().map_err(|e| CliError::data(e.to_string()))?;
        write_atomic(path, |f| f.write_all(&bytes))?;
    }

    println!(
        "{:<12} {:>9} {:>5} {:>9} {:>13} {:>13}",
        "field", "size", "rank", "success", "median err", "max err"
    );
    for s in &summaries {
        let c = &s.config;
        println!(
            "{:<12} {:>9} {:>5} {:>5}/{:<3} {:>13.3e} {:>13.3e}{}",
            c.field.name(),
            format!("{}x{}", c.m, c.n),
            c.rank,
            s.successes,
            s.runs,
            s.median_rel_err_a,
            s.max_rel_err_a,
            if s.passed { "" } else { "  FAIL" }
        );
    }

    let failed: Vec<String> = summaries.iter().filter(|s| !s.passed).map(|s| {
        format!("{} ({}/{} succeeded, {} required)", describe(&s.config), s.successes, s.runs, s.required)
    }).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::new(
            Status::Criterion,
            format!("recovery criterion missed: {}", failed.join("; ")),
        ))
    }
}
