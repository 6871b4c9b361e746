use std::path::{Path, PathBuf};

use clap::Args;
use log::info;
use qpcp::metrics::{aggregate, ClipScores, GlobalScores};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{self, ConfigFile};
use crate::error::{CliError, CliResult};
use crate::io::{read_wav, write_atomic, write_text};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// CSV with columns estimate_voice, estimate_accomp, ref_voice,
    /// ref_accomp and mixture. Relative paths resolve against the
    /// manifest's directory.
    pub manifest: PathBuf,
    /// Score report; defaults to `<manifest stem>_scores.json`.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Per-clip table; defaults to `<manifest stem>_scores.csv`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
struct ManifestRow {
    estimate_voice: PathBuf,
    estimate_accomp: PathBuf,
    ref_voice: PathBuf,
    ref_accomp: PathBuf,
    mixture: PathBuf,
}

#[derive(Debug, Serialize)]
struct ClipReport {
    clip: String,
    #[serde(flatten)]
    scores: ClipScores,
}

#[derive(Debug, Serialize)]
struct Report {
    clips: Vec<ClipReport>,
    aggregate: GlobalScores,
}

fn read_manifest(path: &Path) -> CliResult<Vec<ManifestRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<ManifestRow>, _>>()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        return Err(CliError::usage(format!("{}: manifest lists no clips", path.display())));
    }
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(rows
        .into_iter()
        .map(|r| ManifestRow {
            estimate_voice: base.join(r.estimate_voice),
            estimate_accomp: base.join(r.estimate_accomp),
            ref_voice: base.join(r.ref_voice),
            ref_accomp: base.join(r.ref_accomp),
            mixture: base.join(r.mixture),
        })
        .collect())
}

fn score(row: &ManifestRow) -> CliResult<ClipScores> {
    let est_v = read_wav(&row.estimate_voice)?;
    let est_a = read_wav(&row.estimate_accomp)?;
    let ref_v = read_wav(&row.ref_voice)?;
    let ref_a = read_wav(&row.ref_accomp)?;
    let mix = read_wav(&row.mixture)?;
    ClipScores::compute(&est_v, &est_a, &ref_v, &ref_a, &mix)
        .map_err(|e| CliError::data(format!("{}: {e}", row.mixture.display())))
}

fn default_output(manifest: &Path, ext: &str) -> PathBuf {
    let stem = manifest.file_stem().map_or_else(|| "manifest".into(), |s| s.to_string_lossy());
    manifest.with_file_name(format!("{stem}_scores.{ext}"))
}

pub fn run(args: EvaluateArgs, file: &ConfigFile) -> CliResult<()> {
    let jobs = config::jobs(file, args.jobs)?;
    let rows = read_manifest(&args.manifest)?;
    info!("scoring {} clips on {jobs} threads", rows.len());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    let scores: Vec<ClipScores> = pool.install(|| rows.par_iter().map(score).collect::<CliResult<_>>())?;
    let global = aggregate(&scores)?;

    let clips: Vec<ClipReport> = rows
        .iter()
        .zip(&scores)
        .map(|(row, &scores)| ClipReport {
            clip: row.mixture.display().to_string(),
            scores,
        })
        .collect();

    let mut table = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::data(e.to_string());
    table
        .write_record(["clip", "clip_length", "sdr_voice", "sdr_accomp", "nsdr_voice", "nsdr_accomp"])
        .map_err(csv_err)?;
    for c in &clips {
        let s = &c.scores;
        table
            .write_record([
                c.clip.clone(),
                s.clip_length.to_string(),
                s.sdr_voice.to_string(),
                s.sdr_accomp.to_string(),
                s.nsdr_voice.to_string(),
                s.nsdr_accomp.to_string(),
            ])
            .map_err(csv_err)?;
    }
    table
        .write_record([
            "AGGREGATE".to_string(),
            global.total_length.to_string(),
            global.gsdr_voice.to_string(),
            global.gsdr_accomp.to_string(),
            global.gnsdr_voice.to_string(),
            global.gnsdr_accomp.to_string(),
        ])
        .map_err(csv_err)?;
    let table = table.into_inner().map_err(|e| CliError::data(e.to_string()))?;

    let report = Report {
        clips,
        aggregate: global,
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::data(e.to_string()))?;

    let json_path = args.json.unwrap_or_else(|| default_output(&args.manifest, "json"));
    let csv_path = args.csv.unwrap_or_else(|| default_output(&args.manifest, "csv"));
    write_text(&json_path, &(json + "\n"))?;
    write_atomic(&csv_path, |f| std::io::Write::write_all(f, &table))?;

    println!(
        "GNSDR voice {:.2} dB, accompaniment {:.2} dB; GSDR voice {:.2} dB, accompaniment {:.2} dB ({} clips)",
        global.gnsdr_voice,
        global.gnsdr_accomp,
        global.gsdr_voice,
        global.gsdr_accomp,
        scores.len()
    );
    Ok(())
}
