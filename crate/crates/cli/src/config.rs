//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys:
//! `mode`, `k`, `tol`, `max_iters`, `rho`, `mu_max_ratio`, `window`, `hop`
//! and `jobs`. Command-line flags override file values, which override the
//! built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use qpcp::{SeparationMode, SolverConfig, StftConfig};

use crate::error::{CliError, CliResult};

const KEYS: [&str; 9] = [
    "mode",
    "k",
    "tol",
    "max_iters",
    "rho",
    "mu_max_ratio",
    "window",
    "hop",
    "jobs",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|msg| CliError::usage(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key = value", idx + 1));
            };
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{key}'", idx + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::usage(format!("config key '{key}': invalid value '{v}'")))
            })
            .transpose()
    }
}

/// `flag`, else the file's value, else `default`.
pub fn layer<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str, default: T) -> CliResult<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(file.get(key)?.unwrap_or(default))
}

/// Solver settings from the file, with `k`, `tol` and `max_iters` flags on top.
pub fn solver_config(
    file: &ConfigFile,
    k: Option<f64>,
    tol: Option<f64>,
    max_iters: Option<usize>,
) -> CliResult<SolverConfig> {
    let d = SolverConfig::default();
    let cfg = SolverConfig {
        k: layer(k, file, "k", d.k)?,
        mu0: None,
        rho: layer(None, file, "rho", d.rho)?,
        mu_max_ratio: layer(None, file, "mu_max_ratio", d.mu_max_ratio)?,
        tol: layer(tol, file, "tol", d.tol)?,
        max_iters: layer(max_iters, file, "max_iters", d.max_iters)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn stft_config(file: &ConfigFile, window: Option<usize>, hop: Option<usize>) -> CliResult<StftConfig> {
    let d = StftConfig::default();
    let window = layer(window, file, "window", d.window_length)?;
    let hop = layer(hop, file, "hop", d.hop)?;
    Ok(StftConfig::new(window, hop)?)
}

pub fn mode(file: &ConfigFile, flag: Option<SeparationMode>) -> CliResult<SeparationMode> {
    layer(flag, file, "mode", SeparationMode::default())
}

/// Worker count; defaults to the number of logical CPUs.
pub fn jobs(file: &ConfigFile, flag: Option<usize>) -> CliResult<usize> {
    let default = std::thread::available_parallelism().map_or(1, |n| n.get());
    let jobs = layer(flag, file, "jobs", default)?;
    if jobs == 0 {
        return Err(CliError::usage("jobs must be at least 1"));
    }
    Ok(jobs)
}
