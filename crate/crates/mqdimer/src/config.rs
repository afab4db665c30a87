//! `key = value` configuration files.
//!
//! Keys mirror the long command-line flags with `-` or `_` accepted
//! interchangeably. `#` starts a comment. Values given on the command line
//! take precedence over the file.

use std::path::{Path, PathBuf};

use crate::error::AppError;

/// Every setting the front end understands. `None` means "not given here".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub experiment: Option<String>,
    pub beta: Option<f64>,
    pub tau_start: Option<f64>,
    pub tau_end: Option<f64>,
    pub points: Option<usize>,
    pub shots: Option<u64>,
    pub noise: Option<f64>,
    pub seed: Option<u64>,
    pub tau: Option<f64>,
    pub out: Option<PathBuf>,
    pub export_qasm: Option<PathBuf>,
    pub save_histogram: Option<PathBuf>,
    pub estimate: Option<PathBuf>,
}

impl Settings {
    /// Fills every unset field of `self` from `fallback`.
    pub fn or(self, fallback: Settings) -> Settings {
        Settings {
            experiment: self.experiment.or(fallback.experiment),
            beta: self.beta.or(fallback.beta),
            tau_start: self.tau_start.or(fallback.tau_start),
            tau_end: self.tau_end.or(fallback.tau_end),
            points: self.points.or(fallback.points),
            shots: self.shots.or(fallback.shots),
            noise: self.noise.or(fallback.noise),
            seed: self.seed.or(fallback.seed),
            tau: self.tau.or(fallback.tau),
            out: self.out.or(fallback.out),
            export_qasm: self.export_qasm.or(fallback.export_qasm),
            save_histogram: self.save_histogram.or(fallback.save_histogram),
            estimate: self.estimate.or(fallback.estimate),
        }
    }
}

fn value<T: std::str::FromStr>(key: &str, raw: &str, line: usize) -> Result<T, AppError> {
    raw.parse()
        .map_err(|_| AppError::Config(format!("line {line}: bad value `{raw}` for `{key}`")))
}

/// Parses the text of a configuration file.
pub fn parse(text: &str) -> Result<Settings, AppError> {
    let mut s = Settings::default();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| AppError::Config(format!("line {n}: expected `key = value`")))?;
        let key = key.trim().replace('_', "-");
        let val = val.trim();
        match key.as_str() {
            "experiment" => s.experiment = Some(val.to_string()),
            "beta" => s.beta = Some(value(&key, val, n)?),
            "tau-start" => s.tau_start = Some(value(&key, val, n)?),
            "tau-end" => s.tau_end = Some(value(&key, val, n)?),
            "points" => s.points = Some(value(&key, val, n)?),
            "shots" => s.shots = Some(value(&key, val, n)?),
            "noise" => s.noise = Some(value(&key, val, n)?),
            "seed" => s.seed = Some(value(&key, val, n)?),
            "tau" => s.tau = Some(value(&key, val, n)?),
            "out" => s.out = Some(val.into()),
            "export-qasm" => s.export_qasm = Some(val.into()),
            "save-histogram" => s.save_histogram = Some(val.into()),
            "estimate" => s.estimate = Some(val.into()),
            other => return Err(AppError::Config(format!("line {n}: unknown key `{other}`"))),
        }
    }
    Ok(s)
}

pub fn load(path: &Path) -> Result<Settings, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse(&text)
}
