//! JSON form of a [`ShotHistogram`], shared by simulated and externally
//! measured data:
//! `{"shots": N, "seed": S, "subset": [2, 3], "counts": {"00": n, ...}}`.

use std::collections::BTreeMap;
use std::path::Path;

use mqdimer_core::measurement::ShotHistogram;
use serde::{Deserialize, Serialize};

use crate::error::AppError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramFile {
    pub shots: u64,
    /// Hardware runs have no seed.
    #[serde(default)]
    pub seed: u64,
    pub subset: Vec<usize>,
    pub counts: BTreeMap<String, u64>,
}

impl From<&ShotHistogram> for HistogramFile {
    fn from(h: &ShotHistogram) -> Self {
        Self {
            shots: h.shots(),
            seed: h.seed(),
            subset: h.subset().to_vec(),
            counts: h.counts().clone(),
        }
    }
}

impl TryFrom<HistogramFile> for ShotHistogram {
    type Error = mqdimer_core::Error;

    fn try_from(f: HistogramFile) -> Result<Self, Self::Error> {
        ShotHistogram::new(f.subset, f.shots, f.seed, f.counts)
    }
}

pub fn to_json(h: &ShotHistogram) -> String {
    let mut s = serde_json::to_string_pretty(&HistogramFile::from(h)).expect("plain data");
    s.push('\n');
    s
}

pub fn from_json(text: &str, origin: &Path) -> Result<ShotHistogram, AppError> {
    let file: HistogramFile = serde_json::from_str(text).map_err(|source| AppError::Json {
        path: origin.to_path_buf(),
        source,
    })?;
    Ok(ShotHistogram::try_from(file)?)
}

pub fn read(path: &Path) -> Result<ShotHistogram, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    from_json(&text, path)
}

pub fn write(path: &Path, h: &ShotHistogram) -> Result<(), AppError> {
    std::fs::write(path, to_json(h)).map_err(|e| AppError::io(path, e))
}
