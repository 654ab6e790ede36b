//! Experiment configuration: defaults, optional TOML file, CLI overrides.
//!
//! Precedence is defaults < config file < command-line flags, so a file
//! can pin a whole experiment while individual flags still win.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Which algorithm a run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    /// The scale-free network with node grouping.
    Sdrn,
    /// Ablation: raw-distance activation, no grouping.
    DrnLike,
    /// Seeded k-means with a train/evaluate split.
    Kmeans,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Sdrn => "sdrn",
            Algo::DrnLike => "drn-like",
            Algo::Kmeans => "kmeans",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything a trial runner needs to reproduce a run bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Built-in dataset name, or a path to a delimited file.
    pub dataset: String,
    pub algo: Algo,
    pub rho: f64,
    pub tau: f64,
    pub alpha: f64,
    pub lr: f64,
    pub glr: f64,
    pub trials: u32,
    pub seed: u64,
    /// Uniform factor applied to every feature before anything else runs.
    pub scale: f64,
    /// Fraction of points k-means trains on; the rest are evaluated.
    pub split_ratio: f64,
    /// Per-channel dimensions; `None` means one channel over all features.
    pub channels: Option<Vec<usize>>,
    pub offline: bool,
    /// For custom files: label column index (0-based, default last).
    pub label_col: Option<usize>,
    /// For custom files: field delimiter.
    pub delimiter: char,
    /// For custom files: whether the first row is a header to skip.
    pub has_header: bool,
    pub kmeans_max_iters: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: "balance".to_string(),
            algo: Algo::Sdrn,
            rho: 0.5,
            tau: 0.85,
            alpha: 1.0,
            lr: 1.0,
            glr: 1.0,
            trials: 100,
            seed: 7,
            scale: 1.0,
            split_ratio: 0.5,
            channels: None,
            offline: false,
            label_col: None,
            delimiter: ',',
            has_header: false,
            kmeans_max_iters: 100,
        }
    }
}

impl ExperimentConfig {
    /// Rejects values no run could make sense of. Algorithm-parameter
    /// ranges are enforced again by the network itself at construction.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::Input("trials must be at least 1".into()));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(BenchError::Input(format!(
                "scale must be a positive finite number, got {}",
                self.scale
            )));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(BenchError::Input(format!(
                "split-ratio must lie strictly between 0 and 1, got {}",
                self.split_ratio
            )));
        }
        if let Some(dims) = &self.channels {
            if dims.is_empty() || dims.contains(&0) {
                return Err(BenchError::Input(
                    "channels must be a non-empty list of positive dimensions".into(),
                ));
            }
        }
        if self.kmeans_max_iters == 0 {
            return Err(BenchError::Input("kmeans-max-iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// The flat key–value config file. Every key is optional; unknown keys are
/// rejected so typos fail loudly instead of silently using a default.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dataset: Option<String>,
    pub algo: Option<Algo>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub alpha: Option<f64>,
    pub lr: Option<f64>,
    pub glr: Option<f64>,
    pub trials: Option<u32>,
    pub seed: Option<u64>,
    pub scale: Option<f64>,
    pub split_ratio: Option<f64>,
    pub channels: Option<Vec<usize>>,
    pub offline: Option<bool>,
    pub label_col: Option<usize>,
    pub delimiter: Option<char>,
    pub has_header: Option<bool>,
    pub kmeans_max_iters: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::io(&path.display().to_string(), &e))?;
        toml::from_str(&text)
            .map_err(|e| BenchError::Input(format!("config {}: {e}", path.display())))
    }

    /// Overlays every present key onto `cfg`.
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        macro_rules! set {
            ($($field:ident),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { cfg.$field = v; })*
            };
        }
        set!(
            dataset, algo, rho, tau, alpha, lr, glr, trials, seed, scale, split_ratio,
            offline, delimiter, has_header, kmeans_max_iters,
        );
        if self.channels.is_some() {
            cfg.channels = self.channels.clone();
        }
        if self.label_col.is_some() {
            cfg.label_col = self.label_col;
        }
    }
}

/// Parses a `--channels` value such as `"3,2"` into per-channel dims.
pub fn parse_channels(raw: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| {
                    BenchError::Input(format!(
                        "channels must be comma-separated positive integers, got {raw:?}"
                    ))
                })
        })
        .collect()
}
