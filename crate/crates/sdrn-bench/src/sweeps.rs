//! Parameter sweeps: vigilance curves and scale-robustness grids.

use serde::{Deserialize, Serialize};

use sdrn::metrics;
use sdrn::SdrnError;

use crate::config::{Algo, ExperimentConfig};
use crate::error::Result;
use crate::loader::LoadedDataset;
use crate::report::{opt_inf, opt_inf_vec};
use crate::runner::{run_trials, RunReport, Timings};

/// The vigilance grid used when none is given: 0.1 through 0.9.
pub fn default_rhos() -> Vec<f64> {
    (1..=9).map(|i| f64::from(i) / 10.0).collect()
}

/// The scale grid used when none is given: 1, 10, …, 10⁵.
pub fn default_factors() -> Vec<f64> {
    (0..=5).map(|e| 10f64.powi(e)).collect()
}

/// One full run per vigilance value, plus the selection summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VigilanceSweep {
    pub dataset: String,
    pub algo: Algo,
    pub rhos: Vec<f64>,
    pub runs: Vec<RunReport>,
    /// Combined weighted score per vigilance value; `None` where too few
    /// trials had a defined cluster-separation index.
    #[serde(with = "opt_inf_vec")]
    pub combined: Vec<Option<f64>>,
    /// Vigilance with the lowest defined combined score (ties favor the
    /// lower value). `None` when no score was defined anywhere.
    pub best_rho: Option<f64>,
    /// Spread of the per-vigilance mean separation index: the standard
    /// deviation across the sweep of each run's mean DBI. Low values mean
    /// the algorithm barely cares what vigilance it was given.
    #[serde(with = "opt_inf")]
    pub dbi_mean_std: Option<f64>,
}

/// One full run per scale factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSweep {
    pub dataset: String,
    pub algo: Algo,
    pub factors: Vec<f64>,
    pub runs: Vec<RunReport>,
}

/// Runs the vigilance sweep. A single-element grid degenerates to exactly
/// one `run_trials` call with that vigilance.
pub fn sweep_vigilance(
    cfg: &ExperimentConfig,
    data: &LoadedDataset,
    rhos: Option<Vec<f64>>,
) -> Result<(VigilanceSweep, Vec<Timings>)> {
    let rhos = rhos.unwrap_or_else(default_rhos);
    let mut runs = Vec::with_capacity(rhos.len());
    let mut timings = Vec::with_capacity(rhos.len());
    let mut combined = Vec::with_capacity(rhos.len());

    for &rho in &rhos {
        let mut cell = cfg.clone();
        cell.rho = rho;
        let (report, t) = run_trials(&cell, data)?;

        let dbi: Vec<f64> = report.records.iter().filter_map(|r| r.dbi).collect();
        let cp: Vec<f64> = report.records.iter().map(|r| r.cp).collect();
        let nmi: Vec<f64> = report.records.iter().map(|r| r.nmi).collect();
        let score = match metrics::combined_score(&dbi, &cp, &nmi) {
            Ok(v) => Some(v),
            Err(SdrnError::NotEnoughRuns { .. }) => None,
            Err(e) => return Err(e.into()),
        };

        combined.push(score);
        runs.push(report);
        timings.push(t);
    }

    let best_rho = rhos
        .iter()
        .zip(&combined)
        .filter_map(|(&rho, score)| score.filter(|s| s.is_finite()).map(|s| (rho, s)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(rho, _)| rho);

    let means: Vec<f64> = runs.iter().filter_map(|r| r.aggregates.dbi_mean).collect();
    let dbi_mean_std = if means.len() < 2 {
        None
    } else if means.iter().all(|m| m.is_finite()) {
        Some(metrics::population_std(&means))
    } else {
        Some(f64::INFINITY)
    };

    let sweep = VigilanceSweep {
        dataset: data.name.clone(),
        algo: cfg.algo,
        rhos,
        runs,
        combined,
        best_rho,
        dbi_mean_std,
    };
    Ok((sweep, timings))
}

/// Runs the scale sweep. The factor-1 entry performs no scaling at all,
/// so its report is identical to a plain `run_trials` with this config.
pub fn sweep_scale(
    cfg: &ExperimentConfig,
    data: &LoadedDataset,
    factors: Option<Vec<f64>>,
) -> Result<(ScaleSweep, Vec<Timings>)> {
    let factors = factors.unwrap_or_else(default_factors);
    let mut runs = Vec::with_capacity(factors.len());
    let mut timings = Vec::with_capacity(factors.len());
    for &factor in &factors {
        let mut cell = cfg.clone();
        cell.scale = factor;
        let (report, t) = run_trials(&cell, data)?;
        runs.push(report);
        timings.push(t);
    }
    let sweep = ScaleSweep {
        dataset: data.name.clone(),
        algo: cfg.algo,
        factors,
        runs,
    };
    Ok((sweep, timings))
}
