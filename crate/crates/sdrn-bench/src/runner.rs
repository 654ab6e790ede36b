//! Running repeated shuffled trials of one algorithm on one dataset.
//!
//! Each trial is reproducible from `(config, seed)` alone: trial `t` uses
//! the stream order given by a ChaCha generator seeded with `seed + t`,
//! and nothing about thread scheduling can change a result — trials run
//! in parallel but are collected back in trial order, and wall-clock
//! timings live in a separate structure so reports stay byte-identical
//! across reruns.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sdrn::baselines::{drn_like, kmeans_assign, kmeans_fit};
use sdrn::metrics;
use sdrn::{Hyperparams, MultiChannelPoint, NetworkState, SdrnError};

use crate::config::{Algo, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::loader::LoadedDataset;
use crate::report::opt_inf;

/// Outcome of one shuffled trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u32,
    /// The exact generator seed this trial used (`run seed + trial`).
    pub seed: u64,
    /// Clusters produced: live node count for the online algorithms, the
    /// configured k for k-means.
    pub clusters: usize,
    /// `None` when the index is undefined for the trial's partition
    /// (fewer than two populated clusters); `"inf"` in the JSON when two
    /// cluster centroids coincide exactly.
    #[serde(with = "opt_inf")]
    pub dbi: Option<f64>,
    pub cp: f64,
    pub nmi: f64,
}

/// Mean/standard-deviation summary over the trials of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    /// How many trials had a defined (possibly infinite) index value.
    pub dbi_defined: usize,
    #[serde(with = "opt_inf")]
    pub dbi_mean: Option<f64>,
    #[serde(with = "opt_inf")]
    pub dbi_std: Option<f64>,
    pub cp_mean: f64,
    pub cp_std: f64,
    pub nmi_mean: f64,
    pub nmi_std: f64,
    pub clusters_mean: f64,
    pub clusters_std: f64,
}

/// Full machine-readable result of `run_trials`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub algo: Algo,
    pub rho: f64,
    pub tau: f64,
    pub alpha: f64,
    pub lr: f64,
    pub glr: f64,
    pub scale: f64,
    pub split_ratio: f64,
    pub trials: u32,
    pub seed: u64,
    pub points: usize,
    pub classes: usize,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
}

/// Wall-clock measurements, kept out of the deterministic report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialTiming {
    pub trial: u32,
    pub wall_s: f64,
    pub mean_step_us: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timings {
    pub per_trial: Vec<TrialTiming>,
    pub total_s: f64,
}

/// Applies the uniform scale factor to every coordinate of every point.
/// A factor of exactly 1 performs no arithmetic at all, so those runs are
/// bit-identical to never having scaled.
pub fn scale_points(points: &[MultiChannelPoint], factor: f64) -> Vec<MultiChannelPoint> {
    if factor == 1.0 {
        return points.to_vec();
    }
    points
        .iter()
        .map(|p| {
            let channels = (0..p.channels())
                .map(|k| p.channel(k).iter().map(|&v| v * factor).collect())
                .collect();
            MultiChannelPoint::new(channels)
        })
        .collect()
}

/// The stream order for trial seed `s`: indices `0..n` shuffled by a
/// ChaCha generator seeded with `s`.
pub fn shuffled_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    order
}

fn network_params(cfg: &ExperimentConfig, channels: usize) -> Hyperparams {
    let mut params = Hyperparams::defaults(channels);
    params.rho = cfg.rho;
    params.tau = cfg.tau;
    params.alpha = cfg.alpha;
    params.lr = cfg.lr;
    params.glr = cfg.glr;
    params
}

/// Builds the configured online network and feeds it `points[order[0]],
/// points[order[1]], …` exactly once each.
pub fn train_network(
    cfg: &ExperimentConfig,
    data: &LoadedDataset,
    points: &[MultiChannelPoint],
    order: &[usize],
) -> Result<NetworkState> {
    let params = network_params(cfg, data.channel_spec.channels());
    let mut state = match cfg.algo {
        Algo::Sdrn => NetworkState::new(data.channel_spec.clone(), params)?,
        Algo::DrnLike => drn_like(data.channel_spec.clone(), params)?,
        Algo::Kmeans => {
            return Err(BenchError::Internal(
                "k-means has no online training loop".into(),
            ))
        }
    };
    for &i in order {
        state.train_step(&points[i])?;
    }
    Ok(state)
}

fn online_trial(
    cfg: &ExperimentConfig,
    data: &LoadedDataset,
    points: &[MultiChannelPoint],
    flats: &[Vec<f64>],
    trial: u32,
) -> Result<(TrialRecord, TrialTiming)> {
    let trial_seed = cfg.seed + u64::from(trial);
    let order = shuffled_order(points.len(), trial_seed);

    let start = Instant::now();
    let state = train_network(cfg, data, points, &order)?;
    // Evaluation sweeps every point in file order through the frozen
    // network; training saw each point exactly once, in shuffled order.
    let mut predicted = Vec::with_capacity(points.len());
    for p in points {
        predicted.push(state.assign(p)?);
    }
    let wall = start.elapsed().as_secs_f64();

    let dbi = match metrics::dbi(flats, &predicted) {
        Ok(v) => Some(v),
        Err(SdrnError::DbiUndefined { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let cp = metrics::purity(&predicted, &data.labels)?;
    let nmi = metrics::nmi(&predicted, &data.labels)?;

    let record = TrialRecord {
        trial,
        seed: trial_seed,
        clusters: state.node_count(),
        dbi,
        cp,
        nmi,
    };
    let timing = TrialTiming {
        trial,
        wall_s: wall,
        mean_step_us: wall / points.len() as f64 * 1e6,
    };
    Ok((record, timing))
}

fn kmeans_trial(
    cfg: &ExperimentConfig,
    data: &LoadedDataset,
    flats: &[Vec<f64>],
    trial: u32,
) -> Result<(TrialRecord, TrialTiming)> {
    let n = flats.len();
    let k = data.class_count;
    let mut n_train = (n as f64 * cfg.split_ratio) as usize;
    // The fit needs at least k points and the evaluation at least one.
    n_train = n_train.clamp(k.min(n - 1), n - 1);
    if n_train < k {
        return Err(BenchError::Input(format!(
            "dataset {} has {} points; too few to train k-means with k = {k}",
            data.name, n
        )));
    }

    let trial_seed = cfg.seed + u64::from(trial);
    let order = shuffled_order(n, trial_seed);

    let start = Instant::now();
    let train: Vec<Vec<f64>> = order[..n_train].iter().map(|&i| flats[i].clone()).collect();
    let model = kmeans_fit(&train, k, trial_seed, cfg.kmeans_max_iters)?;

    let holdout = &order[n_train..];
    let mut eval_points = Vec::with_capacity(holdout.len());
    let mut predicted = Vec::with_capacity(holdout.len());
    let mut truth = Vec::with_capacity(holdout.len());
    for &i in holdout {
        eval_points.push(flats[i].clone());
        predicted.push(kmeans_assign(&model, &flats[i]));
        truth.push(data.labels[i]);
    }
    let wall = start.elapsed().as_secs_f64();

    let dbi = match metrics::dbi(&eval_points, &predicted) {
        Ok(v) => Some(v),
        Err(SdrnError::DbiUndefined { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let cp = metrics::purity(&predicted, &truth)?;
    let nmi = metrics::nmi(&predicted, &truth)?;

    let record = TrialRecord {
        trial,
        seed: trial_seed,
        clusters: k,
        dbi,
        cp,
        nmi,
    };
    let timing = TrialTiming {
        trial,
        wall_s: wall,
        mean_step_us: wall / n as f64 * 1e6,
    };
    Ok((record, timing))
}

fn aggregate(records: &[TrialRecord]) -> Aggregates {
    let defined: Vec<f64> = records.iter().filter_map(|r| r.dbi).collect();
    let cp: Vec<f64> = records.iter().map(|r| r.cp).collect();
    let nmi: Vec<f64> = records.iter().map(|r| r.nmi).collect();
    let clusters: Vec<f64> = records.iter().map(|r| r.clusters as f64).collect();
    Aggregates {
        dbi_defined: defined.len(),
        dbi_mean: (!defined.is_empty()).then(|| metrics::mean(&defined)),
        dbi_std: (!defined.is_empty()).then(|| metrics::population_std(&defined)),
        cp_mean: metrics::mean(&cp),
        cp_std: metrics::population_std(&cp),
        nmi_mean: metrics::mean(&nmi),
        nmi_std: metrics::population_std(&nmi),
        clusters_mean: metrics::mean(&clusters),
        clusters_std: metrics::population_std(&clusters),
    }
}

/// Runs `cfg.trials` independent shuffled trials and aggregates them.
///
/// The report depends only on the configuration and seed; the returned
/// timings are measurement noise by nature and are reported separately.
pub fn run_trials(cfg: &ExperimentConfig, data: &LoadedDataset) -> Result<(RunReport, Timings)> {
    if data.points.is_empty() {
        return Err(BenchError::Input(format!("dataset {} is empty", data.name)));
    }
    let points = scale_points(&data.points, cfg.scale);
    let flats: Vec<Vec<f64>> = points.iter().map(|p| p.flatten()).collect();

    let total_start = Instant::now();
    let results: Vec<Result<(TrialRecord, TrialTiming)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| match cfg.algo {
            Algo::Kmeans => kmeans_trial(cfg, data, &flats, t),
            _ => online_trial(cfg, data, &points, &flats, t),
        })
        .collect();

    let mut records = Vec::with_capacity(results.len());
    let mut per_trial = Vec::with_capacity(results.len());
    for r in results {
        let (record, timing) = r?;
        records.push(record);
        per_trial.push(timing);
    }
    let aggregates = aggregate(&records);

    let report = RunReport {
        dataset: data.name.clone(),
        algo: cfg.algo,
        rho: cfg.rho,
        tau: cfg.tau,
        alpha: cfg.alpha,
        lr: cfg.lr,
        glr: cfg.glr,
        scale: cfg.scale,
        split_ratio: cfg.split_ratio,
        trials: cfg.trials,
        seed: cfg.seed,
        points: data.points.len(),
        classes: data.class_count,
        records,
        aggregates,
    };
    let timings = Timings {
        per_trial,
        total_s: total_start.elapsed().as_secs_f64(),
    };
    Ok((report, timings))
}
