//! Reference competitors for the comparative benchmarks: a seeded batch
//! k-means and a deliberately destabilized network ablation.
//!
//! k-means stands in for the batch algorithms the streaming network is
//! compared against; it needs the cluster count up front and a train/test
//! split, neither of which the network requires. The ablation
//! ([`drn_like`]) is the same network with the scale normalization removed
//! and grouping turned off — the configuration whose activation collapses
//! when features grow large, which the benchmarks use to demonstrate what
//! the normalization buys.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{ActivationKind, Hyperparams, NetworkState, StepTrace};
use crate::point::{ChannelSpec, MultiChannelPoint};
use crate::{Result, SdrnError};

/// A fitted k-means clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansModel {
    /// Number of centroids, fixed at fit time.
    pub k: usize,
    /// The fitted centroids.
    pub centroids: Vec<Vec<f64>>,
    /// Iteration cap the fit ran under.
    pub max_iters: usize,
    /// Seed the fit ran under.
    pub seed: u64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn validate_data(data: &[Vec<f64>], k: usize) -> Result<usize> {
    if data.is_empty() {
        return Err(SdrnError::EmptyInput);
    }
    if k == 0 {
        return Err(SdrnError::InvalidConfig(alloc::string::String::from(
            "k must be at least 1",
        )));
    }
    if k > data.len() {
        return Err(SdrnError::KTooLarge {
            k,
            n: data.len(),
        });
    }
    let dim = data[0].len();
    if let Some(p) = data.iter().find(|p| p.len() != dim) {
        return Err(SdrnError::LengthMismatch {
            left: dim,
            right: p.len(),
        });
    }
    Ok(dim)
}

/// Spread-proportional seeding: the first centroid is a uniformly random
/// point, each later one a point drawn with probability proportional to its
/// squared distance from the centroids chosen so far.
fn seed_centroids(data: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(data[rng.gen_range(0..data.len())].clone());
    let mut d2: Vec<f64> = data.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut u = rng.gen::<f64>() * total;
            let mut chosen = data.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if u < w {
                    chosen = i;
                    break;
                }
                u -= w;
            }
            chosen
        } else {
            // Every point already coincides with a centroid; any pick works.
            rng.gen_range(0..data.len())
        };
        centroids.push(data[next].clone());
        for (i, p) in data.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

/// Fits k-means and also returns the inertia (sum of squared distances to
/// the nearest centroid) observed at each assignment pass, which is useful
/// for convergence checks: the sequence never increases.
pub fn kmeans_fit_history(
    data: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iters: usize,
) -> Result<(KMeansModel, Vec<f64>)> {
    let dim = validate_data(data, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(data, k, &mut rng);
    let mut history = Vec::new();

    for _ in 0..max_iters {
        // Assignment pass (ties to the lowest centroid index).
        let mut assign = Vec::with_capacity(data.len());
        let mut inertia = 0.0;
        for p in data {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = sq_dist(p, centroid);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            assign.push(best);
            inertia += best_d;
        }
        history.push(inertia);

        // Update pass.
        let mut sums = alloc::vec![alloc::vec![0.0; dim]; k];
        let mut counts = alloc::vec![0usize; k];
        for (p, &c) in data.iter().zip(&assign) {
            counts[c] += 1;
            for e in 0..dim {
                sums[c][e] += p[e];
            }
        }
        let mut moved = 0.0f64;
        let mut claimed = alloc::vec![false; data.len()];
        for c in 0..k {
            let new = if counts[c] > 0 {
                sums[c].iter().map(|s| s / counts[c] as f64).collect()
            } else {
                // Re-seed a starved centroid at the point farthest from its
                // current centroid, skipping points already claimed this way.
                let far = data
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !claimed[*i])
                    .max_by(|(_, a), (_, b)| {
                        let da = sq_dist(a, &centroids[assign_nearest(a, &centroids)]);
                        let db = sq_dist(b, &centroids[assign_nearest(b, &centroids)]);
                        da.total_cmp(&db)
                    })
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                claimed[far] = true;
                data[far].clone()
            };
            moved = moved.max(libm::sqrt(sq_dist(&new, &centroids[c])));
            centroids[c] = new;
        }
        if moved < 1e-9 {
            break;
        }
    }

    Ok((
        KMeansModel {
            k,
            centroids,
            max_iters,
            seed,
        },
        history,
    ))
}

fn assign_nearest(p: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(p, centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Fits k-means: spread-proportional seeding followed by alternating
/// assignment/update passes, fully determined by `seed`. Stops at
/// `max_iters` or when no centroid moves farther than `1e-9`. A centroid
/// that loses all its members is re-seeded at the farthest point.
pub fn kmeans_fit(data: &[Vec<f64>], k: usize, seed: u64, max_iters: usize) -> Result<KMeansModel> {
    kmeans_fit_history(data, k, seed, max_iters).map(|(m, _)| m)
}

/// Index of the nearest centroid by squared distance, ties to the lowest.
pub fn kmeans_assign(model: &KMeansModel, x: &[f64]) -> usize {
    assign_nearest(x, &model.centroids)
}

/// Builds the destabilized ablation network: raw (un-normalized) activation
/// and no grouping pass. Everything else — vigilance, learning, the global
/// bounding box feeding the match test — stays identical to the stabilized
/// network.
pub fn drn_like(spec: ChannelSpec, params: Hyperparams) -> Result<NetworkState> {
    NetworkState::with_options(spec, params, ActivationKind::Raw, false)
}

/// One training step of the ablation; same contract as the stabilized
/// network's step.
pub fn drn_like_step(state: &mut NetworkState, p: &MultiChannelPoint) -> Result<StepTrace> {
    state.train_step(p)
}
