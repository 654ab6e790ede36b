//! Clustering quality measures: Davies-Bouldin index, cluster purity,
//! normalized mutual information, and the combined score that the vigilance
//! sweep minimizes.
//!
//! All functions are pure. Cluster and class ids are opaque `usize` labels;
//! every measure is invariant under relabeling.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::{Result, SdrnError};

/// Cap on the reciprocal-deviation weights of [`combined_score`], so runs
/// with (near-)constant metrics still produce a finite score.
pub const XI_CAP: f64 = 1e6;

/// Arithmetic mean. Empty input gives `NaN`; callers guard.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation (divides by `n`, not `n - 1`).
pub fn population_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64;
    libm::sqrt(var)
}

fn check_pair(left: usize, right: usize) -> Result<()> {
    if left == 0 || right == 0 {
        return Err(SdrnError::EmptyInput);
    }
    if left != right {
        return Err(SdrnError::LengthMismatch { left, right });
    }
    Ok(())
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    libm::sqrt(s)
}

/// Davies-Bouldin index of a hard partition: the average, over clusters, of
/// the worst ratio of summed within-cluster scatter to between-centroid
/// distance. Lower is better; clusters with coincident centroids make that
/// pair's ratio infinite, and the infinity propagates into the average.
///
/// Scatter is the mean Euclidean distance to the cluster centroid. Labels
/// that never occur simply don't form clusters; at least two distinct
/// labels must remain or the index is undefined.
pub fn dbi(points: &[Vec<f64>], predicted: &[usize]) -> Result<f64> {
    check_pair(points.len(), predicted.len())?;
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(SdrnError::LengthMismatch {
            left: dim,
            right: p.len(),
        });
    }

    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in predicted.iter().enumerate() {
        members.entry(c).or_default().push(i);
    }
    let k = members.len();
    if k < 2 {
        return Err(SdrnError::DbiUndefined { clusters: k });
    }

    let mut centroids = Vec::with_capacity(k);
    let mut scatters = Vec::with_capacity(k);
    for idxs in members.values() {
        let mut mu = alloc::vec![0.0; dim];
        for &i in idxs {
            for e in 0..dim {
                mu[e] += points[i][e];
            }
        }
        for m in &mut mu {
            *m /= idxs.len() as f64;
        }
        let sigma = idxs.iter().map(|&i| euclid(&points[i], &mu)).sum::<f64>()
            / idxs.len() as f64;
        centroids.push(mu);
        scatters.push(sigma);
    }

    let mut total = 0.0;
    for a in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for b in 0..k {
            if a == b {
                continue;
            }
            let d = euclid(&centroids[a], &centroids[b]);
            let ratio = if d == 0.0 {
                f64::INFINITY
            } else {
                (scatters[a] + scatters[b]) / d
            };
            worst = worst.max(ratio);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// Cluster purity: the fraction of points that would be correct if every
/// cluster voted for its majority class. Always in `(0, 1]`; easy to
/// inflate by over-clustering, which is why it is read next to [`nmi`].
pub fn purity(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    check_pair(predicted.len(), truth.len())?;
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&w, &c) in predicted.iter().zip(truth) {
        *counts.entry((w, c)).or_insert(0) += 1;
    }
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for (&(w, _), &n) in &counts {
        let e = best.entry(w).or_insert(0);
        *e = (*e).max(n);
    }
    Ok(best.values().sum::<usize>() as f64 / predicted.len() as f64)
}

/// Normalized mutual information between the predicted partition and the
/// ground truth: `2 I / (H_pred + H_truth)` with natural logarithms,
/// clamped to `[0, 1]`. Two trivial partitions (both single-block) share
/// full information by convention, giving `1`.
pub fn nmi(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    check_pair(predicted.len(), truth.len())?;
    let n = predicted.len() as f64;
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for (&w, &c) in predicted.iter().zip(truth) {
        *joint.entry((w, c)).or_insert(0) += 1;
        *rows.entry(w).or_insert(0) += 1;
        *cols.entry(c).or_insert(0) += 1;
    }

    let entropy = |counts: &BTreeMap<usize, usize>| -> f64 {
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * libm::log(p)
            })
            .sum()
    };
    let h_pred = entropy(&rows);
    let h_truth = entropy(&cols);
    if h_pred + h_truth == 0.0 {
        return Ok(1.0);
    }

    let mut info = 0.0;
    for (&(w, c), &cnt) in &joint {
        let p = cnt as f64 / n;
        let pw = rows[&w] as f64 / n;
        let pc = cols[&c] as f64 / n;
        info += p * libm::log(p / (pw * pc));
    }
    Ok((2.0 * info / (h_pred + h_truth)).clamp(0.0, 1.0))
}

/// The parameter-selection score: each metric's mean across trials, weighted
/// by the reciprocal of its own spread so that noisier metrics count less,
/// with purity and mutual information flipped so that lower is uniformly
/// better:
///
/// `T = xi_d * mean(dbi) + xi_c * (1 - mean(cp)) + xi_n * (1 - mean(nmi))`
///
/// Each weight `xi` is `1 / std` (population), capped at [`XI_CAP`] when a
/// metric barely varies. Every list needs at least two runs; the lists may
/// have different lengths (a trial can lack a defined DBI).
pub fn combined_score(dbi_runs: &[f64], cp_runs: &[f64], nmi_runs: &[f64]) -> Result<f64> {
    for runs in [dbi_runs, cp_runs, nmi_runs] {
        if runs.len() < 2 {
            return Err(SdrnError::NotEnoughRuns {
                needed: 2,
                got: runs.len(),
            });
        }
    }
    let xi = |runs: &[f64]| -> f64 {
        let s = population_std(runs);
        if s > 0.0 {
            (1.0 / s).min(XI_CAP)
        } else {
            XI_CAP
        }
    };
    Ok(xi(dbi_runs) * mean(dbi_runs)
        + xi(cp_runs) * (1.0 - mean(cp_runs))
        + xi(nmi_runs) * (1.0 - mean(nmi_runs)))
}
