//! Node grouping: the per-step merge pass that keeps the node count in
//! check.
//!
//! After a node absorbs a point (or is freshly created), it is tested
//! against every other node with three criteria evaluated strictly in
//! order — corner **distance**, volume **overlap** (an
//! intersection-over-union surrogate), and merged-box **size** — and each
//! gate must pass in every channel before the next is computed. Among the
//! candidates that clear all three gates, the node merges with the closest
//! one; at most one merge happens per step, so a training step can shrink
//! the node count by one at most.
//!
//! All comparisons run on distances and edge lengths divided by the global
//! bounding box's edges, which makes every criterion invariant under
//! per-axis rescaling of the data.

use alloc::vec::Vec;

use crate::hyperbox::{Hyperbox, HyperboxWeight};
use crate::network::{GlobalBound, NetworkState};

/// Floor applied to each normalized edge when computing box volumes, so
/// point-like and flat boxes still get a meaningful overlap ratio instead
/// of a hard zero. Flat axes contribute the same floored factor to every
/// volume in the ratio, so they cancel rather than distort.
pub const EPS_EDGE: f64 = 1e-6;

/// Normalized corner distance between two templates.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDistance {
    /// Smallest normalized corner gap per channel.
    pub per_channel: Vec<f64>,
    /// The largest per-channel value; this is what the distance gate tests.
    pub max: f64,
}

/// The outcome of evaluating one candidate pair through the three gates.
///
/// `candidate_index` is populated exactly when all three gates passed.
/// `iou_value` is `0.0` — a value the real ratio can never take — whenever
/// the distance gate already failed and the overlap was never computed.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupingDecision {
    /// The examined node, present iff every criterion passed.
    pub candidate_index: Option<usize>,
    /// Whether the normalized corner distance stayed under `1 - rho`.
    pub distance_ok: bool,
    /// Whether the volume overlap exceeded `tau` in every channel.
    pub iou_ok: bool,
    /// Whether every edge of the hypothetical merged box stayed within
    /// `(1 - rho)` of the global edge.
    pub size_ok: bool,
    /// Smallest per-channel overlap ratio, or `0.0` if never computed.
    pub iou_value: f64,
    /// The tested distance value.
    pub max_norm_distance: f64,
}

/// Corner distance between two templates, normalized by the global edges.
///
/// Per channel, each axis yields two candidate gaps — between like corners
/// and between crossed corners — each divided by the global edge length on
/// that axis; the channel's distance is the smallest of those `2z` values,
/// and `max` aggregates the channels pessimistically.
pub fn pair_distance(a: &HyperboxWeight, b: &HyperboxWeight, g: &GlobalBound) -> PairDistance {
    let mut per_channel = Vec::with_capacity(a.channels());
    let mut max = 0.0f64;
    for k in 0..a.channels() {
        let (ba, bb) = (a.channel(k), b.channel(k));
        let mut best = f64::INFINITY;
        for e in 0..ba.dim() {
            let m = g.width(k, e);
            let lo_gap = (ba.lo()[e] - bb.lo()[e])
                .abs()
                .min((ba.hi()[e] - bb.lo()[e]).abs());
            let hi_gap = (ba.hi()[e] - bb.hi()[e])
                .abs()
                .min((ba.lo()[e] - bb.hi()[e]).abs());
            for raw in [lo_gap, hi_gap] {
                let norm = if raw == 0.0 {
                    0.0
                } else if m == 0.0 {
                    f64::INFINITY
                } else {
                    raw / m
                };
                best = best.min(norm);
            }
        }
        per_channel.push(best);
        max = max.max(best);
    }
    PairDistance { per_channel, max }
}

/// The distance gate: passes iff the distance stays strictly under
/// `1 - rho`.
pub fn distance_criterion(dmax: f64, rho: f64) -> bool {
    dmax < 1.0 - rho
}

/// The box the two templates would occupy if merged: the channel-wise hull.
pub fn merge_hypothesis(a: &HyperboxWeight, b: &HyperboxWeight) -> HyperboxWeight {
    a.hull(b)
}

/// Volume of one channel's box on normalized edges: the product over axes
/// of `edge / m`, with each factor floored at [`EPS_EDGE`]. Axes whose
/// global edge is zero contribute the floor.
pub fn normalized_volume(b: &Hyperbox, m: &[f64]) -> f64 {
    let mut v = 1.0;
    for e in 0..b.dim() {
        let me = m.get(e).copied().unwrap_or(0.0);
        let edge = if me == 0.0 {
            0.0
        } else {
            (b.hi()[e] - b.lo()[e]) / me
        };
        v *= edge.max(EPS_EDGE);
    }
    v
}

/// The overlap gate: per channel, the ratio of the two volumes' sum to the
/// merged volume, `(V_a + V_b) / V_merged`, must strictly exceed `tau` in
/// every channel. Returns the pass flag and the smallest per-channel ratio.
pub fn iou_criterion(
    a: &HyperboxWeight,
    b: &HyperboxWeight,
    g: &GlobalBound,
    tau: f64,
) -> (bool, f64) {
    let merged = merge_hypothesis(a, b);
    let mut pass = true;
    let mut value = f64::INFINITY;
    for k in 0..a.channels() {
        let m = g.channel_widths(k);
        let va = normalized_volume(a.channel(k), m);
        let vb = normalized_volume(b.channel(k), m);
        let vm = normalized_volume(merged.channel(k), m);
        let ratio = (va + vb) / vm;
        pass &= ratio > tau;
        value = value.min(ratio);
    }
    (pass, value)
}

/// The size gate: every edge of the merged box must stay within
/// `(1 - rho)` times the global edge on that axis.
pub fn size_criterion(merged: &HyperboxWeight, g: &GlobalBound, rho: f64) -> bool {
    for k in 0..merged.channels() {
        let b = merged.channel(k);
        for e in 0..b.dim() {
            if b.hi()[e] - b.lo()[e] > g.width(k, e) * (1.0 - rho) {
                return false;
            }
        }
    }
    true
}

/// Runs one candidate pair through the ordered gates, short-circuiting so
/// later criteria are never computed for a pair that already failed.
pub fn evaluate_pair(
    a: &HyperboxWeight,
    b: &HyperboxWeight,
    g: &GlobalBound,
    rho: f64,
    tau: f64,
    candidate: usize,
) -> GroupingDecision {
    let d = pair_distance(a, b, g);
    let distance_ok = distance_criterion(d.max, rho);
    if !distance_ok {
        return GroupingDecision {
            candidate_index: None,
            distance_ok,
            iou_ok: false,
            size_ok: false,
            iou_value: 0.0,
            max_norm_distance: d.max,
        };
    }
    let (iou_ok, iou_value) = iou_criterion(a, b, g, tau);
    if !iou_ok {
        return GroupingDecision {
            candidate_index: None,
            distance_ok,
            iou_ok,
            size_ok: false,
            iou_value,
            max_norm_distance: d.max,
        };
    }
    let size_ok = size_criterion(&merge_hypothesis(a, b), g, rho);
    GroupingDecision {
        candidate_index: if size_ok { Some(candidate) } else { None },
        distance_ok,
        iou_ok,
        size_ok,
        iou_value,
        max_norm_distance: d.max,
    }
}

/// Evaluates node `j` against every other node, returning each examined
/// index with its gate-by-gate decision.
pub fn evaluate_candidates(state: &NetworkState, j: usize) -> Vec<(usize, GroupingDecision)> {
    let nodes = state.nodes();
    let g = state.global_bound();
    let rho = state.params().rho;
    let tau = state.params().tau;
    let mut out = Vec::with_capacity(nodes.len().saturating_sub(1));
    for (i, other) in nodes.iter().enumerate() {
        if i == j {
            continue;
        }
        out.push((i, evaluate_pair(&nodes[j], other, g, rho, tau, i)));
    }
    out
}

/// Attempts to merge node `j` with its best qualifying neighbor.
///
/// Among candidates passing all three gates, the one with the smallest
/// normalized distance wins (ties to the lowest index). The merged template
/// is the hull of the pair, stored at the smaller of the two indices; the
/// larger index is removed, shifting every later node down by one. Returns
/// the merged node's index, or `None` when nothing qualified.
pub fn try_group(state: &mut NetworkState, j: usize) -> Option<usize> {
    if j >= state.node_count() {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, decision) in evaluate_candidates(state, j) {
        if decision.candidate_index.is_some()
            && best.is_none_or(|(_, d)| decision.max_norm_distance < d)
        {
            best = Some((i, decision.max_norm_distance));
        }
    }
    let (partner, _) = best?;
    let nodes = state.nodes_mut();
    let merged = nodes[j].hull(&nodes[partner]);
    let keep = j.min(partner);
    nodes[keep] = merged;
    nodes.remove(j.max(partner));
    Some(keep)
}
