use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::grouping;
use crate::hyperbox::HyperboxWeight;
use crate::point::{ChannelSpec, MultiChannelPoint};
use crate::{Result, SdrnError};

/// Which choice function drives winner selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivationKind {
    /// Point-to-box distances are divided by the global bounding-box edge
    /// lengths before exponentiation. This is the scale-free form.
    Normalized,
    /// Raw distances go into the exponential unchanged. This reproduces the
    /// scale-sensitive ancestor model and exists as an ablation baseline.
    Raw,
}

/// Tunable parameters of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams {
    /// Vigilance: per-channel match threshold in `[0, 1]`. Higher values
    /// demand tighter fits and produce more, smaller nodes.
    pub rho: f64,
    /// Grouping threshold on the volume overlap ratio, in `(0, 2]`.
    pub tau: f64,
    /// Activation decay rate.
    pub alpha: f64,
    /// Per-channel contribution weights for the blended activation.
    pub gamma: Vec<f64>,
    /// Learning rate for node templates, in `[0, 1]`.
    pub lr: f64,
    /// Learning rate for the global bounding box, in `(0, 1]`.
    pub glr: f64,
}

impl Hyperparams {
    /// Baseline settings: `rho = 0.5`, `tau = 0.85`, `alpha = 1`, uniform
    /// channel weights, and full-rate learning for both node templates and
    /// the global box.
    pub fn defaults(channels: usize) -> Self {
        let share = if channels > 0 {
            1.0 / channels as f64
        } else {
            0.0
        };
        Hyperparams {
            rho: 0.5,
            tau: 0.85,
            alpha: 1.0,
            gamma: alloc::vec![share; channels],
            lr: 1.0,
            glr: 1.0,
        }
    }

    /// Checks all parameters against their legal ranges for a network with
    /// the given number of channels.
    pub fn validate(&self, channels: usize) -> Result<()> {
        fn bad(msg: String) -> SdrnError {
            SdrnError::InvalidConfig(msg)
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(bad(format!("rho must lie in [0, 1], got {}", self.rho)));
        }
        if !(self.tau > 0.0 && self.tau <= 2.0) {
            return Err(bad(format!("tau must lie in (0, 2], got {}", self.tau)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(bad(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.lr) {
            return Err(bad(format!("lr must lie in [0, 1], got {}", self.lr)));
        }
        if !(self.glr > 0.0 && self.glr <= 1.0) {
            return Err(bad(format!("glr must lie in (0, 1], got {}", self.glr)));
        }
        if self.gamma.len() != channels {
            return Err(bad(format!(
                "gamma needs one weight per channel ({channels}), got {}",
                self.gamma.len()
            )));
        }
        if self.gamma.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(bad(String::from(
                "gamma weights must be finite and non-negative",
            )));
        }
        if self.gamma.iter().sum::<f64>() <= 0.0 {
            return Err(bad(String::from("gamma weights must not all be zero")));
        }
        Ok(())
    }
}

/// The running bounding box of everything the network has seen, kept per
/// channel. Its edge lengths are the normalization constants that make
/// activation, matching, and grouping scale-free.
///
/// A channel's box only moves when a point falls outside it, and then each
/// corner moves a fraction `glr` of the way toward enclosing the point.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalBound {
    bounds: Option<HyperboxWeight>,
    widths: Vec<Vec<f64>>,
}

impl GlobalBound {
    /// An empty bound that initializes itself on the first observation.
    pub fn new() -> Self {
        GlobalBound {
            bounds: None,
            widths: Vec::new(),
        }
    }

    /// Builds a bound from explicit per-channel boxes, mainly useful for
    /// probing the grouping criteria in isolation.
    pub fn from_bounds(bounds: HyperboxWeight) -> Self {
        let widths = bounds.boxes().iter().map(|b| b.widths()).collect();
        GlobalBound {
            bounds: Some(bounds),
            widths,
        }
    }

    /// Whether any observation has been absorbed yet.
    pub fn is_initialized(&self) -> bool {
        self.bounds.is_some()
    }

    /// The current per-channel boxes, if initialized.
    pub fn bounds(&self) -> Option<&HyperboxWeight> {
        self.bounds.as_ref()
    }

    /// Edge length of channel `k` along axis `e`; zero while uninitialized.
    pub fn width(&self, k: usize, e: usize) -> f64 {
        self.widths.get(k).map_or(0.0, |w| w[e])
    }

    /// All edge lengths of channel `k`; empty while uninitialized.
    pub fn channel_widths(&self, k: usize) -> &[f64] {
        self.widths.get(k).map_or(&[], |w| w.as_slice())
    }

    /// Absorbs one observation. The first observation becomes a degenerate
    /// box; afterwards each channel expands independently, and only when the
    /// observation falls outside it.
    pub fn update(&mut self, p: &MultiChannelPoint, glr: f64) {
        match &mut self.bounds {
            None => {
                let channels: Vec<&[f64]> = (0..p.channels()).map(|k| p.channel(k)).collect();
                let bounds = HyperboxWeight::point(&channels);
                self.widths = bounds.boxes().iter().map(|b| b.widths()).collect();
                self.bounds = Some(bounds);
            }
            Some(bounds) => {
                for k in 0..p.channels() {
                    let x = p.channel(k);
                    // Channel-local update: only boxes the point escapes
                    // from are stretched.
                    if bounds.channel(k).distance_to(x) > 0.0 {
                        bounds.channel_mut(k).absorb(x, glr);
                        self.widths[k] = bounds.channel(k).widths();
                    }
                }
            }
        }
    }
}

impl Default for GlobalBound {
    fn default() -> Self {
        GlobalBound::new()
    }
}

/// Outcome of testing one node's template against an input.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Match degree per channel, each in `[0, 1]`.
    pub per_channel: Vec<f64>,
    /// Whether every channel met the vigilance threshold.
    pub resonates: bool,
}

/// What happened during one training step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    /// The most active node before any decision, `None` on the very first
    /// step when the network was still empty.
    pub winner: Option<usize>,
    /// Whether the winner passed the vigilance test and absorbed the point.
    pub resonated: bool,
    /// Whether a fresh node was created for the point instead.
    pub created: bool,
    /// Index of the node that ended up holding the point, before grouping.
    pub node: usize,
    /// Final index of the merged node if grouping fused the updated node
    /// with a neighbor this step.
    pub merged_into: Option<usize>,
}

/// The full state of an s-DRN clusterer: hyperparameters, the global
/// bounding box, and the list of category nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    spec: ChannelSpec,
    params: Hyperparams,
    activation: ActivationKind,
    grouping_enabled: bool,
    global: GlobalBound,
    nodes: Vec<HyperboxWeight>,
    steps: u64,
}

impl NetworkState {
    /// A fresh network with scale-free activation and grouping enabled.
    pub fn new(spec: ChannelSpec, params: Hyperparams) -> Result<Self> {
        NetworkState::with_options(spec, params, ActivationKind::Normalized, true)
    }

    /// A fresh network with explicit activation and grouping choices, used
    /// by the ablation baseline.
    pub fn with_options(
        spec: ChannelSpec,
        params: Hyperparams,
        activation: ActivationKind,
        grouping_enabled: bool,
    ) -> Result<Self> {
        params.validate(spec.channels())?;
        Ok(NetworkState {
            spec,
            params,
            activation,
            grouping_enabled,
            global: GlobalBound::new(),
            nodes: Vec::new(),
            steps: 0,
        })
    }

    /// The channel layout.
    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    /// The hyperparameters.
    pub fn params(&self) -> &Hyperparams {
        &self.params
    }

    /// Which choice function is in use.
    pub fn activation_kind(&self) -> ActivationKind {
        self.activation
    }

    /// Whether the per-step grouping pass is enabled.
    pub fn grouping_enabled(&self) -> bool {
        self.grouping_enabled
    }

    /// The global bounding box.
    pub fn global_bound(&self) -> &GlobalBound {
        &self.global
    }

    /// The current node templates.
    pub fn nodes(&self) -> &[HyperboxWeight] {
        &self.nodes
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of training steps taken.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub(crate) fn nodes_mut(&mut self) -> &mut Vec<HyperboxWeight> {
        &mut self.nodes
    }

    /// Absorbs a point into the global bounding box without touching any
    /// node. Training does this automatically as its first move.
    pub fn update_global(&mut self, p: &MultiChannelPoint) -> Result<()> {
        p.validate(&self.spec)?;
        self.global.update(p, self.params.glr);
        Ok(())
    }

    /// Activation of every node for the given point, in node order.
    ///
    /// Each channel contributes `gamma_k * exp(-alpha * s_k)` where `s_k`
    /// sums the per-axis gaps between point and box. In scale-free mode each
    /// gap is divided by the global box's edge length on that axis first; a
    /// gap along an axis the global box has never seen vary (zero edge
    /// length) forces that channel's contribution to zero.
    pub fn activations(&self, p: &MultiChannelPoint) -> Result<Vec<f64>> {
        p.validate(&self.spec)?;
        Ok(self
            .nodes
            .iter()
            .map(|node| self.node_activation(node, p))
            .collect())
    }

    fn node_activation(&self, node: &HyperboxWeight, p: &MultiChannelPoint) -> f64 {
        let mut total = 0.0;
        for k in 0..self.spec.channels() {
            let x = p.channel(k);
            let b = node.channel(k);
            let mut s = 0.0;
            for (e, &xe) in x.iter().enumerate() {
                let d = b.element_distance(e, xe);
                if d == 0.0 {
                    continue;
                }
                match self.activation {
                    ActivationKind::Raw => s += d,
                    ActivationKind::Normalized => {
                        let m = self.global.width(k, e);
                        if m == 0.0 {
                            // A gap along a flat axis of the global box can
                            // never be normalized away; it kills the channel.
                            s = f64::INFINITY;
                            break;
                        }
                        s += d / m;
                    }
                }
            }
            total += self.params.gamma[k] * libm::exp(-self.params.alpha * s);
        }
        total
    }

    /// Vigilance test of node `j` against a point.
    ///
    /// Per channel, each axis contributes the fraction of the global edge
    /// length that the box would have to span to cover the point (clamped to
    /// one); the channel matches to the degree those fractions stay small,
    /// and the node resonates only if every channel's degree reaches `rho`.
    pub fn match_template(&self, j: usize, p: &MultiChannelPoint) -> Result<MatchResult> {
        p.validate(&self.spec)?;
        if j >= self.nodes.len() {
            return Err(SdrnError::EmptyNetwork);
        }
        let node = &self.nodes[j];
        let mut per_channel = Vec::with_capacity(self.spec.channels());
        let mut resonates = true;
        for k in 0..self.spec.channels() {
            let x = p.channel(k);
            let b = node.channel(k);
            let z = x.len() as f64;
            let mut load = 0.0;
            for (e, &xe) in x.iter().enumerate() {
                let span = b.span_with(e, xe);
                let m = self.global.width(k, e);
                load += if m == 0.0 {
                    if span > 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (span / m).clamp(0.0, 1.0)
                };
            }
            let degree = (z - load) / z;
            resonates &= degree >= self.params.rho;
            per_channel.push(degree);
        }
        Ok(MatchResult {
            per_channel,
            resonates,
        })
    }

    /// Stretches node `j` toward the point at the configured learning rate.
    pub fn learn_template(&mut self, j: usize, p: &MultiChannelPoint) -> Result<()> {
        p.validate(&self.spec)?;
        if j >= self.nodes.len() {
            return Err(SdrnError::EmptyNetwork);
        }
        let channels: Vec<&[f64]> = (0..p.channels()).map(|k| p.channel(k)).collect();
        self.nodes[j].absorb(&channels, self.params.lr);
        Ok(())
    }

    /// Appends a fresh node whose template is the degenerate box at the
    /// point, returning its index.
    pub fn create_node(&mut self, p: &MultiChannelPoint) -> Result<usize> {
        p.validate(&self.spec)?;
        let channels: Vec<&[f64]> = (0..p.channels()).map(|k| p.channel(k)).collect();
        self.nodes.push(HyperboxWeight::point(&channels));
        Ok(self.nodes.len() - 1)
    }

    /// One full training step: update the global box, pick the most active
    /// node (ties to the lowest index), let it either absorb the point or —
    /// if the vigilance test fails — spawn a new node, then give the updated
    /// node one chance to merge with a neighbor.
    pub fn train_step(&mut self, p: &MultiChannelPoint) -> Result<StepTrace> {
        p.validate(&self.spec)?;
        self.global.update(p, self.params.glr);
        self.steps += 1;

        let channels: Vec<&[f64]> = (0..p.channels()).map(|k| p.channel(k)).collect();

        let (winner, resonated) = if self.nodes.is_empty() {
            (None, false)
        } else {
            let mut best = 0;
            let mut best_t = f64::NEG_INFINITY;
            for (j, node) in self.nodes.iter().enumerate() {
                let t = self.node_activation(node, p);
                if t > best_t {
                    best_t = t;
                    best = j;
                }
            }
            let m = self.match_template(best, p)?;
            (Some(best), m.resonates)
        };

        let (node, created) = match winner {
            Some(j) if resonated => {
                self.nodes[j].absorb(&channels, self.params.lr);
                (j, false)
            }
            _ => {
                self.nodes.push(HyperboxWeight::point(&channels));
                (self.nodes.len() - 1, true)
            }
        };

        let merged_into = if self.grouping_enabled {
            grouping::try_group(self, node)
        } else {
            None
        };

        Ok(StepTrace {
            winner,
            resonated,
            created,
            node,
            merged_into,
        })
    }

    /// Read-only cluster assignment: the index of the most active node (ties
    /// to the lowest index). Unlike training this never moves the global
    /// box, so held-out points can be assigned freely.
    pub fn assign(&self, p: &MultiChannelPoint) -> Result<usize> {
        p.validate(&self.spec)?;
        if self.nodes.is_empty() {
            return Err(SdrnError::EmptyNetwork);
        }
        let mut best = 0;
        let mut best_t = f64::NEG_INFINITY;
        for (j, node) in self.nodes.iter().enumerate() {
            let t = self.node_activation(node, p);
            if t > best_t {
                best_t = t;
                best = j;
            }
        }
        Ok(best)
    }
}
