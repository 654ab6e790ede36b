/*!
Online incremental clustering with scale-free hyperbox categories.

This crate implements s-DRN (stabilized developmental resonance network), an
adaptive-resonance-style clustering model that consumes a stream of points one
at a time and maintains a growing, self-pruning set of category nodes. Each
node is an axis-aligned hyperbox; an input either *resonates* with the most
active node (which then stretches to absorb it) or spawns a new node. Three
properties distinguish the model from classic fuzzy-ART relatives:

- **No input normalization.** A running global bounding box of everything seen
  so far normalizes all internal comparisons, so features can arrive at any
  scale — raw monetary amounts next to values in `[0, 1]` — and multiplying a
  whole stream by a constant leaves every clustering decision unchanged.
- **Scale-free activation.** Node activation divides point-to-box distances by
  the global box diagonal before exponentiation, which keeps the choice
  function discriminative at scales where a raw `exp(-distance)` would
  underflow to zero.
- **Node grouping.** After every step the just-updated node is tested against
  all others with three ordered criteria (corner distance, volume-based
  intersection-over-union, merged-box size) and merged with at most one of
  them, counteracting the node proliferation that open-ended category
  creation otherwise causes.

Inputs may be split into *channels* (independent feature groups); every
channel holds its own hyperbox and the per-channel activations are blended by
a contribution weight `gamma`. All six bundled benchmark setups use a single
channel, but the machinery is fully multi-channel.

The crate also carries the evaluation half of a benchmark harness: a seeded
k-means baseline ([`baselines::kmeans_fit`]), a deliberately destabilized
ablation with the raw un-normalized activation ([`baselines::drn_like`]), and
the clustering metrics used to compare them ([`metrics::dbi`],
[`metrics::purity`], [`metrics::nmi`], [`metrics::combined_score`]).

The crate is `no_std` (with `alloc`); file IO, dataset handling, and the CLI
live in the companion `sdrn-bench` crate.

# Example

```
use sdrn::{ChannelSpec, Hyperparams, MultiChannelPoint, NetworkState};

let spec = ChannelSpec::single(2).unwrap();
let params = Hyperparams::defaults(1);
let mut net = NetworkState::new(spec, params).unwrap();

// Two tight blobs, streamed one point at a time.
let stream = [
    [0.0, 0.1], [0.1, 0.0], [0.05, 0.05],
    [9.0, 9.1], [9.1, 9.0], [9.05, 9.05],
];
for p in &stream {
    net.train_step(&MultiChannelPoint::single(p.to_vec())).unwrap();
}

let a = net.assign(&MultiChannelPoint::single(vec![0.02, 0.02])).unwrap();
let b = net.assign(&MultiChannelPoint::single(vec![9.02, 9.02])).unwrap();
assert_ne!(a, b);
```
*/
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

mod error;
mod hyperbox;
mod network;
mod point;

pub mod baselines;
pub mod grouping;
pub mod metrics;

pub use error::SdrnError;
pub use hyperbox::{Hyperbox, HyperboxWeight};
pub use network::{
    ActivationKind, GlobalBound, Hyperparams, MatchResult, NetworkState, StepTrace,
};
pub use point::{ChannelSpec, MultiChannelPoint};

/// Shorthand for results carrying a [`SdrnError`].
pub type Result<T> = core::result::Result<T, SdrnError>;
