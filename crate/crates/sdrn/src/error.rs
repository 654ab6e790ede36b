use alloc::string::String;
use core::fmt;

/// Errors produced by network construction, training, and the metric suite.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum SdrnError {
    /// A point carried a different number of channels than the network.
    ChannelMismatch { expected: usize, got: usize },
    /// One channel of a point had the wrong dimensionality.
    DimensionMismatch {
        channel: usize,
        expected: usize,
        got: usize,
    },
    /// An input coordinate was NaN or infinite.
    NonFinite { channel: usize, index: usize },
    /// A hyperparameter was outside its legal range.
    InvalidConfig(String),
    /// The operation needs at least one trained node.
    EmptyNetwork,
    /// The operation needs a non-empty input collection.
    EmptyInput,
    /// Two paired collections had different lengths.
    LengthMismatch { left: usize, right: usize },
    /// The Davies-Bouldin index needs at least two clusters.
    DbiUndefined { clusters: usize },
    /// An aggregate over trial runs needs more runs than it was given.
    NotEnoughRuns { needed: usize, got: usize },
    /// k-means was asked for more clusters than there are points.
    KTooLarge { k: usize, n: usize },
}

impl fmt::Display for SdrnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdrnError::ChannelMismatch { expected, got } => {
                write!(f, "expected {expected} channel(s), got {got}")
            }
            SdrnError::DimensionMismatch {
                channel,
                expected,
                got,
            } => write!(
                f,
                "channel {channel} expects {expected} dimension(s), got {got}"
            ),
            SdrnError::NonFinite { channel, index } => {
                write!(f, "non-finite coordinate at channel {channel}, index {index}")
            }
            SdrnError::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            SdrnError::EmptyNetwork => write!(f, "network has no nodes yet"),
            SdrnError::EmptyInput => write!(f, "input collection is empty"),
            SdrnError::LengthMismatch { left, right } => {
                write!(f, "paired collections differ in length: {left} vs {right}")
            }
            SdrnError::DbiUndefined { clusters } => write!(
                f,
                "Davies-Bouldin index needs at least 2 clusters, got {clusters}"
            ),
            SdrnError::NotEnoughRuns { needed, got } => {
                write!(f, "need at least {needed} runs, got {got}")
            }
            SdrnError::KTooLarge { k, n } => {
                write!(f, "cannot place {k} centroids among {n} point(s)")
            }
        }
    }
}

impl core::error::Error for SdrnError {}
