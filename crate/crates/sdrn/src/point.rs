use alloc::string::String;
use alloc::vec::Vec;

use crate::{Result, SdrnError};

/// The channel layout of a network's input space: how many channels there
/// are and how many dimensions each one carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSpec {
    dims: Vec<usize>,
}

impl ChannelSpec {
    /// Builds a layout from per-channel dimensionalities. Every channel must
    /// have at least one dimension.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(SdrnError::InvalidConfig(String::from(
                "a channel layout needs at least one channel",
            )));
        }
        if dims.contains(&0) {
            return Err(SdrnError::InvalidConfig(String::from(
                "every channel needs at least one dimension",
            )));
        }
        Ok(ChannelSpec { dims })
    }

    /// Convenience for the common single-channel case.
    pub fn single(dim: usize) -> Result<Self> {
        ChannelSpec::new(alloc::vec![dim])
    }

    /// Number of channels.
    pub fn channels(&self) -> usize {
        self.dims.len()
    }

    /// Per-channel dimensionalities.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total dimensionality across all channels.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Splits a flat coordinate slice into per-channel vectors.
    pub fn split(&self, flat: &[f64]) -> Result<MultiChannelPoint> {
        if flat.len() != self.total_dim() {
            return Err(SdrnError::DimensionMismatch {
                channel: 0,
                expected: self.total_dim(),
                got: flat.len(),
            });
        }
        let mut channels = Vec::with_capacity(self.dims.len());
        let mut offset = 0;
        for &d in &self.dims {
            channels.push(flat[offset..offset + d].to_vec());
            offset += d;
        }
        Ok(MultiChannelPoint { channels })
    }
}

/// One input observation, split into channels.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiChannelPoint {
    channels: Vec<Vec<f64>>,
}

impl MultiChannelPoint {
    /// Builds a point from per-channel coordinate vectors.
    pub fn new(channels: Vec<Vec<f64>>) -> Self {
        MultiChannelPoint { channels }
    }

    /// Builds a single-channel point.
    pub fn single(coords: Vec<f64>) -> Self {
        MultiChannelPoint {
            channels: alloc::vec![coords],
        }
    }

    /// Number of channels in this point.
    pub fn channels(&self) -> usize {
        self.channels.len()
    }

    /// Coordinates of one channel.
    pub fn channel(&self, k: usize) -> &[f64] {
        &self.channels[k]
    }

    /// Concatenates all channels back into one flat vector.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for c in &self.channels {
            out.extend_from_slice(c);
        }
        out
    }

    /// Checks the point against a channel layout: channel count, per-channel
    /// dimensionality, and finiteness of every coordinate.
    pub fn validate(&self, spec: &ChannelSpec) -> Result<()> {
        if self.channels.len() != spec.channels() {
            return Err(SdrnError::ChannelMismatch {
                expected: spec.channels(),
                got: self.channels.len(),
            });
        }
        for (k, (c, &d)) in self.channels.iter().zip(spec.dims()).enumerate() {
            if c.len() != d {
                return Err(SdrnError::DimensionMismatch {
                    channel: k,
                    expected: d,
                    got: c.len(),
                });
            }
            if let Some(i) = c.iter().position(|v| !v.is_finite()) {
                return Err(SdrnError::NonFinite {
                    channel: k,
                    index: i,
                });
            }
        }
        Ok(())
    }
}
