use alloc::string::String;
use alloc::vec::Vec;

use crate::{Result, SdrnError};

/// An axis-aligned box `[lo, hi]` in one channel's coordinate space.
///
/// Boxes are the category templates of the network: a node starts as the
/// degenerate box at its founding point and stretches (never shrinks) as it
/// absorbs further points.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperbox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Hyperbox {
    /// A degenerate box containing exactly one point.
    pub fn point(x: &[f64]) -> Self {
        Hyperbox {
            lo: x.to_vec(),
            hi: x.to_vec(),
        }
    }

    /// Builds a box from explicit corners, requiring `lo[e] <= hi[e]`.
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(SdrnError::LengthMismatch {
                left: lo.len(),
                right: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(SdrnError::InvalidConfig(String::from(
                "box lower corner must not exceed upper corner",
            )));
        }
        Ok(Hyperbox { lo, hi })
    }

    /// Lower corner.
    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    /// Upper corner.
    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    /// Dimensionality.
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Per-edge widths `hi - lo`.
    pub fn widths(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).collect()
    }

    /// Distance from `x` to the box along one axis: zero inside the slab,
    /// otherwise the gap to the nearer face.
    pub fn element_distance(&self, e: usize, x: f64) -> f64 {
        let below = self.lo[e] - x;
        let above = x - self.hi[e];
        below.max(above).max(0.0)
    }

    /// City-block distance from `x` to the box (sum of per-axis gaps).
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        (0..self.dim()).map(|e| self.element_distance(e, x[e])).sum()
    }

    /// Per-edge width the box would need to cover `x`:
    /// `max(x, hi) - min(x, lo)`.
    pub fn span_with(&self, e: usize, x: f64) -> f64 {
        x.max(self.hi[e]) - x.min(self.lo[e])
    }

    /// Whether `x` lies inside the box (inclusive).
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| a <= v && v <= b)
    }

    /// Moves each corner a fraction `lr` of the way toward the smallest box
    /// containing both this box and `x`. With `lr = 1` the box becomes that
    /// hull outright; with `lr = 0` nothing changes.
    pub fn absorb(&mut self, x: &[f64], lr: f64) {
        for (e, &xe) in x.iter().enumerate() {
            // Sides the point does not extend must stay bit-identical, and
            // rounding in the interpolation must never move a corner inward,
            // so each side updates only when the point lies beyond it.
            if xe < self.lo[e] {
                self.lo[e] = ((1.0 - lr) * self.lo[e] + lr * xe).min(self.lo[e]);
            }
            if xe > self.hi[e] {
                self.hi[e] = ((1.0 - lr) * self.hi[e] + lr * xe).max(self.hi[e]);
            }
        }
    }

    /// The smallest box containing both operands.
    pub fn hull(&self, other: &Hyperbox) -> Hyperbox {
        let lo = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| a.min(*b))
            .collect();
        let hi = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| a.max(*b))
            .collect();
        Hyperbox { lo, hi }
    }
}

/// A full node template: one [`Hyperbox`] per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperboxWeight {
    channels: Vec<Hyperbox>,
}

impl HyperboxWeight {
    /// A degenerate template at a single observation.
    pub fn point(channels: &[&[f64]]) -> Self {
        HyperboxWeight {
            channels: channels.iter().map(|c| Hyperbox::point(c)).collect(),
        }
    }

    /// Builds a template from per-channel boxes.
    pub fn from_boxes(channels: Vec<Hyperbox>) -> Self {
        HyperboxWeight { channels }
    }

    /// Number of channels.
    pub fn channels(&self) -> usize {
        self.channels.len()
    }

    /// One channel's box.
    pub fn channel(&self, k: usize) -> &Hyperbox {
        &self.channels[k]
    }

    pub(crate) fn channel_mut(&mut self, k: usize) -> &mut Hyperbox {
        &mut self.channels[k]
    }

    /// All channel boxes.
    pub fn boxes(&self) -> &[Hyperbox] {
        &self.channels
    }

    /// Absorbs one observation into every channel at learning rate `lr`.
    pub fn absorb(&mut self, channels: &[&[f64]], lr: f64) {
        for (b, c) in self.channels.iter_mut().zip(channels) {
            b.absorb(c, lr);
        }
    }

    /// Channel-wise hull of two templates.
    pub fn hull(&self, other: &HyperboxWeight) -> HyperboxWeight {
        let channels = self
            .channels
            .iter()
            .zip(&other.channels)
            .map(|(a, b)| a.hull(b))
            .collect();
        HyperboxWeight { channels }
    }

    /// Whether every channel of the observation lies inside its box.
    pub fn contains(&self, channels: &[&[f64]]) -> bool {
        self.channels
            .iter()
            .zip(channels)
            .all(|(b, c)| b.contains(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_distance_is_gap_to_nearest_face() {
        let b = Hyperbox::new(vec![1.0, 0.0], vec![3.0, 2.0]).unwrap();
        assert_eq!(b.element_distance(0, 0.0), 1.0); // below lo
        assert_eq!(b.element_distance(0, 2.0), 0.0); // inside
        assert_eq!(b.element_distance(0, 5.0), 2.0); // above hi
        assert_eq!(b.distance_to(&[0.0, 3.0]), 2.0);
    }

    #[test]
    fn absorb_half_rate_splits_the_difference() {
        // Box [1,0]..[1,1] pulled halfway toward (2,1): the upper corner
        // moves half of the way to 2 on the first axis, nothing else moves.
        let mut b = Hyperbox::new(vec![1.0, 0.0], vec![1.0, 1.0]).unwrap();
        b.absorb(&[2.0, 1.0], 0.5);
        assert_eq!(b.lo(), &[1.0, 0.0]);
        assert_eq!(b.hi(), &[1.5, 1.0]);
    }

    #[test]
    fn absorb_full_rate_is_hull() {
        let mut b = Hyperbox::point(&[1.0, 1.0]);
        b.absorb(&[3.0, -1.0], 1.0);
        assert_eq!(b.lo(), &[1.0, -1.0]);
        assert_eq!(b.hi(), &[3.0, 1.0]);
    }

    #[test]
    fn absorb_zero_rate_is_identity() {
        let mut b = Hyperbox::new(vec![0.0], vec![2.0]).unwrap();
        b.absorb(&[10.0], 0.0);
        assert_eq!(b.lo(), &[0.0]);
        assert_eq!(b.hi(), &[2.0]);
    }

    #[test]
    fn span_with_covers_point_and_box() {
        let b = Hyperbox::new(vec![1.0], vec![3.0]).unwrap();
        assert_eq!(b.span_with(0, 0.0), 3.0); // point below: 3 - 0
        assert_eq!(b.span_with(0, 2.0), 2.0); // inside: width
        assert_eq!(b.span_with(0, 7.0), 6.0); // above: 7 - 1
    }

    #[test]
    fn hull_takes_extremes() {
        let a = Hyperbox::new(vec![0.0, 5.0], vec![1.0, 6.0]).unwrap();
        let b = Hyperbox::new(vec![-1.0, 5.5], vec![0.5, 9.0]).unwrap();
        let h = a.hull(&b);
        assert_eq!(h.lo(), &[-1.0, 5.0]);
        assert_eq!(h.hi(), &[1.0, 9.0]);
    }

    #[test]
    fn inverted_corners_rejected() {
        assert!(Hyperbox::new(vec![2.0], vec![1.0]).is_err());
    }

    #[test]
    fn contains_is_inclusive() {
        let b = Hyperbox::new(vec![0.0], vec![1.0]).unwrap();
        assert!(b.contains(&[0.0]));
        assert!(b.contains(&[1.0]));
        assert!(!b.contains(&[1.0 + 1e-12]));
    }
}
