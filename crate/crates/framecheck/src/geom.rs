//! Axis-aligned box geometry shared by the whole engine.
//!
//! Every structural member is represented by a world-space AABB in meters;
//! all validation tests and fidelity metrics operate on these boxes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// World axes, in the order coordinates are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// All three axes in storage order.
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Index into a `[f64; 3]` coordinate triple.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Geometry construction errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("box corner coordinates must be finite")]
    NonFinite,
    #[error("box min exceeds max on {axis:?}: {min} > {max}")]
    MinExceedsMax { axis: Axis, min: f64, max: f64 },
}

/// Axis-aligned box given by its min and max corners, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    min: [f64; 3],
    max: [f64; 3],
}

impl Box3 {
    /// Builds a box, rejecting non-finite coordinates and inverted extents.
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Result<Self, GeomError> {
        if !min.iter().chain(max.iter()).all(|c| c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        for axis in Axis::ALL {
            let k = axis.index();
            if min[k] > max[k] {
                return Err(GeomError::MinExceedsMax {
                    axis,
                    min: min[k],
                    max: max[k],
                });
            }
        }
        Ok(Self { min, max })
    }

    #[inline]
    pub fn min(&self) -> [f64; 3] {
        self.min
    }

    #[inline]
    pub fn max(&self) -> [f64; 3] {
        self.max
    }

    /// Extent along one axis.
    #[inline]
    pub fn extent(&self, axis: Axis) -> f64 {
        let k = axis.index();
        self.max[k] - self.min[k]
    }

    /// All three extents `(dx, dy, dz)`.
    #[inline]
    pub fn extents(&self) -> [f64; 3] {
        [
            self.extent(Axis::X),
            self.extent(Axis::Y),
            self.extent(Axis::Z),
        ]
    }

    /// Geometric center.
    #[inline]
    pub fn center(&self) -> [f64; 3] {
        [
            0.5 * (self.min[0] + self.max[0]),
            0.5 * (self.min[1] + self.max[1]),
            0.5 * (self.min[2] + self.max[2]),
        ]
    }

    /// Separation between the two boxes' intervals on one axis:
    /// `max(0, max(a-, b-) - min(a+, b+))`. Zero when the intervals
    /// overlap or touch.
    #[inline]
    pub fn axis_gap(&self, other: &Box3, axis: Axis) -> f64 {
        let k = axis.index();
        f64::max(
            0.0,
            f64::max(self.min[k], other.min[k]) - f64::min(self.max[k], other.max[k]),
        )
    }

    /// Euclidean distance between the XY projections of two boxes;
    /// zero when the projections overlap or touch.
    pub fn xy_distance(&self, other: &Box3) -> f64 {
        let gx = self.axis_gap(other, Axis::X);
        let gy = self.axis_gap(other, Axis::Y);
        (gx * gx + gy * gy).sqrt()
    }

    /// Closed containment test for a point in the XY projection.
    #[inline]
    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        x >= self.min[0] && x <= self.max[0] && y >= self.min[1] && y <= self.max[1]
    }

    /// Closed containment test for a 3D point.
    #[inline]
    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|k| p[k] >= self.min[k] && p[k] <= self.max[k])
    }

    /// Box grown by `margin` on both sides of the X and Y axes.
    pub fn inflated_xy(&self, margin: f64) -> Box3 {
        Box3 {
            min: [self.min[0] - margin, self.min[1] - margin, self.min[2]],
            max: [self.max[0] + margin, self.max[1] + margin, self.max[2]],
        }
    }

    /// Box translated by a displacement vector.
    pub fn translated(&self, d: [f64; 3]) -> Box3 {
        Box3 {
            min: [self.min[0] + d[0], self.min[1] + d[1], self.min[2] + d[2]],
            max: [self.max[0] + d[0], self.max[1] + d[1], self.max[2] + d[2]],
        }
    }

    /// Smallest box containing both inputs.
    pub fn union(&self, other: &Box3) -> Box3 {
        Box3 {
            min: [
                self.min[0].min(other.min[0]),
                self.min[1].min(other.min[1]),
                self.min[2].min(other.min[2]),
            ],
            max: [
                self.max[0].max(other.max[0]),
                self.max[1].max(other.max[1]),
                self.max[2].max(other.max[2]),
            ],
        }
    }

    /// Length of the min-to-max diagonal.
    pub fn diagonal(&self) -> f64 {
        let e = self.extents();
        (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxed(min: [f64; 3], max: [f64; 3]) -> Box3 {
        Box3::new(min, max).unwrap()
    }

    #[test]
    fn rejects_inverted_and_non_finite() {
        assert!(matches!(
            Box3::new([0.0, 0.0, 0.0], [-1.0, 1.0, 1.0]),
            Err(GeomError::MinExceedsMax { axis: Axis::X, .. })
        ));
        assert_eq!(
            Box3::new([f64::NAN, 0.0, 0.0], [1.0, 1.0, 1.0]),
            Err(GeomError::NonFinite)
        );
    }

    #[test]
    fn axis_gap_cases() {
        let a = boxed([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]);
        // Overlapping intervals.
        let b = boxed([0.5, 0.0, 0.0], [2.0, 1.0, 1.0]);
        assert_eq!(a.axis_gap(&b, Axis::X), 0.0);
        // Separated by 0.04.
        let c = boxed([1.04, 0.0, 0.0], [2.0, 1.0, 1.0]);
        assert!((a.axis_gap(&c, Axis::X) - 0.04).abs() < 1e-12);
        // Touching.
        let d = boxed([1.0, 0.0, 0.0], [2.0, 1.0, 1.0]);
        assert_eq!(a.axis_gap(&d, Axis::X), 0.0);
    }

    #[test]
    fn xy_distance_zero_when_projections_overlap() {
        let a = boxed([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]);
        let b = boxed([0.5, 0.5, 5.0], [1.5, 1.5, 6.0]);
        assert_eq!(a.xy_distance(&b), 0.0);
        let c = boxed([4.0, 1.0, 0.0], [5.0, 2.0, 1.0]);
        assert!((a.xy_distance(&c) - 3.0).abs() < 1e-12);
    }
}
