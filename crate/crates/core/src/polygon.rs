//! Single-chain ring encoding.
//!
//! A ring-type region (an outer boundary with one interior hole) is stored as
//! one cyclic vertex chain `p_1..p_n`. The first `L` vertices trace the outer
//! boundary and the remaining `n - L` trace the hole. Two implicit edges tie
//! the halves together: the bridge `(p_L, p_{L+1})` and the closure
//! `(p_n, p_1)`.
//!
//! All indices in the public API are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in image coordinates: origin top-left, x to the right, y down.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Cyclic successor on `1..=n`: `(i mod n) + 1`.
pub fn successor(i: usize, n: usize) -> Result<usize> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(i % n + 1)
}

/// Ray-casting point-in-polygon test over a closed loop. Points lying on an
/// edge count as inside.
pub fn point_in_polygon(p: Point2, ring: &[Point2]) -> bool {
    if ring.len() < 2 {
        return false;
    }
    if on_boundary(p, ring) {
        return true;
    }
    let mut inside = false;
    let mut j = ring.len() - 1;
    for i in 0..ring.len() {
        let (a, b) = (ring[j], ring[i]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn on_boundary(p: Point2, ring: &[Point2]) -> bool {
    let n = ring.len();
    (0..n).any(|i| on_segment(p, ring[i], ring[(i + 1) % n]))
}

fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    let scale = (b.x - a.x).abs() + (b.y - a.y).abs() + 1.0;
    if cross.abs() > 1e-9 * scale {
        return false;
    }
    p.x >= a.x.min(b.x) - 1e-12
        && p.x <= a.x.max(b.x) + 1e-12
        && p.y >= a.y.min(b.y) - 1e-12
        && p.y <= a.y.max(b.y) + 1e-12
}

/// Signed area by the shoelace formula. Positive for loops that run
/// clockwise on screen (y axis pointing down).
pub fn signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        acc += a.x * b.y - b.x * a.y;
    }
    acc / 2.0
}

/// A polygon annotation stored as one cyclic vertex chain, optionally split
/// into outer and inner boundaries by a partition index.
///
/// Construction only rejects non-finite coordinates. Structural invariants
/// are reported by [`RingPolygon::validate`] so that broken inputs can still
/// be loaded and diagnosed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingPolygon {
    vertices: Vec<Point2>,
    partition: Option<usize>,
    label: String,
}

/// The two implicit edges of a ring chain, as 1-based index pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingEdges {
    pub bridge: (usize, usize),
    pub closure: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    TooFewVertices { n: usize },
    /// Edge from `index` to its successor has zero length.
    DegenerateEdge { index: usize },
    PartitionBounds { partition: usize, n: usize },
    /// Inner vertex `index` is not inside the outer loop.
    InnerOutsideOuter { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices { n } => write!(f, "only {n} vertices"),
            Violation::DegenerateEdge { index } => {
                write!(f, "zero-length edge starting at vertex {index}")
            }
            Violation::PartitionBounds { partition, n } => {
                write!(f, "partition {partition} outside 3..={}", n.saturating_sub(3))
            }
            Violation::InnerOutsideOuter { index } => {
                write!(f, "inner vertex {index} lies outside the outer boundary")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl RingPolygon {
    pub fn new(
        vertices: Vec<Point2>,
        partition: Option<usize>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index: index + 1 });
        }
        Ok(Self {
            vertices,
            partition,
            label: label.into(),
        })
    }

    pub fn simple(vertices: Vec<Point2>) -> Result<Self> {
        Self::new(vertices, None, "")
    }

    pub fn ring(vertices: Vec<Point2>, partition: usize) -> Result<Self> {
        Self::new(vertices, Some(partition), "")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn partition(&self) -> Option<usize> {
        self.partition
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_ring(&self) -> bool {
        self.partition.is_some()
    }

    /// Vertex `p_i`, 1-based.
    pub fn vertex(&self, i: usize) -> Result<Point2> {
        if i == 0 || i > self.vertices.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.vertices.len(),
            });
        }
        Ok(self.vertices[i - 1])
    }

    fn checked_partition(&self) -> Result<usize> {
        let l = self.partition.ok_or(Error::NotARing)?;
        let n = self.vertices.len();
        if l < 3 || l + 3 > n {
            return Err(Error::InvalidPartition { partition: l, n });
        }
        Ok(l)
    }

    /// Outer boundary `p_1..p_L` and inner boundary `p_{L+1}..p_n`.
    pub fn split_boundaries(&self) -> Result<(&[Point2], &[Point2])> {
        let l = self.checked_partition()?;
        Ok(self.vertices.split_at(l))
    }

    pub fn ring_edges(&self) -> Result<RingEdges> {
        let l = self.checked_partition()?;
        Ok(RingEdges {
            bridge: (l, l + 1),
            closure: (self.vertices.len(), 1),
        })
    }

    /// Closed loops that bound the region: the outer and inner boundary for a
    /// valid ring, otherwise the whole chain.
    pub fn loops(&self) -> Vec<&[Point2]> {
        match self.split_boundaries() {
            Ok((outer, inner)) => vec![outer, inner],
            Err(_) => vec![self.vertices.as_slice()],
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.vertices.len();
        let mut violations = Vec::new();
        let min_n = if self.partition.is_some() { 6 } else { 3 };
        if n < min_n {
            violations.push(Violation::TooFewVertices { n });
        }
        for i in 0..n {
            if n > 1 && self.vertices[i] == self.vertices[(i + 1) % n] {
                violations.push(Violation::DegenerateEdge { index: i + 1 });
            }
        }
        if let Some(l) = self.partition {
            if l < 3 || l + 3 > n {
                violations.push(Violation::PartitionBounds { partition: l, n });
            } else {
                let (outer, inner) = self.vertices.split_at(l);
                for (k, p) in inner.iter().enumerate() {
                    if !point_in_polygon(*p, outer) {
                        violations.push(Violation::InnerOutsideOuter { index: l + k + 1 });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn map_points(&self, mut f: impl FnMut(Point2) -> Point2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| f(*p)).collect(),
            partition: self.partition,
            label: self.label.clone(),
        }
    }
}
