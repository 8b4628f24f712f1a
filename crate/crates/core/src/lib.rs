//! Geometric augmentation for ring-type polygon annotations.
//!
//! A ring is a region with one hole, stored as a single vertex chain: the
//! first `L` vertices trace the outer boundary and the rest trace the hole.
//! Transforms run in mask space; the surviving original vertices are then
//! reconnected in index space in their original cyclic order, so the output
//! stays one closed chain.
//!
//! ```
//! use ringaug::{augment_polygon, AffinePlan, Point2, RingPolygon};
//!
//! let pts = [(10.0, 10.0), (10.0, 90.0), (90.0, 90.0), (90.0, 10.0),
//!            (30.0, 30.0), (70.0, 30.0), (70.0, 70.0), (30.0, 70.0)];
//! let ring = RingPolygon::ring(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect(), 4).unwrap();
//! let out = augment_polygon(&ring, &AffinePlan::hflip(100, 100), 3.0).unwrap();
//! assert_eq!(out.repaired.unwrap().len(), 8);
//! ```

pub mod baselines;
pub mod error;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod polygon;
pub mod project;
pub mod raster;
pub mod repair;
pub mod transform;

pub use error::{Error, Result};
pub use metrics::{cap_order, cap_strict, match_indices, mean_cap, CapField, CapReport};
pub use pipeline::{augment_polygon, AugmentOutcome};
pub use polygon::{successor, Point2, RingPolygon};
pub use raster::{extract_boundary, rasterize, topology, BinaryMask, Topology};
pub use repair::{repair, repair_into, repair_with_clips, RepairedPolygon};
pub use transform::{derive_seed, sample, warp_mask, AffinePlan, AugmentationKind, AugmentationSpec};
