//! The full augmentation path for one polygon: rasterize, warp in mask space,
//! project survivors, add clip crossings, repair.

use crate::error::{Error, Result};
use crate::polygon::RingPolygon;
use crate::project::{assign_clip_gaps, clip_intersections, project_vertices, ClipVertex, SurvivorSequence};
use crate::raster::{rasterize, BinaryMask};
use crate::repair::{repair_with_clips, RepairedPolygon};
use crate::transform::{warp_mask, AffinePlan};

#[derive(Debug)]
pub struct AugmentOutcome {
    pub warped: BinaryMask,
    pub survivors: SurvivorSequence,
    pub clips: Vec<ClipVertex>,
    /// The repaired chain, or why none could be built (fewer than three
    /// survivors).
    pub repaired: Result<RepairedPolygon, Error>,
}

impl AugmentOutcome {
    pub fn is_degenerate(&self) -> bool {
        self.repaired.is_err()
    }
}

/// Runs the pipeline for `poly` under `plan`. Only a non-invertible plan is an
/// error; too few survivors is reported through [`AugmentOutcome::repaired`].
pub fn augment_polygon(poly: &RingPolygon, plan: &AffinePlan, tol: f64) -> Result<AugmentOutcome> {
    let mask = rasterize(poly, plan.in_width, plan.in_height);
    let warped = warp_mask(&mask, plan)?;
    let survivors = project_vertices(poly, plan, &warped, tol)?;
    let clips = assign_clip_gaps(
        &survivors,
        clip_intersections(poly, plan, &plan.output_frame()),
    );
    let repaired = repair_with_clips(&survivors, &clips);
    Ok(AugmentOutcome {
        warped,
        survivors,
        clips,
        repaired,
    })
}
