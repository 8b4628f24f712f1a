//! Projection of original vertices onto an augmented mask, and analytic
//! clip-boundary intersections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{Point2, RingPolygon};
use crate::raster::{extract_boundary, BinaryMask, BoundaryChain, Pixel};
use crate::transform::{AffinePlan, Rect};

/// Default snapping tolerance in pixels.
pub const DEFAULT_TOL: f64 = 3.0;

/// Clip vertices closer than this to a surviving vertex are redundant.
pub const CLIP_DEDUP_DIST: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexedVertex {
    /// 1-based index into the source polygon.
    pub original_index: usize,
    pub position: Point2,
}

/// Vertices that survived augmentation, in original index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivorSequence {
    survivors: Vec<IndexedVertex>,
    n: usize,
    partition: Option<usize>,
}

impl SurvivorSequence {
    /// Sorts by original index; rejects out-of-range or repeated indices.
    pub fn new(
        mut survivors: Vec<IndexedVertex>,
        n: usize,
        partition: Option<usize>,
    ) -> Result<Self> {
        survivors.sort_by_key(|v| v.original_index);
        for v in &survivors {
            if v.original_index == 0 || v.original_index > n {
                return Err(Error::IndexOutOfRange {
                    index: v.original_index,
                    n,
                });
            }
        }
        if let Some(w) = survivors
            .windows(2)
            .find(|w| w[0].original_index == w[1].original_index)
        {
            return Err(Error::InvalidSequence(format!(
                "index {} survives twice",
                w[0].original_index
            )));
        }
        Ok(Self {
            survivors,
            n,
            partition,
        })
    }

    /// Every vertex of `poly` survives at its own position.
    pub fn full(poly: &RingPolygon) -> Self {
        let survivors = poly
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, p)| IndexedVertex {
                original_index: i + 1,
                position: *p,
            })
            .collect();
        Self {
            survivors,
            n: poly.len(),
            partition: poly.partition(),
        }
    }

    pub fn survivors(&self) -> &[IndexedVertex] {
        &self.survivors
    }

    pub fn indices(&self) -> Vec<usize> {
        self.survivors.iter().map(|v| v.original_index).collect()
    }

    /// Source vertex count `n`.
    pub fn source_len(&self) -> usize {
        self.n
    }

    /// Source partition `L`, if the source was a ring.
    pub fn source_partition(&self) -> Option<usize> {
        self.partition
    }

    /// Survivor count `m`.
    pub fn len(&self) -> usize {
        self.survivors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.survivors.is_empty()
    }

    /// The survivor gap `(k_t, k_{t+1})` that contains source edge `edge`,
    /// i.e. the cyclically last survivor at or before `edge` and the one after
    /// it.
    pub fn gap_for_edge(&self, edge: usize) -> Option<(usize, usize)> {
        let m = self.survivors.len();
        if m == 0 {
            return None;
        }
        let pos = self.survivors.partition_point(|v| v.original_index <= edge);
        let t = if pos == 0 { m - 1 } else { pos - 1 };
        Some((
            self.survivors[t].original_index,
            self.survivors[(t + 1) % m].original_index,
        ))
    }
}

/// Nearest-pixel lookup over boundary pixels, bucketed on the pixel grid.
pub struct BoundaryIndex {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl BoundaryIndex {
    pub fn new(width: usize, height: usize, chains: &[BoundaryChain]) -> Self {
        let mut cells = vec![false; width * height];
        for p in chains.iter().flat_map(|c| &c.points) {
            cells[p.y as usize * width + p.x as usize] = true;
        }
        Self {
            width,
            height,
            cells,
        }
    }

    pub fn from_mask(mask: &BinaryMask) -> Self {
        Self::new(mask.width(), mask.height(), &extract_boundary(mask))
    }

    /// Closest boundary pixel center within `max_dist` of `q`. Ties go to the
    /// smaller `(y, x)`.
    pub fn nearest(&self, q: Point2, max_dist: f64) -> Option<(Pixel, f64)> {
        if !(q.is_finite() && max_dist >= 0.0) || self.width == 0 || self.height == 0 {
            return None;
        }
        let lo = |v: f64| (v - 0.5 - max_dist).floor().max(0.0);
        let x0 = lo(q.x) as usize;
        let y0 = lo(q.y) as usize;
        let x1 = ((q.x - 0.5 + max_dist).ceil().min(self.width as f64 - 1.0)).max(-1.0);
        let y1 = ((q.y - 0.5 + max_dist).ceil().min(self.height as f64 - 1.0)).max(-1.0);
        if x1 < 0.0 || y1 < 0.0 {
            return None;
        }
        let (x1, y1) = (x1 as usize, y1 as usize);
        let limit = max_dist * max_dist;
        let mut best: Option<(Pixel, f64)> = None;
        for y in y0..=y1 {
            let row = &self.cells[y * self.width..(y + 1) * self.width];
            let span = row.iter().enumerate().take(x1.min(self.width - 1) + 1).skip(x0);
            for (x, _) in span.filter(|(_, on)| **on) {
                let px = Pixel {
                    x: x as u32,
                    y: y as u32,
                };
                let d2 = px.center().distance_sq(q);
                if d2 <= limit && best.is_none_or(|(_, b)| d2 < b) {
                    best = Some((px, d2));
                }
            }
        }
        best.map(|(p, d2)| (p, d2.sqrt()))
    }
}

/// Maps every vertex through `plan` and keeps those that land inside the
/// output frame within `tol` of a border pixel of `warped`. Survivors take the
/// position of that nearest border pixel's center.
pub fn project_vertices(
    poly: &RingPolygon,
    plan: &AffinePlan,
    warped: &BinaryMask,
    tol: f64,
) -> Result<SurvivorSequence> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Config(format!("projection tolerance {tol} must be positive")));
    }
    let frame = plan.output_frame();
    let index = BoundaryIndex::from_mask(warped);
    let survivors = poly
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let q = plan.apply_point(*p);
            if !frame.contains(q) {
                return None;
            }
            index.nearest(q, tol).map(|(px, _)| IndexedVertex {
                original_index: i + 1,
                position: px.center(),
            })
        })
        .collect();
    Ok(SurvivorSequence {
        survivors,
        n: poly.len(),
        partition: poly.partition(),
    })
}

/// A new vertex where a transformed source edge crosses the clip rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClipVertex {
    pub position: Point2,
    /// Survivor gap `(k_t, k_{t+1})` this vertex fills. Until gaps are
    /// assigned it holds the source edge's own endpoints.
    pub between: (usize, usize),
    /// 1-based start index `i` of the source edge `(p_i, p_succ(i))`.
    pub source_edge: usize,
    /// Position along the source edge, in `[0, 1]`.
    pub edge_param: f64,
}

impl ClipVertex {
    /// Position along the original chain: `source_edge - 1 + edge_param`.
    pub fn chain_position(&self) -> f64 {
        (self.source_edge - 1) as f64 + self.edge_param
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
    Top,
    Bottom,
}

/// Parametric (Liang-Barsky) intersection of segment `a -> b` with `rect`.
/// Returns the entry and exit crossings that lie strictly inside the segment;
/// tangential touches produce nothing.
pub fn segment_rect_crossings(a: Point2, b: Point2, rect: &Rect) -> Vec<(f64, Point2)> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let checks = [
        (-dx, a.x - rect.x, Side::Left),
        (dx, rect.right() - a.x, Side::Right),
        (-dy, a.y - rect.y, Side::Top),
        (dy, rect.bottom() - a.y, Side::Bottom),
    ];
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let (mut s0, mut s1) = (None, None);
    for (p, q, side) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return Vec::new();
            }
            continue;
        }
        let r = q / p;
        if p < 0.0 {
            if r > t0 {
                t0 = r;
                s0 = Some(side);
            }
        } else if r < t1 {
            t1 = r;
            s1 = Some(side);
        }
    }
    if t0 >= t1 {
        return Vec::new();
    }
    let at = |t: f64, side: Side| {
        let mut p = Point2::new(a.x + t * dx, a.y + t * dy);
        match side {
            Side::Left => p.x = rect.x,
            Side::Right => p.x = rect.right(),
            Side::Top => p.y = rect.y,
            Side::Bottom => p.y = rect.bottom(),
        }
        p.x = p.x.clamp(rect.x, rect.right());
        p.y = p.y.clamp(rect.y, rect.bottom());
        p
    };
    let mut out = Vec::with_capacity(2);
    if let Some(side) = s0.filter(|_| t0 > 0.0) {
        out.push((t0, at(t0, side)));
    }
    if let Some(side) = s1.filter(|_| t1 < 1.0) {
        out.push((t1, at(t1, side)));
    }
    out
}

/// Crossings of every transformed edge `(p_i, p_succ(i))` with `clip_rect`,
/// ordered by edge index then edge parameter.
pub fn clip_intersections(poly: &RingPolygon, plan: &AffinePlan, clip_rect: &Rect) -> Vec<ClipVertex> {
    let n = poly.len();
    let q: Vec<Point2> = poly.vertices().iter().map(|p| plan.apply_point(*p)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        for (t, position) in segment_rect_crossings(q[i], q[j], clip_rect) {
            out.push(ClipVertex {
                position,
                between: (i + 1, j + 1),
                source_edge: i + 1,
                edge_param: t,
            });
        }
    }
    out
}

/// Assigns each clip vertex to the survivor gap containing its source edge
/// and drops clips within [`CLIP_DEDUP_DIST`] of a surviving vertex. With no
/// survivors there is no gap to fill and every clip is dropped.
pub fn assign_clip_gaps(survivors: &SurvivorSequence, clips: Vec<ClipVertex>) -> Vec<ClipVertex> {
    clips
        .into_iter()
        .filter_map(|mut c| {
            c.between = survivors.gap_for_edge(c.source_edge)?;
            let redundant = survivors
                .survivors()
                .iter()
                .any(|s| s.position.distance(c.position) < CLIP_DEDUP_DIST);
            (!redundant).then_some(c)
        })
        .collect()
}
