//! Synthetic ring corpora and two failure-prone reference pipelines.
//!
//! * [`naive_vertex_transform`] moves vertices and drops the ones that leave
//!   the frame, with no repair and no clip vertices.
//! * [`mask_contour_reextract`] warps the mask and re-traces its borders,
//!   yielding dense pixel-aligned contours with no index provenance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{signed_area, Point2, RingPolygon};
use crate::raster::{extract_boundary, rasterize};
use crate::transform::{derive_seed, warp_mask, AffinePlan, Range};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeFamily {
    Rectangle,
    LShape,
    /// Rectangle with random rectangular notches at its corners.
    Orthogonal,
    /// Cycles through the three families above.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgePlacement {
    /// The outer chain ends at the midpoint of its top edge and the bridge
    /// runs from there to the nearest inner vertex.
    TopMidpoint,
    /// The bridge leaves from the top edge's right corner.
    TopCorner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticRingSpec {
    pub count: usize,
    pub width: usize,
    pub height: usize,
    pub family: ShapeFamily,
    /// Hole side length as a fraction of the available interior, per axis.
    pub hole_ratio: Range,
    pub bridge: BridgePlacement,
    /// Upper bound on how many pieces each boundary edge is split into.
    pub max_edge_pieces: usize,
    pub seed: u64,
}

impl Default for SyntheticRingSpec {
    fn default() -> Self {
        Self {
            count: 200,
            width: 512,
            height: 512,
            family: ShapeFamily::Mixed,
            hole_ratio: Range::new(0.3, 0.7),
            bridge: BridgePlacement::TopMidpoint,
            max_edge_pieces: 3,
            seed: 0,
        }
    }
}

type Corner = (i64, i64);

/// Generates `spec.count` valid rings. Ring `i` depends only on
/// `(spec, i)`, so growing `count` keeps earlier rings unchanged.
pub fn generate_corpus(spec: &SyntheticRingSpec) -> Result<Vec<RingPolygon>> {
    let r = spec.hole_ratio;
    if !(r.min > 0.0 && r.min <= r.max && r.max < 1.0) {
        return Err(Error::Config(format!(
            "hole ratio range [{}, {}] must lie inside (0, 1)",
            r.min, r.max
        )));
    }
    if spec.width < 32 || spec.height < 32 {
        return Err(Error::Config("synthetic frames must be at least 32x32".into()));
    }
    if spec.max_edge_pieces == 0 {
        return Err(Error::Config("max_edge_pieces must be at least 1".into()));
    }
    (0..spec.count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "synthetic-ring", i as u64));
            let family = match spec.family {
                ShapeFamily::Mixed => [ShapeFamily::Rectangle, ShapeFamily::LShape, ShapeFamily::Orthogonal][i % 3],
                f => f,
            };
            let label = match family {
                ShapeFamily::Rectangle => "rect_ring",
                ShapeFamily::LShape => "l_ring",
                _ => "ortho_ring",
            };
            Ok(generate_ring(spec, family, &mut rng).with_label(label))
        })
        .collect()
}

fn generate_ring(spec: &SyntheticRingSpec, family: ShapeFamily, rng: &mut ChaCha8Rng) -> RingPolygon {
    let (w, h) = (spec.width as f64, spec.height as f64);
    let unit = w.min(h);
    let wall = (0.047 * unit).max(3.0);
    let min_piece = (0.078 * unit).max(4.0);

    let ow = (rng.random_range(0.45..=0.8) * w).round();
    let oh = (rng.random_range(0.45..=0.8) * h).round();
    let mx = (0.06 * w).round();
    let my = (0.06 * h).round();
    let x0 = rng.random_range(mx..=w - mx - ow).round();
    let y0 = rng.random_range(my..=h - my - oh).round();
    let (x1, y1) = (x0 + ow, y0 + oh);

    // Notch (width, height) per corner, in TL, TR, BR, BL order.
    let mut notches = [None::<(f64, f64)>; 4];
    let mut core = (x0, y0, x1, y1);
    match family {
        ShapeFamily::LShape => {
            let c = rng.random_range(0..4);
            let nw = (rng.random_range(0.25..=0.45) * ow).round();
            let nh = (rng.random_range(0.25..=0.45) * oh).round();
            notches[c] = Some((nw, nh));
            // Keep the larger notch-free strip.
            let (left, right) = if c == 0 || c == 3 { (x0 + nw, x1) } else { (x0, x1 - nw) };
            let (top, bottom) = if c < 2 { (y0 + nh, y1) } else { (y0, y1 - nh) };
            core = if (right - left) * oh >= ow * (bottom - top) {
                (left, y0, right, y1)
            } else {
                (x0, top, x1, bottom)
            };
        }
        ShapeFamily::Orthogonal => {
            for n in notches.iter_mut() {
                if rng.random_bool(0.6) {
                    let nw = (rng.random_range(0.1..=0.22) * ow).round();
                    let nh = (rng.random_range(0.1..=0.22) * oh).round();
                    *n = Some((nw, nh));
                }
            }
            let nw = |k: usize| notches[k].map_or(0.0, |n| n.0);
            let nh = |k: usize| notches[k].map_or(0.0, |n| n.1);
            core = (
                x0 + nw(0).max(nw(3)),
                y0 + nh(0).max(nh(1)),
                x1 - nw(1).max(nw(2)),
                y1 - nh(2).max(nh(3)),
            );
        }
        _ => {}
    }

    let outline = notched_outline((x0, y0, x1, y1), &notches);
    let mut outer = subdivide_open(&start_at_top_edge(outline), spec.max_edge_pieces, min_piece, rng);
    let bridge_from = match spec.bridge {
        BridgePlacement::TopMidpoint => {
            let (first, last) = (outer[0], *outer.last().expect("outline is non-empty"));
            let m = ((first.0 + last.0) as f64 / 2.0).round() as i64;
            outer.push((m, first.1));
            (m, first.1)
        }
        BridgePlacement::TopCorner => *outer.last().expect("outline is non-empty"),
    };

    let (cx0, cy0, cx1, cy1) = (core.0 + wall, core.1 + wall, core.2 - wall, core.3 - wall);
    let hw = (rng.random_range(spec.hole_ratio.min..=spec.hole_ratio.max) * (cx1 - cx0)).round().max(2.0);
    let hh = (rng.random_range(spec.hole_ratio.min..=spec.hole_ratio.max) * (cy1 - cy0)).round().max(2.0);
    let hx = rng.random_range(cx0..=(cx1 - hw).max(cx0)).round();
    let hy = rng.random_range(cy0..=(cy1 - hh).max(cy0)).round();
    let hole = [(hx, hy), (hx + hw, hy), (hx + hw, hy + hh), (hx, hy + hh)]
        .map(|(x, y)| (x as i64, y as i64))
        .to_vec();
    let mut inner = subdivide_closed(&hole, 2, min_piece * 0.75, rng);
    let nearest = (0..inner.len())
        .min_by_key(|&k| {
            let (dx, dy) = (inner[k].0 - bridge_from.0, inner[k].1 - bridge_from.1);
            dx * dx + dy * dy
        })
        .expect("hole is non-empty");
    inner.rotate_left(nearest);

    let partition = outer.len();
    let vertices = outer
        .into_iter()
        .chain(inner)
        .map(|(x, y)| Point2::new(x as f64, y as f64))
        .collect();
    RingPolygon::ring(vertices, partition).expect("integer coordinates are finite")
}

/// Corners of a rectangle with optional corner notches, clockwise on screen
/// starting from the top-left region.
fn notched_outline(r: (f64, f64, f64, f64), notches: &[Option<(f64, f64)>; 4]) -> Vec<Corner> {
    let (x0, y0, x1, y1) = r;
    let mut pts = Vec::new();
    match notches[0] {
        Some((nw, nh)) => pts.extend([(x0, y0 + nh), (x0 + nw, y0 + nh), (x0 + nw, y0)]),
        None => pts.push((x0, y0)),
    }
    match notches[1] {
        Some((nw, nh)) => pts.extend([(x1 - nw, y0), (x1 - nw, y0 + nh), (x1, y0 + nh)]),
        None => pts.push((x1, y0)),
    }
    match notches[2] {
        Some((nw, nh)) => pts.extend([(x1, y1 - nh), (x1 - nw, y1 - nh), (x1 - nw, y1)]),
        None => pts.push((x1, y1)),
    }
    match notches[3] {
        Some((nw, nh)) => pts.extend([(x0 + nw, y1), (x0 + nw, y1 - nh), (x0, y1 - nh)]),
        None => pts.push((x0, y1)),
    }
    pts.into_iter().map(|(x, y)| (x as i64, y as i64)).collect()
}

/// Reorients to counter-clockwise on screen and rotates so that the closing
/// edge (last -> first) is the longest top edge, traversed right to left.
fn start_at_top_edge(mut pts: Vec<Corner>) -> Vec<Corner> {
    let as_points: Vec<Point2> = pts.iter().map(|&(x, y)| Point2::new(x as f64, y as f64)).collect();
    if signed_area(&as_points) > 0.0 {
        pts.reverse();
    }
    let n = pts.len();
    let top = pts.iter().map(|p| p.1).min().expect("non-empty outline");
    let start = (0..n)
        .filter(|&j| {
            let (a, b) = (pts[j], pts[(j + 1) % n]);
            a.1 == top && b.1 == top && b.0 < a.0
        })
        .max_by_key(|&j| pts[j].0 - pts[(j + 1) % n].0)
        .map(|j| (j + 1) % n)
        .expect("an orthogonal outline has a top edge");
    pts.rotate_left(start);
    pts
}

fn split_edge(a: Corner, b: Corner, max_pieces: usize, min_piece: f64, rng: &mut ChaCha8Rng) -> Vec<Corner> {
    let len = (((b.0 - a.0).pow(2) + (b.1 - a.1).pow(2)) as f64).sqrt();
    let fit = ((len / min_piece).floor() as usize).max(1);
    let k = rng.random_range(1..=max_pieces.max(1)).min(fit);
    let mut out = vec![a];
    for s in 1..k {
        let t = s as f64 / k as f64;
        let p = (
            (a.0 as f64 + t * (b.0 - a.0) as f64).round() as i64,
            (a.1 as f64 + t * (b.1 - a.1) as f64).round() as i64,
        );
        if p != *out.last().expect("non-empty") && p != b {
            out.push(p);
        }
    }
    out
}

/// Subdivides every edge except the closing one.
fn subdivide_open(pts: &[Corner], max_pieces: usize, min_piece: f64, rng: &mut ChaCha8Rng) -> Vec<Corner> {
    let mut out = Vec::new();
    for w in pts.windows(2) {
        out.extend(split_edge(w[0], w[1], max_pieces, min_piece, rng));
    }
    out.push(*pts.last().expect("non-empty"));
    out
}

fn subdivide_closed(pts: &[Corner], max_pieces: usize, min_piece: f64, rng: &mut ChaCha8Rng) -> Vec<Corner> {
    let n = pts.len();
    (0..n)
        .flat_map(|i| split_edge(pts[i], pts[(i + 1) % n], max_pieces, min_piece, rng))
        .collect()
}

/// Transforms every vertex and keeps the ones inside the output frame, in
/// original order. No repair, no clip vertices.
pub fn naive_vertex_transform(poly: &RingPolygon, plan: &AffinePlan) -> Vec<Point2> {
    let frame = plan.output_frame();
    poly.vertices()
        .iter()
        .map(|p| plan.apply_point(*p))
        .filter(|q| frame.contains(*q))
        .collect()
}

/// Rasterizes, warps, and re-traces every border of the warped mask as a
/// dense sequence of pixel centers.
pub fn mask_contour_reextract(poly: &RingPolygon, plan: &AffinePlan) -> Result<Vec<Vec<Point2>>> {
    let mask = rasterize(poly, plan.in_width, plan.in_height);
    let warped = warp_mask(&mask, plan)?;
    Ok(extract_boundary(&warped).iter().map(|c| c.centers()).collect())
}
