//! Polygon rasterization, border following and pixel topology.
//!
//! Pixel `(px, py)` covers the unit square `[px, px+1) x [py, py+1)` and is
//! sampled at its center `(px + 0.5, py + 0.5)`. Foreground is 8-connected,
//! background 4-connected.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{Point2, RingPolygon};

#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryMask")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("set", &self.count_ones())
            .finish()
    }
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    /// Builds a mask from text rows, `#` for set pixels. Handy in tests.
    pub fn from_rows(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        Self::from_fn(width, height, |x, y| rows[y].as_bytes()[x] == b'#')
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Out-of-frame coordinates read as background.
    pub fn get(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.bits[y as usize * self.width + x as usize]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    /// Intersection over union. Two empty masks have IoU 1.
    pub fn iou(&self, other: &BinaryMask) -> f64 {
        assert_eq!(
            (self.width, self.height),
            (other.width, other.height),
            "iou of masks with different sizes"
        );
        let (mut inter, mut union) = (0usize, 0usize);
        for (a, b) in self.bits.iter().zip(&other.bits) {
            inter += (*a && *b) as usize;
            union += (*a || *b) as usize;
        }
        if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        }
    }

    /// Binary PGM (P5) with set pixels at 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.bits.iter().map(|b| if *b { 255u8 } else { 0 }));
        out
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&self.to_pgm())
            .map_err(|e| Error::io(path, e))
    }

    /// Set pixels with a 4-connected background or frame neighbor.
    pub fn is_border_pixel(&self, x: usize, y: usize) -> bool {
        let (x, y) = (x as i64, y as i64);
        self.get(x, y)
            && (!self.get(x - 1, y)
                || !self.get(x + 1, y)
                || !self.get(x, y - 1)
                || !self.get(x, y + 1))
    }
}

/// Integer pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pixel {
    pub x: u32,
    pub y: u32,
}

impl Pixel {
    pub fn center(&self) -> Point2 {
        Point2::new(self.x as f64 + 0.5, self.y as f64 + 0.5)
    }
}

/// An ordered, 8-connected trace of one mask border.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryChain {
    pub points: Vec<Pixel>,
    /// True for the border of a hole, false for an outer border.
    pub is_hole: bool,
}

impl BoundaryChain {
    pub fn centers(&self) -> Vec<Point2> {
        self.points.iter().map(Pixel::center).collect()
    }
}

/// Rasterizes the polygon's region. Rings contribute their outer and inner
/// boundary as two closed loops; other polygons contribute the whole chain.
/// Either way the even-odd rule decides coverage.
pub fn rasterize(poly: &RingPolygon, width: usize, height: usize) -> BinaryMask {
    rasterize_loops(&poly.loops(), width, height)
}

/// Even-odd scanline fill over a set of closed loops, sampling pixel centers.
///
/// A center exactly on a crossing belongs to the span on its right, and a
/// scanline exactly at an edge's lower endpoint does not cross it.
pub fn rasterize_loops(loops: &[&[Point2]], width: usize, height: usize) -> BinaryMask {
    let mut mask = BinaryMask::new(width, height);
    let mut edges: Vec<(Point2, Point2)> = Vec::new();
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for ring in loops {
        let n = ring.len();
        for i in 0..n {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            if a.y == b.y {
                continue;
            }
            let (lo, hi) = if a.y < b.y { (a, b) } else { (b, a) };
            ymin = ymin.min(lo.y);
            ymax = ymax.max(hi.y);
            edges.push((lo, hi));
        }
    }
    if edges.is_empty() || width == 0 || height == 0 {
        return mask;
    }

    let row_start = (ymin - 0.5).ceil().max(0.0) as usize;
    let row_end = ((ymax - 0.5).ceil().max(0.0) as usize).min(height);
    let mut xs: Vec<f64> = Vec::new();
    for py in row_start..row_end {
        let y = py as f64 + 0.5;
        xs.clear();
        for (lo, hi) in &edges {
            if lo.y <= y && y < hi.y {
                xs.push((hi.x - lo.x) * (y - lo.y) / (hi.y - lo.y) + lo.x);
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let first = pixel_at_or_after(pair[0]).min(width as i64).max(0) as usize;
            let last = pixel_at_or_after(pair[1]).min(width as i64).max(0) as usize;
            let row = &mut mask.bits[py * width..(py + 1) * width];
            row[first..last.max(first)].fill(true);
        }
    }
    mask
}

/// Smallest pixel column whose center is `>= x`.
fn pixel_at_or_after(x: f64) -> i64 {
    (x - 0.5).ceil() as i64
}

// Neighbor offsets, clockwise on screen starting west.
const DIRS: [(i64, i64); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn dir_index(d: (i64, i64)) -> usize {
    DIRS.iter().position(|x| *x == d).expect("not a neighbor offset")
}

/// Traces every outer and hole border with Suzuki-Abe border following.
/// Chains are returned in raster order of their starting pixel.
pub fn extract_boundary(mask: &BinaryMask) -> Vec<BoundaryChain> {
    let (w, h) = (mask.width as i64, mask.height as i64);
    let pw = w + 2;
    let mut img = vec![0i32; ((w + 2) * (h + 2)) as usize];
    for y in 0..h {
        for x in 0..w {
            if mask.get(x, y) {
                img[((y + 1) * pw + x + 1) as usize] = 1;
            }
        }
    }
    let at = |img: &[i32], p: (i64, i64)| img[(p.1 * pw + p.0) as usize];

    let mut chains = Vec::new();
    let mut nbd = 1i32;
    for y in 1..=h {
        for x in 1..=w {
            let cur = at(&img, (x, y));
            if cur == 0 {
                continue;
            }
            let start = (x, y);
            let (from, is_hole) = if cur == 1 && at(&img, (x - 1, y)) == 0 {
                ((x - 1, y), false)
            } else if cur > 0 && at(&img, (x + 1, y)) == 0 {
                ((x + 1, y), true)
            } else {
                continue;
            };
            nbd += 1;
            let mut points = Vec::new();

            // Clockwise search for the first foreground neighbor.
            let d0 = dir_index((from.0 - x, from.1 - y));
            let first = (0..8)
                .map(|k| DIRS[(d0 + k) % 8])
                .map(|d| (x + d.0, y + d.1))
                .find(|p| at(&img, *p) != 0);

            match first {
                None => {
                    points.push(start);
                    img[(y * pw + x) as usize] = -nbd;
                }
                Some(p1) => {
                    let (mut p2, mut p3) = (p1, start);
                    loop {
                        points.push(p3);
                        // Counter-clockwise from the neighbor after p2.
                        let d2 = dir_index((p2.0 - p3.0, p2.1 - p3.1));
                        let mut east_zero = false;
                        let mut p4 = p3;
                        for k in 1..=8 {
                            let d = DIRS[(d2 + 8 - k) % 8];
                            let q = (p3.0 + d.0, p3.1 + d.1);
                            if at(&img, q) != 0 {
                                p4 = q;
                                break;
                            }
                            if d == (1, 0) {
                                east_zero = true;
                            }
                        }
                        let idx = (p3.1 * pw + p3.0) as usize;
                        if east_zero {
                            img[idx] = -nbd;
                        } else if img[idx] == 1 {
                            img[idx] = nbd;
                        }
                        if p4 == start && p3 == p1 {
                            break;
                        }
                        p2 = p3;
                        p3 = p4;
                    }
                }
            }
            chains.push(BoundaryChain {
                points: points
                    .into_iter()
                    .map(|(px, py)| Pixel {
                        x: (px - 1) as u32,
                        y: (py - 1) as u32,
                    })
                    .collect(),
                is_hole,
            });
        }
    }
    chains
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub components: usize,
    pub holes: usize,
}

/// Counts 8-connected foreground components and 4-connected background
/// components that do not touch the frame.
pub fn topology(mask: &BinaryMask) -> Topology {
    const N4: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    let (w, h) = (mask.width, mask.height);
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::new();
    let (mut components, mut holes) = (0, 0);

    for start in 0..w * h {
        if seen[start] {
            continue;
        }
        let fg = mask.bits[start];
        let mut touches_frame = false;
        seen[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            if x == 0 || y == 0 || x == w as i64 - 1 || y == h as i64 - 1 {
                touches_frame = true;
            }
            let mut visit = |dx: i64, dy: i64| {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    return;
                }
                let j = ny as usize * w + nx as usize;
                if !seen[j] && mask.bits[j] == fg {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if fg {
                for (dx, dy) in DIRS {
                    visit(dx, dy);
                }
            } else {
                for (dx, dy) in N4 {
                    visit(dx, dy);
                }
            }
        }
        if fg {
            components += 1;
        } else if !touches_frame {
            holes += 1;
        }
    }
    Topology { components, holes }
}
