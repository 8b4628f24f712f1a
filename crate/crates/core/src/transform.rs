//! Augmentation sampling, affine plans and mask warping.
//!
//! Coordinates follow the pixel-area convention used by [`crate::raster`]:
//! the frame spans `[0, w] x [0, h]` and the image center is `(w/2, h/2)`.
//! A horizontal flip is therefore `x -> w - x`, which maps pixel column `px`
//! exactly onto column `w - 1 - px`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::polygon::Point2;
use crate::raster::BinaryMask;

/// Row-major 2x3 affine matrix: `x' = m[0][0] x + m[0][1] y + m[0][2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine2(pub [[f64; 3]; 2]);

impl Default for Affine2 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Affine2 {
    pub const IDENTITY: Affine2 = Affine2([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);

    pub fn translation(dx: f64, dy: f64) -> Self {
        Affine2([[1.0, 0.0, dx], [0.0, 1.0, dy]])
    }

    pub fn scaling(sx: f64, sy: f64) -> Self {
        Affine2([[sx, 0.0, 0.0], [0.0, sy, 0.0]])
    }

    /// Rotation by `degrees` with the standard matrix. In image coordinates
    /// (y down) positive angles turn clockwise on screen.
    pub fn rotation(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        Affine2([[c, -s, 0.0], [s, c, 0.0]])
    }

    /// Conjugates `self` so that it acts about `center` instead of the origin.
    pub fn about(self, center: Point2) -> Self {
        Affine2::translation(center.x, center.y)
            .compose(&self)
            .compose(&Affine2::translation(-center.x, -center.y))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Affine2) -> Self {
        let a = &self.0;
        let b = &other.0;
        Affine2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
                a[0][0] * b[0][2] + a[0][1] * b[1][2] + a[0][2],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
                a[1][0] * b[0][2] + a[1][1] * b[1][2] + a[1][2],
            ],
        ])
    }

    /// Apply `next` after `self`.
    pub fn then(&self, next: &Affine2) -> Self {
        next.compose(self)
    }

    pub fn determinant(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let m = &self.0;
        Point2::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2],
            m[1][0] * p.x + m[1][1] * p.y + m[1][2],
        )
    }

    pub fn invert(&self) -> Result<Affine2> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::DegenerateTransform { det });
        }
        let m = &self.0;
        let (a, b, c, d) = (m[1][1] / det, -m[0][1] / det, -m[1][0] / det, m[0][0] / det);
        Ok(Affine2([
            [a, b, -(a * m[0][2] + b * m[1][2])],
            [c, d, -(c * m[0][2] + d * m[1][2])],
        ]))
    }
}

/// Axis-aligned rectangle `[x, x + width] x [y, y + height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, width: f64, height: f64) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn frame(width: usize, height: usize) -> Self {
        Self::new(0.0, 0.0, width as f64, height as f64)
    }

    pub fn right(&self) -> f64 {
        self.x + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.height
    }

    /// Closed containment.
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x && p.x <= self.right() && p.y >= self.y && p.y <= self.bottom()
    }

    /// Distance from `p` to the rectangle's border.
    pub fn border_distance(&self, p: Point2) -> f64 {
        if self.contains(p) {
            (p.x - self.x)
                .min(self.right() - p.x)
                .min(p.y - self.y)
                .min(self.bottom() - p.y)
        } else {
            let dx = (self.x - p.x).max(p.x - self.right()).max(0.0);
            let dy = (self.y - p.y).max(p.y - self.bottom()).max(0.0);
            dx.hypot(dy)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    Identity,
    Rotation,
    Scale,
    Crop,
    RotationCrop,
    Translation,
    Hflip,
    Vflip,
    Composite,
}

/// The sampled values behind a plan, kept for run manifests.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crop_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translate: Option<[f64; 2]>,
    #[serde(default)]
    pub hflip: bool,
    #[serde(default)]
    pub vflip: bool,
}

/// A concrete geometric transform from an input frame to an output frame.
///
/// `matrix` is the full source-to-output mapping. A crop is folded into it as
/// a scale and translate that stretches `crop_window` (expressed in the
/// pre-crop frame) onto the output frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePlan {
    pub matrix: Affine2,
    pub crop_window: Option<Rect>,
    pub in_width: usize,
    pub in_height: usize,
    pub out_width: usize,
    pub out_height: usize,
    pub kind: PlanKind,
    #[serde(default)]
    pub params: PlanParams,
}

impl AffinePlan {
    pub fn identity(width: usize, height: usize) -> Self {
        Self::from_matrix(Affine2::IDENTITY, width, height, PlanKind::Identity)
    }

    /// A plan with equal input and output frames and no crop.
    pub fn from_matrix(matrix: Affine2, width: usize, height: usize, kind: PlanKind) -> Self {
        Self {
            matrix,
            crop_window: None,
            in_width: width,
            in_height: height,
            out_width: width,
            out_height: height,
            kind,
            params: PlanParams::default(),
        }
    }

    pub fn center(width: usize, height: usize) -> Point2 {
        Point2::new(width as f64 / 2.0, height as f64 / 2.0)
    }

    pub fn rotation(degrees: f64, width: usize, height: usize) -> Self {
        let m = Affine2::rotation(degrees).about(Self::center(width, height));
        let mut plan = Self::from_matrix(m, width, height, PlanKind::Rotation);
        plan.params.angle_deg = Some(degrees);
        plan
    }

    pub fn scale(factor: f64, width: usize, height: usize) -> Self {
        let m = Affine2::scaling(factor, factor).about(Self::center(width, height));
        let mut plan = Self::from_matrix(m, width, height, PlanKind::Scale);
        plan.params.scale = Some(factor);
        plan
    }

    pub fn translation(dx: f64, dy: f64, width: usize, height: usize) -> Self {
        let mut plan =
            Self::from_matrix(Affine2::translation(dx, dy), width, height, PlanKind::Translation);
        plan.params.translate = Some([dx, dy]);
        plan
    }

    pub fn hflip(width: usize, height: usize) -> Self {
        let m = Affine2([[-1.0, 0.0, width as f64], [0.0, 1.0, 0.0]]);
        let mut plan = Self::from_matrix(m, width, height, PlanKind::Hflip);
        plan.params.hflip = true;
        plan
    }

    pub fn vflip(width: usize, height: usize) -> Self {
        let m = Affine2([[1.0, 0.0, 0.0], [0.0, -1.0, height as f64]]);
        let mut plan = Self::from_matrix(m, width, height, PlanKind::Vflip);
        plan.params.vflip = true;
        plan
    }

    /// Follows this plan with a crop of `window` (in this plan's output
    /// frame) resized back onto the full output frame.
    pub fn with_crop(mut self, window: Rect) -> Self {
        let sx = self.out_width as f64 / window.width;
        let sy = self.out_height as f64 / window.height;
        let crop = Affine2::scaling(sx, sy).compose(&Affine2::translation(-window.x, -window.y));
        self.matrix = self.matrix.then(&crop);
        self.crop_window = Some(window);
        self
    }

    pub fn output_frame(&self) -> Rect {
        Rect::frame(self.out_width, self.out_height)
    }

    pub fn apply_point(&self, p: Point2) -> Point2 {
        self.matrix.apply(p)
    }

    pub fn invert(&self) -> Result<AffinePlan> {
        Ok(AffinePlan {
            matrix: self.matrix.invert()?,
            crop_window: None,
            in_width: self.out_width,
            in_height: self.out_height,
            out_width: self.in_width,
            out_height: self.in_height,
            kind: self.kind,
            params: PlanParams::default(),
        })
    }
}

pub fn apply_point(plan: &AffinePlan, p: Point2) -> Point2 {
    plan.apply_point(p)
}

pub fn invert(plan: &AffinePlan) -> Result<AffinePlan> {
    plan.invert()
}

/// Closed interval `[min, max]`, serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }
}

impl From<[f64; 2]> for Range {
    fn from(v: [f64; 2]) -> Self {
        Range::new(v[0], v[1])
    }
}

impl From<Range> for [f64; 2] {
    fn from(r: Range) -> Self {
        [r.min, r.max]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentationKind {
    Identity,
    Rotation,
    Scale,
    Crop,
    RotationCrop,
    Translation,
    Flip,
    Composite,
}

impl AugmentationKind {
    /// The single and compound augmentations from the evaluated parameter
    /// table.
    pub const TABLE: [AugmentationKind; 6] = [
        AugmentationKind::Rotation,
        AugmentationKind::Scale,
        AugmentationKind::Crop,
        AugmentationKind::RotationCrop,
        AugmentationKind::Translation,
        AugmentationKind::Flip,
    ];
}

/// What to sample and from which ranges. Defaults are the standard ranges:
/// rotation ±30°, scale 0.7–1.3, crop side ratio 0.6–1.0, shift ±10% per
/// axis, and each flip axis gated at probability 0.5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentationSpec {
    pub kind: AugmentationKind,
    pub rotation_deg: Range,
    pub scale: Range,
    pub crop_scale: Range,
    pub translate_ratio: Range,
    pub hflip_prob: f64,
    pub vflip_prob: f64,
}

impl Default for AugmentationSpec {
    fn default() -> Self {
        Self {
            kind: AugmentationKind::Identity,
            rotation_deg: Range::new(-30.0, 30.0),
            scale: Range::new(0.7, 1.3),
            crop_scale: Range::new(0.6, 1.0),
            translate_ratio: Range::new(-0.1, 0.1),
            hflip_prob: 0.5,
            vflip_prob: 0.5,
        }
    }
}

impl AugmentationSpec {
    pub fn new(kind: AugmentationKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ranges = [
            ("rotation_deg", self.rotation_deg),
            ("scale", self.scale),
            ("crop_scale", self.crop_scale),
            ("translate_ratio", self.translate_ratio),
        ];
        for (name, r) in ranges {
            if !(r.min.is_finite() && r.max.is_finite()) || r.min > r.max {
                return Err(Error::Config(format!(
                    "{name} range [{}, {}] must be finite with min <= max",
                    r.min, r.max
                )));
            }
        }
        if self.scale.min <= 0.0 {
            return Err(Error::Config("scale factors must be positive".into()));
        }
        if self.crop_scale.min <= 0.0 || self.crop_scale.max > 1.0 {
            return Err(Error::Config("crop_scale must lie in (0, 1]".into()));
        }
        for (name, p) in [("hflip_prob", self.hflip_prob), ("vflip_prob", self.vflip_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Derives an independent sampling seed for one (key, index) pair.
///
/// Stream rule v1: the first eight bytes, little-endian, of
/// `SHA-256("ringaug-stream-v1" || master_seed_le || key_len_le || key || index_le)`.
/// The derived seed then drives a ChaCha8 generator.
pub fn derive_seed(master_seed: u64, key: &str, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(b"ringaug-stream-v1");
    hasher.update(master_seed.to_le_bytes());
    hasher.update((key.len() as u64).to_le_bytes());
    hasher.update(key.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// Samples a plan for a `width x height` frame. Deterministic in
/// `(spec, width, height, seed)`.
pub fn sample(spec: &AugmentationSpec, width: usize, height: usize, seed: u64) -> Result<AffinePlan> {
    spec.validate()?;
    if width == 0 || height == 0 {
        return Err(Error::Config("frame must be at least 1x1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (width as f64, height as f64);
    let center = AffinePlan::center(width, height);
    let mut params = PlanParams::default();
    let mut matrix = Affine2::IDENTITY;
    let mut crop = None;

    let flip = |rng: &mut ChaCha8Rng, params: &mut PlanParams, matrix: &mut Affine2| {
        params.hflip = rng.random::<f64>() < spec.hflip_prob;
        params.vflip = rng.random::<f64>() < spec.vflip_prob;
        if params.hflip {
            *matrix = matrix.then(&AffinePlan::hflip(width, height).matrix);
        }
        if params.vflip {
            *matrix = matrix.then(&AffinePlan::vflip(width, height).matrix);
        }
    };
    let rotate = |rng: &mut ChaCha8Rng, params: &mut PlanParams, matrix: &mut Affine2| {
        let angle = spec.rotation_deg.sample(rng);
        params.angle_deg = Some(angle);
        *matrix = matrix.then(&Affine2::rotation(angle).about(center));
    };
    let scale = |rng: &mut ChaCha8Rng, params: &mut PlanParams, matrix: &mut Affine2| {
        let s = spec.scale.sample(rng);
        params.scale = Some(s);
        *matrix = matrix.then(&Affine2::scaling(s, s).about(center));
    };
    let translate = |rng: &mut ChaCha8Rng, params: &mut PlanParams, matrix: &mut Affine2| {
        let dx = spec.translate_ratio.sample(rng) * w;
        let dy = spec.translate_ratio.sample(rng) * h;
        params.translate = Some([dx, dy]);
        *matrix = matrix.then(&Affine2::translation(dx, dy));
    };
    let crop_window = |rng: &mut ChaCha8Rng, params: &mut PlanParams| {
        let s = spec.crop_scale.sample(rng);
        params.crop_scale = Some(s);
        let (cw, ch) = (s * w, s * h);
        let x = if w > cw { rng.random_range(0.0..=w - cw) } else { 0.0 };
        let y = if h > ch { rng.random_range(0.0..=h - ch) } else { 0.0 };
        Rect::new(x, y, cw, ch)
    };

    let kind = match spec.kind {
        AugmentationKind::Identity => PlanKind::Identity,
        AugmentationKind::Rotation => {
            rotate(&mut rng, &mut params, &mut matrix);
            PlanKind::Rotation
        }
        AugmentationKind::Scale => {
            scale(&mut rng, &mut params, &mut matrix);
            PlanKind::Scale
        }
        AugmentationKind::Crop => {
            crop = Some(crop_window(&mut rng, &mut params));
            PlanKind::Crop
        }
        AugmentationKind::RotationCrop => {
            rotate(&mut rng, &mut params, &mut matrix);
            crop = Some(crop_window(&mut rng, &mut params));
            PlanKind::RotationCrop
        }
        AugmentationKind::Translation => {
            translate(&mut rng, &mut params, &mut matrix);
            PlanKind::Translation
        }
        AugmentationKind::Flip => {
            flip(&mut rng, &mut params, &mut matrix);
            match (params.hflip, params.vflip) {
                (false, false) => PlanKind::Identity,
                (true, false) => PlanKind::Hflip,
                (false, true) => PlanKind::Vflip,
                (true, true) => PlanKind::Composite,
            }
        }
        AugmentationKind::Composite => {
            flip(&mut rng, &mut params, &mut matrix);
            scale(&mut rng, &mut params, &mut matrix);
            rotate(&mut rng, &mut params, &mut matrix);
            translate(&mut rng, &mut params, &mut matrix);
            crop = Some(crop_window(&mut rng, &mut params));
            PlanKind::Composite
        }
    };

    let mut plan = AffinePlan::from_matrix(matrix, width, height, kind);
    plan.params = params;
    if let Some(window) = crop {
        plan = plan.with_crop(window);
    }
    Ok(plan)
}

/// Nearest-neighbor inverse mapping: an output pixel is set when the input
/// pixel containing the preimage of its center is set.
pub fn warp_mask(mask: &BinaryMask, plan: &AffinePlan) -> Result<BinaryMask> {
    let inv = plan.matrix.invert()?;
    let (ow, oh) = (plan.out_width, plan.out_height);
    let mut out = BinaryMask::new(ow, oh);

    // Restrict the scan to the image of the source foreground's bounding box.
    let Some((x0, y0, x1, y1)) = foreground_bbox(mask) else {
        return Ok(out);
    };
    let corners = [
        Point2::new(x0 as f64, y0 as f64),
        Point2::new(x1 as f64 + 1.0, y0 as f64),
        Point2::new(x0 as f64, y1 as f64 + 1.0),
        Point2::new(x1 as f64 + 1.0, y1 as f64 + 1.0),
    ]
    .map(|p| plan.matrix.apply(p));
    let fold = |f: fn(f64, f64) -> f64, init: f64, g: fn(&Point2) -> f64| {
        corners.iter().map(g).fold(init, f)
    };
    let min_x = (fold(f64::min, f64::INFINITY, |p| p.x).floor() - 1.0).max(0.0) as usize;
    let min_y = (fold(f64::min, f64::INFINITY, |p| p.y).floor() - 1.0).max(0.0) as usize;
    let max_x = (fold(f64::max, f64::NEG_INFINITY, |p| p.x).ceil() + 1.0).clamp(0.0, ow as f64) as usize;
    let max_y = (fold(f64::max, f64::NEG_INFINITY, |p| p.y).ceil() + 1.0).clamp(0.0, oh as f64) as usize;

    for py in min_y..max_y {
        for px in min_x..max_x {
            let s = inv.apply(Point2::new(px as f64 + 0.5, py as f64 + 0.5));
            if mask.get(s.x.floor() as i64, s.y.floor() as i64) {
                out.set(px, py, true);
            }
        }
    }
    Ok(out)
}

fn foreground_bbox(mask: &BinaryMask) -> Option<(usize, usize, usize, usize)> {
    let w = mask.width();
    let mut bbox: Option<(usize, usize, usize, usize)> = None;
    for (i, _) in mask.bits().iter().enumerate().filter(|(_, b)| **b) {
        let (x, y) = (i % w, i / w);
        bbox = Some(match bbox {
            None => (x, y, x, y),
            Some((a, b, c, d)) => (a.min(x), b.min(y), c.max(x), d.max(y)),
        });
    }
    bbox
}
