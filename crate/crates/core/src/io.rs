//! Annotation files and pipeline configuration.
//!
//! Three JSON layouts are understood. Rings are always stored as one flat
//! chain with the outer count under the `ring_partition` key:
//!
//! ```text
//! native      {"format": "native", "image": {..}, "annotations": [{"label", "vertices", "ring_partition"?}]}
//! coco        {"images": [one image], "categories": [..], "annotations": [{"segmentation": [[..]], "ring_partition"?, ..}]}
//! labelme     {"shapes": [{"label", "points": [[x, y], ..], "shape_type": "polygon", "ring_partition"?}], "imagePath", ..}
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::polygon::{signed_area, Point2, RingPolygon};
use crate::transform::{AugmentationKind, AugmentationSpec};

pub const PARTITION_KEY: &str = "ring_partition";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnnotationFormat {
    #[serde(rename = "native")]
    Native,
    #[serde(rename = "coco-single-chain")]
    CocoSingleChain,
    #[serde(rename = "labelme")]
    LabelMe,
}

impl AnnotationFormat {
    pub const ALL: [AnnotationFormat; 3] = [Self::Native, Self::CocoSingleChain, Self::LabelMe];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Native => "native",
            Self::CocoSingleChain => "coco-single-chain",
            Self::LabelMe => "labelme",
        }
    }
}

impl fmt::Display for AnnotationFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AnnotationFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "native" => Ok(Self::Native),
            "coco-single-chain" | "coco" => Ok(Self::CocoSingleChain),
            "labelme" => Ok(Self::LabelMe),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRef {
    pub path: String,
    pub width: usize,
    pub height: usize,
}

/// One image's polygons. Labels live on the polygons.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationDocument {
    pub image: ImageRef,
    pub annotations: Vec<RingPolygon>,
    pub format: AnnotationFormat,
}

impl AnnotationDocument {
    pub fn new(image: ImageRef, annotations: Vec<RingPolygon>) -> Self {
        Self {
            image,
            annotations,
            format: AnnotationFormat::Native,
        }
    }

    /// Lint: 0-based positions of annotations with a vertex outside
    /// `[0, width] x [0, height]`.
    pub fn out_of_bounds(&self) -> Vec<usize> {
        let (w, h) = (self.image.width as f64, self.image.height as f64);
        self.annotations
            .iter()
            .enumerate()
            .filter(|(_, a)| {
                a.vertices()
                    .iter()
                    .any(|p| !(0.0..=w).contains(&p.x) || !(0.0..=h).contains(&p.y))
            })
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn read_annotations(path: impl AsRef<Path>) -> Result<AnnotationDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_annotations(&text)
}

/// Parses a document, detecting its layout from a `format` tag or, failing
/// that, from its top-level keys.
pub fn parse_annotations(text: &str) -> Result<AnnotationDocument> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Format("top level must be a JSON object".into()))?;
    let format = match obj.get("format") {
        Some(Value::String(tag)) => tag.parse()?,
        Some(_) => return Err(Error::Format("`format` must be a string".into())),
        None if obj.contains_key("images") => AnnotationFormat::CocoSingleChain,
        None if obj.contains_key("shapes") => AnnotationFormat::LabelMe,
        None => return Err(Error::UnsupportedFormat("<untagged>".into())),
    };
    match format {
        AnnotationFormat::Native => parse_native(obj),
        AnnotationFormat::CocoSingleChain => parse_coco(obj),
        AnnotationFormat::LabelMe => parse_labelme(obj),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Format(format!("{ctx}: missing `{key}`")))
}

fn as_object<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Format(format!("{ctx}: expected an object")))
}

fn as_array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Format(format!("{ctx}: expected an array")))
}

fn as_usize(v: &Value, ctx: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| Error::Format(format!("{ctx}: expected a non-negative integer")))
}

fn as_str<'a>(v: &'a Value, ctx: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Format(format!("{ctx}: expected a string")))
}

fn as_f64(v: &Value, ctx: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Format(format!("{ctx}: expected a number")))
}

fn flat_points(v: &Value, ctx: &str) -> Result<Vec<Point2>> {
    let coords = as_array(v, ctx)?;
    if coords.len() % 2 != 0 {
        return Err(Error::Format(format!(
            "{ctx}: coordinate array has odd length {}",
            coords.len()
        )));
    }
    coords
        .chunks(2)
        .map(|c| Ok(Point2::new(as_f64(&c[0], ctx)?, as_f64(&c[1], ctx)?)))
        .collect()
}

fn flatten(points: &[Point2]) -> Vec<f64> {
    points.iter().flat_map(|p| [p.x, p.y]).collect()
}

fn build_polygon(
    vertices: Vec<Point2>,
    meta: &Map<String, Value>,
    label: &str,
    ctx: &str,
) -> Result<RingPolygon> {
    let partition = match meta.get(PARTITION_KEY) {
        None | Some(Value::Null) => None,
        Some(v) => {
            let l = as_usize(v, ctx)?;
            if l == 0 || l >= vertices.len() {
                return Err(Error::Format(format!(
                    "{ctx}: {PARTITION_KEY} {l} out of range for {} vertices",
                    vertices.len()
                )));
            }
            Some(l)
        }
    };
    RingPolygon::new(vertices, partition, label)
}

fn parse_image(v: &Value, ctx: &str) -> Result<ImageRef> {
    let o = as_object(v, ctx)?;
    Ok(ImageRef {
        path: as_str(field(o, "path", ctx)?, ctx)?.to_string(),
        width: as_usize(field(o, "width", ctx)?, ctx)?,
        height: as_usize(field(o, "height", ctx)?, ctx)?,
    })
}

fn parse_native(obj: &Map<String, Value>) -> Result<AnnotationDocument> {
    let image = parse_image(field(obj, "image", "document")?, "image")?;
    let annotations = as_array(field(obj, "annotations", "document")?, "annotations")?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let ctx = format!("annotation {i}");
            let a = as_object(a, &ctx)?;
            let label = as_str(field(a, "label", &ctx)?, &ctx)?;
            let vertices = flat_points(field(a, "vertices", &ctx)?, &ctx)?;
            build_polygon(vertices, a, label, &ctx)
        })
        .collect::<Result<_>>()?;
    Ok(AnnotationDocument {
        image,
        annotations,
        format: AnnotationFormat::Native,
    })
}

fn parse_coco(obj: &Map<String, Value>) -> Result<AnnotationDocument> {
    let images = as_array(field(obj, "images", "document")?, "images")?;
    let [img] = images.as_slice() else {
        return Err(Error::Format(format!(
            "expected exactly one image, found {}",
            images.len()
        )));
    };
    let img = as_object(img, "image")?;
    let image_id = img.get("id").cloned().unwrap_or(Value::Null);
    let image = ImageRef {
        path: as_str(field(img, "file_name", "image")?, "image")?.to_string(),
        width: as_usize(field(img, "width", "image")?, "image")?,
        height: as_usize(field(img, "height", "image")?, "image")?,
    };

    let mut categories = Vec::new();
    if let Some(cats) = obj.get("categories") {
        for c in as_array(cats, "categories")? {
            let c = as_object(c, "category")?;
            categories.push((
                field(c, "id", "category")?.clone(),
                as_str(field(c, "name", "category")?, "category")?.to_string(),
            ));
        }
    }

    let mut annotations = Vec::new();
    for (i, a) in as_array(field(obj, "annotations", "document")?, "annotations")?
        .iter()
        .enumerate()
    {
        let ctx = format!("annotation {i}");
        let a = as_object(a, &ctx)?;
        if let Some(id) = a.get("image_id") {
            if *id != image_id {
                return Err(Error::Format(format!("{ctx}: refers to unknown image {id}")));
            }
        }
        let label = match a.get("category_id") {
            None | Some(Value::Null) => "",
            Some(cid) => categories
                .iter()
                .find(|(id, _)| id == cid)
                .map(|(_, name)| name.as_str())
                .ok_or_else(|| Error::Format(format!("{ctx}: unknown category {cid}")))?,
        };
        let seg = field(a, "segmentation", &ctx)?;
        let parts = seg
            .as_array()
            .ok_or_else(|| Error::Format(format!("{ctx}: RLE segmentation is not supported")))?;
        let [chain] = parts.as_slice() else {
            return Err(Error::Format(format!(
                "{ctx}: expected one single-chain segmentation, found {} parts",
                parts.len()
            )));
        };
        let vertices = flat_points(chain, &ctx)?;
        annotations.push(build_polygon(vertices, a, label, &ctx)?);
    }
    Ok(AnnotationDocument {
        image,
        annotations,
        format: AnnotationFormat::CocoSingleChain,
    })
}

fn parse_labelme(obj: &Map<String, Value>) -> Result<AnnotationDocument> {
    let image = ImageRef {
        path: as_str(field(obj, "imagePath", "document")?, "imagePath")?.to_string(),
        width: as_usize(field(obj, "imageWidth", "document")?, "imageWidth")?,
        height: as_usize(field(obj, "imageHeight", "document")?, "imageHeight")?,
    };
    let mut annotations = Vec::new();
    for (i, s) in as_array(field(obj, "shapes", "document")?, "shapes")?
        .iter()
        .enumerate()
    {
        let ctx = format!("shape {i}");
        let s = as_object(s, &ctx)?;
        let kind = match s.get("shape_type") {
            None | Some(Value::Null) => "polygon",
            Some(v) => as_str(v, &ctx)?,
        };
        if kind != "polygon" {
            warn!("{ctx}: skipping non-polygon shape `{kind}`");
            continue;
        }
        let label = as_str(field(s, "label", &ctx)?, &ctx)?;
        let vertices = as_array(field(s, "points", &ctx)?, &ctx)?
            .iter()
            .map(|p| match p.as_array().map(Vec::as_slice) {
                Some([x, y]) => Ok(Point2::new(as_f64(x, &ctx)?, as_f64(y, &ctx)?)),
                _ => Err(Error::Format(format!("{ctx}: each point must be [x, y]"))),
            })
            .collect::<Result<Vec<_>>>()?;
        annotations.push(build_polygon(vertices, s, label, &ctx)?);
    }
    Ok(AnnotationDocument {
        image,
        annotations,
        format: AnnotationFormat::LabelMe,
    })
}

/// Serializes `doc` in `format`. Floats are written as shortest round-trip
/// decimals.
pub fn render_annotations(doc: &AnnotationDocument, format: AnnotationFormat) -> String {
    let value = match format {
        AnnotationFormat::Native => native_value(doc),
        AnnotationFormat::CocoSingleChain => coco_value(doc),
        AnnotationFormat::LabelMe => labelme_value(doc),
    };
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub fn write_annotations(doc: &AnnotationDocument, path: impl AsRef<Path>, format: AnnotationFormat) -> Result<()> {
    let path = path.as_ref();
    if format != AnnotationFormat::Native && doc.annotations.iter().any(RingPolygon::is_ring) {
        warn!(
            "{}: {format} has no ring encoding; storing the partition under `{PARTITION_KEY}`",
            path.display()
        );
    }
    std::fs::write(path, render_annotations(doc, format)).map_err(|e| Error::io(path, e))
}

fn with_partition(mut obj: Map<String, Value>, poly: &RingPolygon) -> Value {
    if let Some(l) = poly.partition() {
        obj.insert(PARTITION_KEY.into(), json!(l));
    }
    Value::Object(obj)
}

fn native_value(doc: &AnnotationDocument) -> Value {
    let annotations: Vec<Value> = doc
        .annotations
        .iter()
        .map(|a| {
            let mut o = Map::new();
            o.insert("label".into(), json!(a.label()));
            o.insert("vertices".into(), json!(flatten(a.vertices())));
            with_partition(o, a)
        })
        .collect();
    json!({
        "format": AnnotationFormat::Native.as_str(),
        "image": doc.image,
        "annotations": annotations,
    })
}

fn labels_in_order(doc: &AnnotationDocument) -> Vec<&str> {
    let mut labels: Vec<&str> = Vec::new();
    for a in &doc.annotations {
        if !labels.contains(&a.label()) {
            labels.push(a.label());
        }
    }
    labels
}

fn bbox(points: &[Point2]) -> [f64; 4] {
    if points.is_empty() {
        return [0.0; 4];
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    [x0, y0, x1 - x0, y1 - y0]
}

/// Region area: outer minus inner for rings, whole chain otherwise.
fn region_area(poly: &RingPolygon) -> f64 {
    match poly.split_boundaries() {
        Ok((outer, inner)) => signed_area(outer).abs() - signed_area(inner).abs(),
        Err(_) => signed_area(poly.vertices()).abs(),
    }
}

fn coco_value(doc: &AnnotationDocument) -> Value {
    let labels = labels_in_order(doc);
    let categories: Vec<Value> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| json!({"id": i + 1, "name": l}))
        .collect();
    let annotations: Vec<Value> = doc
        .annotations
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let cat = labels.iter().position(|l| *l == a.label()).expect("label collected") + 1;
            let mut o = Map::new();
            o.insert("id".into(), json!(i + 1));
            o.insert("image_id".into(), json!(1));
            o.insert("category_id".into(), json!(cat));
            o.insert("segmentation".into(), json!([flatten(a.vertices())]));
            o.insert("bbox".into(), json!(bbox(a.vertices())));
            o.insert("area".into(), json!(region_area(a)));
            o.insert("iscrowd".into(), json!(0));
            with_partition(o, a)
        })
        .collect();
    json!({
        "images": [{
            "id": 1,
            "file_name": doc.image.path,
            "width": doc.image.width,
            "height": doc.image.height,
        }],
        "categories": categories,
        "annotations": annotations,
    })
}

fn labelme_value(doc: &AnnotationDocument) -> Value {
    let shapes: Vec<Value> = doc
        .annotations
        .iter()
        .map(|a| {
            let points: Vec<[f64; 2]> = a.vertices().iter().map(|p| [p.x, p.y]).collect();
            let mut o = Map::new();
            o.insert("label".into(), json!(a.label()));
            o.insert("points".into(), json!(points));
            o.insert("group_id".into(), Value::Null);
            o.insert("shape_type".into(), json!("polygon"));
            o.insert("flags".into(), json!({}));
            with_partition(o, a)
        })
        .collect();
    json!({
        "version": "5.0.1",
        "flags": {},
        "shapes": shapes,
        "imagePath": doc.image.path,
        "imageData": Value::Null,
        "imageHeight": doc.image.height,
        "imageWidth": doc.image.width,
    })
}

/// COCO multi-polygon export of one annotation: `[outer, inner]` for a valid
/// ring, `[chain]` otherwise. The inner part is read as a hole by consumers
/// that follow the even-odd convention.
pub fn to_coco_multipolygon(poly: &RingPolygon) -> Vec<Vec<f64>> {
    match poly.split_boundaries() {
        Ok((outer, inner)) => vec![flatten(outer), flatten(inner)],
        Err(_) => vec![flatten(poly.vertices())],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneratePolicy {
    /// Drop annotations that repair cannot close.
    Skip,
    /// Write them unchanged-in-order with a warning.
    Keep,
}

impl FromStr for DegeneratePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skip" => Ok(Self::Skip),
            "keep" => Ok(Self::Keep),
            other => Err(Error::Config(format!("unknown degenerate policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub augmentations: Vec<AugmentationSpec>,
    pub samples_per_image: usize,
    pub seed: u64,
    /// Survivor snapping distance in output pixels.
    pub tol: f64,
    /// Distance used when matching augmented vertices back to originals.
    pub match_tol: f64,
    pub degenerate: DegeneratePolicy,
    pub output_format: AnnotationFormat,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            augmentations: AugmentationKind::TABLE.iter().map(|&k| AugmentationSpec::new(k)).collect(),
            samples_per_image: 5,
            seed: 0,
            tol: crate::project::DEFAULT_TOL,
            match_tol: crate::project::DEFAULT_TOL,
            degenerate: DegeneratePolicy::Skip,
            output_format: AnnotationFormat::Native,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_image == 0 {
            return Err(Error::Config("samples_per_image must be at least 1".into()));
        }
        if self.augmentations.is_empty() {
            return Err(Error::Config("at least one augmentation is required".into()));
        }
        for (name, v) in [("tol", self.tol), ("match_tol", self.match_tol)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("{name} must be a non-negative number")));
            }
        }
        self.augmentations.iter().try_for_each(AugmentationSpec::validate)
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<PipelineConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cfg: PipelineConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Annotation files directly inside `dir`, sorted by name.
pub fn list_annotation_files(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_doc() -> AnnotationDocument {
        let outer = [(0.0, 0.0), (0.0, 30.0), (30.0, 30.0), (30.0, 0.0)];
        let inner = [(10.0, 10.0), (20.0, 10.0), (20.0, 20.0), (10.0, 20.0)];
        let v = outer
            .iter()
            .chain(&inner)
            .map(|&(x, y)| Point2::new(x + 0.1, y + 1.0 / 3.0))
            .collect();
        let square = (0..4)
            .map(|k| Point2::new([0.0, 5.0, 5.0, 0.0][k], [0.0, 0.0, 5.0, 5.0][k]))
            .collect();
        AnnotationDocument::new(
            ImageRef {
                path: "plan.png".into(),
                width: 64,
                height: 48,
            },
            vec![
                RingPolygon::ring(v, 4).unwrap().with_label("wall"),
                RingPolygon::simple(square).unwrap().with_label("door"),
            ],
        )
    }

    #[test]
    fn coco_square_is_simple() {
        let text = r#"{"images":[{"id":7,"file_name":"a.png","width":20,"height":20}],
            "categories":[{"id":3,"name":"room"}],
            "annotations":[{"image_id":7,"category_id":3,"segmentation":[[0,0,10,0,10,10,0,10]]}]}"#;
        let doc = parse_annotations(text).unwrap();
        assert_eq!(doc.format, AnnotationFormat::CocoSingleChain);
        let a = &doc.annotations[0];
        assert_eq!(a.len(), 4);
        assert_eq!(a.partition(), None);
        assert_eq!(a.label(), "room");
    }

    #[test]
    fn coco_partition_key() {
        let text = r#"{"images":[{"file_name":"a.png","width":40,"height":40}],
            "annotations":[{"segmentation":[[0,0,0,30,30,30,30,0,10,10,20,10,20,20,10,20]],"ring_partition":4}]}"#;
        let doc = parse_annotations(text).unwrap();
        assert_eq!(doc.annotations[0].partition(), Some(4));
        assert_eq!(doc.annotations[0].len(), 8);
    }

    #[test]
    fn round_trip_every_format() {
        let doc = ring_doc();
        for format in AnnotationFormat::ALL {
            let back = parse_annotations(&render_annotations(&doc, format)).unwrap();
            assert_eq!(back.annotations, doc.annotations, "{format}");
            assert_eq!(back.image, doc.image);
            assert_eq!(back.format, format);
        }
    }

    #[test]
    fn labelme_ring_carries_partition() {
        let text = render_annotations(&ring_doc(), AnnotationFormat::LabelMe);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["shapes"][0][PARTITION_KEY], json!(4));
        assert!(v["shapes"][1].get(PARTITION_KEY).is_none());
    }

    #[test]
    fn empty_document() {
        let mut doc = ring_doc();
        doc.annotations.clear();
        for format in AnnotationFormat::ALL {
            let back = parse_annotations(&render_annotations(&doc, format)).unwrap();
            assert!(back.annotations.is_empty());
        }
    }

    #[test]
    fn errors() {
        let truncated = &render_annotations(&ring_doc(), AnnotationFormat::Native)[..40];
        assert!(matches!(parse_annotations(truncated), Err(Error::Parse { .. })));
        let odd = r#"{"format":"native","image":{"path":"a","width":1,"height":1},
            "annotations":[{"label":"x","vertices":[0,0,1]}]}"#;
        assert!(matches!(parse_annotations(odd), Err(Error::Format(_))));
        assert!(matches!(
            parse_annotations(r#"{"format":"geojson"}"#),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(parse_annotations(r#"{"a":1}"#), Err(Error::UnsupportedFormat(_))));
        let multi = r#"{"images":[{"file_name":"a.png","width":40,"height":40}],
            "annotations":[{"segmentation":[[0,0,1,0,1,1],[2,2,3,2,3,3]]}]}"#;
        assert!(matches!(parse_annotations(multi), Err(Error::Format(_))));
        let rle = r#"{"images":[{"file_name":"a.png","width":4,"height":4}],
            "annotations":[{"segmentation":{"counts":[1,2],"size":[4,4]}}]}"#;
        assert!(matches!(parse_annotations(rle), Err(Error::Format(_))));
    }

    #[test]
    fn parse_error_reports_position() {
        match parse_annotations("{\n  \"format\": \"native\",\n  oops\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn labelme_skips_non_polygons() {
        let text = r#"{"imagePath":"a.png","imageWidth":10,"imageHeight":10,"shapes":[
            {"label":"p","shape_type":"point","points":[[1,1]]},
            {"label":"q","shape_type":"polygon","points":[[0,0],[4,0],[4,4]]}]}"#;
        let doc = parse_annotations(text).unwrap();
        assert_eq!(doc.annotations.len(), 1);
        assert_eq!(doc.annotations[0].label(), "q");
    }

    #[test]
    fn out_of_bounds_lint() {
        let mut doc = ring_doc();
        assert!(doc.out_of_bounds().is_empty());
        doc.image.width = 20;
        assert_eq!(doc.out_of_bounds(), vec![0]);
    }

    #[test]
    fn multipolygon_export() {
        let doc = ring_doc();
        let parts = to_coco_multipolygon(&doc.annotations[0]);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].len(), 8);
        assert_eq!(to_coco_multipolygon(&doc.annotations[1]).len(), 1);
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg: PipelineConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg.samples_per_image, 5);
        assert_eq!(cfg.augmentations.len(), 6);
        cfg.validate().unwrap();
        let bad = PipelineConfig {
            samples_per_image: 0,
            ..cfg
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
    }
}
