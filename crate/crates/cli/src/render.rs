use std::fmt::Write as _;
use std::path::Path;

use image::{Rgb, RgbImage};
use imageproc::drawing::{draw_filled_circle_mut, draw_line_segment_mut};

use ringaug::io::{read_annotations, AnnotationDocument};
use ringaug::{Point2, RingPolygon};

use crate::{write_file, CliError};

pub const OUTER: &str = "#2ca02c";
pub const INNER: &str = "#d62728";
pub const LINK: &str = "#ff7f0e";
const DOT: &str = "#1f1f1f";

fn rgb(hex: &str) -> Rgb<u8> {
    let v = u32::from_str_radix(&hex[1..], 16).expect("color constants are hex");
    Rgb([(v >> 16) as u8, (v >> 8) as u8, v as u8])
}

/// One stroke of the overlay.
struct Stroke {
    points: Vec<Point2>,
    closed: bool,
    color: &'static str,
    class: &'static str,
}

fn strokes(poly: &RingPolygon) -> Vec<Stroke> {
    let v = poly.vertices();
    match poly.split_boundaries() {
        Ok((outer, inner)) => {
            let (l, n) = (outer.len(), v.len());
            vec![
                Stroke { points: outer.to_vec(), closed: false, color: OUTER, class: "outer" },
                Stroke { points: inner.to_vec(), closed: false, color: INNER, class: "inner" },
                Stroke { points: vec![v[l - 1], v[l]], closed: false, color: LINK, class: "bridge" },
                Stroke { points: vec![v[n - 1], v[0]], closed: false, color: LINK, class: "closure" },
            ]
        }
        _ => vec![Stroke { points: v.to_vec(), closed: true, color: OUTER, class: "outer" }],
    }
}

pub fn render_svg(doc: &AnnotationDocument, width: usize, height: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    for (i, poly) in doc.annotations.iter().enumerate() {
        let _ = writeln!(s, r#"  <g id="annotation-{i}" data-label="{}">"#, escape(poly.label()));
        for st in strokes(poly) {
            let pts: Vec<String> = st.points.iter().map(|p| format!("{},{}", p.x, p.y)).collect();
            let tag = if st.closed { "polygon" } else { "polyline" };
            let width = if matches!(st.class, "bridge" | "closure") { 3 } else { 2 };
            let dash = if matches!(st.class, "bridge" | "closure") { r#" stroke-dasharray="4 2""# } else { "" };
            let _ = writeln!(
                s,
                r#"    <{tag} class="{}" points="{}" fill="none" stroke="{}" stroke-width="{width}"{dash}/>"#,
                st.class,
                pts.join(" "),
                st.color
            );
        }
        for p in poly.vertices() {
            let _ = writeln!(s, r#"    <circle class="vertex" cx="{}" cy="{}" r="2" fill="{DOT}"/>"#, p.x, p.y);
        }
        let _ = writeln!(s, "  </g>");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('"', "&quot;")
}

pub fn render_png(doc: &AnnotationDocument, width: usize, height: usize) -> RgbImage {
    let mut img = RgbImage::from_pixel(width as u32, height as u32, Rgb([255, 255, 255]));
    for poly in &doc.annotations {
        for st in strokes(poly) {
            let color = rgb(st.color);
            let n = st.points.len();
            let segs = if st.closed { n } else { n.saturating_sub(1) };
            for k in 0..segs {
                let (a, b) = (st.points[k], st.points[(k + 1) % n]);
                draw_line_segment_mut(&mut img, (a.x as f32, a.y as f32), (b.x as f32, b.y as f32), color);
            }
        }
        for p in poly.vertices() {
            draw_filled_circle_mut(&mut img, (p.x.round() as i32, p.y.round() as i32), 2, rgb(DOT));
        }
    }
    img
}

pub fn run_render(
    annotation: &Path,
    size: Option<(usize, usize)>,
    output: &Path,
    png: Option<&Path>,
) -> Result<(), CliError> {
    let doc = read_annotations(annotation)?;
    if let Some(i) = doc.annotations.iter().position(|a| a.len() < 2) {
        return Err(CliError::Failed(format!("annotation {i} has fewer than two vertices")));
    }
    let (w, h) = size.unwrap_or((doc.image.width, doc.image.height));
    if w == 0 || h == 0 {
        return Err(CliError::Usage("canvas size must be positive; pass --size".into()));
    }
    write_file(output, render_svg(&doc, w, h))?;
    if let Some(path) = png {
        render_png(&doc, w, h)
            .save(path)
            .map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
