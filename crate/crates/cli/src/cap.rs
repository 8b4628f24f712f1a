use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use ringaug::io::read_annotations;
use ringaug::metrics::{match_indices, mean_cap, score, CapField, CapReport};
use ringaug::transform::AugmentationKind;
use ringaug::Point2;

use crate::augment::{AnnotationStatus, Manifest, MANIFEST_NAME};
use crate::{write_file, CliError};

#[derive(Debug, Clone)]
pub struct CapOptions {
    pub original: PathBuf,
    pub augmented: PathBuf,
    pub manifest: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub match_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapRow {
    pub source: String,
    pub output: String,
    pub sample_index: usize,
    pub source_index: usize,
    pub label: String,
    pub kind: AugmentationKind,
    #[serde(flatten)]
    pub report: CapReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Means {
    pub count: usize,
    pub cap_strict: Option<f64>,
    pub cap_order: Option<f64>,
}

impl Means {
    fn of(reports: &[CapReport]) -> Self {
        Self {
            count: reports.len(),
            cap_strict: mean_cap(reports, CapField::Strict).ok(),
            cap_order: mean_cap(reports, CapField::Order).ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapSummary {
    pub overall: Means,
    pub per_label: BTreeMap<String, Means>,
    /// Annotations the augmenter dropped as degenerate.
    pub skipped: usize,
    pub unpaired: Vec<String>,
    pub rows: Vec<CapRow>,
}

fn fmt_mean(v: Option<f64>) -> String {
    v.map_or("n/a".to_string(), |x| format!("{x:.4}"))
}

impl CapSummary {
    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "overall: {} pairs, mean cap_strict {}, mean cap_order {}",
            self.overall.count,
            fmt_mean(self.overall.cap_strict),
            fmt_mean(self.overall.cap_order)
        );
        for (label, m) in &self.per_label {
            let _ = writeln!(
                s,
                "  {label}: {} pairs, cap_strict {}, cap_order {}",
                m.count,
                fmt_mean(m.cap_strict),
                fmt_mean(m.cap_order)
            );
        }
        if self.skipped > 0 {
            let _ = writeln!(s, "skipped (degenerate): {}", self.skipped);
        }
        for u in &self.unpaired {
            let _ = writeln!(s, "unpaired: {u}");
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("source,output,sample_index,source_index,label,kind,n,m,unmatched,cap_strict,cap_order\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                csv_field(&r.source),
                csv_field(&r.output),
                r.sample_index,
                r.source_index,
                csv_field(&r.label),
                serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                r.report.n,
                r.report.m,
                r.report.unmatched_new_vertices,
                r.report.cap_strict,
                r.report.cap_order
            );
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Pairs every augmented annotation with its source via the manifest, scores
/// both CAP variants, and writes `cap_report.json` and `cap_report.csv`.
pub fn run_cap(opts: &CapOptions) -> Result<CapSummary, CliError> {
    let manifest_path = opts
        .manifest
        .clone()
        .unwrap_or_else(|| opts.augmented.join(MANIFEST_NAME));
    let text = std::fs::read_to_string(&manifest_path).map_err(|e| ringaug::Error::Io {
        path: manifest_path.clone(),
        source: e,
    })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| ringaug::Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let tol = opts.match_tol.unwrap_or(manifest.config.match_tol);

    let mut rows = Vec::new();
    let mut unpaired = Vec::new();
    let mut skipped = 0;
    for s in &manifest.samples {
        let original = match read_annotations(opts.original.join(&s.source)) {
            Ok(d) => d,
            Err(e) => {
                unpaired.push(format!("{}: {e}", s.source));
                continue;
            }
        };
        let augmented = match read_annotations(opts.augmented.join(&s.output)) {
            Ok(d) => d,
            Err(e) => {
                unpaired.push(format!("{}: {e}", s.output));
                continue;
            }
        };
        for a in &s.annotations {
            let tag = format!("{}#{} -> {}", s.source, a.source_index, s.output);
            if a.status == AnnotationStatus::DegenerateSkipped {
                skipped += 1;
                continue;
            }
            let Some(orig) = original.annotations.get(a.source_index) else {
                unpaired.push(format!("{tag}: no such source annotation"));
                continue;
            };
            let mut points: Vec<Point2> = Vec::new();
            let mut missing = false;
            for &k in &a.output_indices {
                match augmented.annotations.get(k) {
                    Some(p) => points.extend_from_slice(p.vertices()),
                    None => missing = true,
                }
            }
            if missing || a.output_indices.is_empty() {
                unpaired.push(format!("{tag}: augmented annotation missing"));
                continue;
            }
            let m = match_indices(orig, &s.plan, &points, tol);
            match score(orig.len(), &m.seq, m.unmatched) {
                Ok(report) => rows.push(CapRow {
                    source: s.source.clone(),
                    output: s.output.clone(),
                    sample_index: s.sample_index,
                    source_index: a.source_index,
                    label: a.label.clone(),
                    kind: s.kind,
                    report,
                }),
                Err(e) => unpaired.push(format!("{tag}: {e}")),
            }
        }
    }

    let all: Vec<CapReport> = rows.iter().map(|r| r.report).collect();
    let mut by_label: BTreeMap<String, Vec<CapReport>> = BTreeMap::new();
    for r in &rows {
        by_label.entry(r.label.clone()).or_default().push(r.report);
    }
    let summary = CapSummary {
        overall: Means::of(&all),
        per_label: by_label.iter().map(|(k, v)| (k.clone(), Means::of(v))).collect(),
        skipped,
        unpaired,
        rows,
    };

    let out = opts.out.clone().unwrap_or_else(|| opts.augmented.clone());
    let mut json = serde_json::to_string_pretty(&summary).expect("report serializes");
    json.push('\n');
    write_file(&out.join("cap_report.json"), json)?;
    write_file(&out.join("cap_report.csv"), summary.to_csv())?;
    Ok(summary)
}
