use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ringaug::baselines::{mask_contour_reextract, naive_vertex_transform};
use ringaug::io::{
    list_annotation_files, read_annotations, write_annotations, AnnotationDocument, DegeneratePolicy, ImageRef,
    PipelineConfig,
};
use ringaug::raster::rasterize;
use ringaug::repair::ChainEntry;
use ringaug::transform::{derive_seed, sample, warp_mask, AffinePlan, AugmentationKind};
use ringaug::{augment_polygon, RingPolygon};

use crate::args::Pipeline;
use crate::{write_file, CliError};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone)]
pub struct AugmentOptions {
    pub input: PathBuf,
    pub output: PathBuf,
    pub config: PipelineConfig,
    pub jobs: Option<usize>,
    pub pipeline: Pipeline,
    pub dump_masks: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationStatus {
    Ok,
    DegenerateSkipped,
    DegenerateKept,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    /// 0-based position in the source document.
    pub source_index: usize,
    /// 0-based positions in the output document; several for fragmented
    /// re-extraction output, none when skipped.
    pub output_indices: Vec<usize>,
    pub label: String,
    pub n: usize,
    /// Surviving original vertices.
    pub m: usize,
    /// Clip vertices added by repair.
    pub clips: usize,
    pub status: AnnotationStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    /// Source file name relative to the input directory.
    pub source: String,
    pub output: String,
    pub sample_index: usize,
    pub seed: u64,
    pub kind: AugmentationKind,
    pub plan: AffinePlan,
    pub annotations: Vec<AnnotationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileFailure {
    pub file: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub pipeline: Pipeline,
    pub config: PipelineConfig,
    pub files: usize,
    pub samples: Vec<SampleRecord>,
    pub failures: Vec<FileFailure>,
}

pub fn check_failures(manifest: &Manifest) -> Result<(), CliError> {
    if manifest.failures.is_empty() {
        return Ok(());
    }
    for f in &manifest.failures {
        eprintln!("{}: {}", f.file, f.error);
    }
    Err(CliError::Failed(format!("{} files failed", manifest.failures.len())))
}

fn sample_name(stem: &str, s: usize) -> String {
    format!("{stem}_aug{s}")
}

/// Runs every (file, sample) unit on a pool of `opts.jobs` threads and
/// writes the manifest after all units finish. Output bytes do not depend on
/// the thread count.
pub fn run_augment(opts: &AugmentOptions) -> Result<Manifest, CliError> {
    opts.config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let files: Vec<PathBuf> = list_annotation_files(&opts.input)?
        .into_iter()
        .filter(|p| p.file_name().is_some_and(|n| n != MANIFEST_NAME))
        .collect();
    std::fs::create_dir_all(&opts.output).map_err(|e| ringaug::Error::Io {
        path: opts.output.clone(),
        source: e,
    })?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;

    let results: Vec<Result<Vec<SampleRecord>, FileFailure>> =
        pool.install(|| files.par_iter().map(|f| process_file(opts, f)).collect());

    let mut manifest = Manifest {
        seed: opts.config.seed,
        pipeline: opts.pipeline,
        config: opts.config.clone(),
        files: files.len(),
        samples: Vec::new(),
        failures: Vec::new(),
    };
    for r in results {
        match r {
            Ok(samples) => manifest.samples.extend(samples),
            Err(f) => manifest.failures.push(f),
        }
    }
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_file(&opts.output.join(MANIFEST_NAME), text)?;
    Ok(manifest)
}

fn process_file(opts: &AugmentOptions, path: &Path) -> Result<Vec<SampleRecord>, FileFailure> {
    let rel = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let fail = |e: &dyn std::fmt::Display| FileFailure {
        file: rel.clone(),
        error: e.to_string(),
    };
    let doc = read_annotations(path).map_err(|e| fail(&e))?;
    if doc.image.width == 0 || doc.image.height == 0 {
        return Err(fail(&"image size must be positive"));
    }
    if !doc.out_of_bounds().is_empty() {
        warn!("{rel}: annotations {:?} leave the image frame", doc.out_of_bounds());
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let cfg = &opts.config;
    (0..cfg.samples_per_image)
        .map(|s| {
            let seed = derive_seed(cfg.seed, &rel, s as u64);
            let pick = derive_seed(seed, "augmentation", 0) as usize % cfg.augmentations.len();
            let spec = &cfg.augmentations[pick];
            let plan = sample(spec, doc.image.width, doc.image.height, seed).map_err(|e| fail(&e))?;
            let name = sample_name(&stem, s);
            let (out_doc, records) = augment_document(opts, &doc, &plan, &name).map_err(|e| fail(&e))?;
            let out_name = format!("{name}.json");
            write_annotations(&out_doc, opts.output.join(&out_name), cfg.output_format).map_err(|e| fail(&e))?;
            info!("{rel} sample {s}: {:?}", spec.kind);
            Ok(SampleRecord {
                source: rel.clone(),
                output: out_name,
                sample_index: s,
                seed,
                kind: spec.kind,
                plan,
                annotations: records,
            })
        })
        .collect()
}

fn augment_document(
    opts: &AugmentOptions,
    doc: &AnnotationDocument,
    plan: &AffinePlan,
    name: &str,
) -> ringaug::Result<(AnnotationDocument, Vec<AnnotationRecord>)> {
    let cfg = &opts.config;
    let ext = Path::new(&doc.image.path)
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    let mut out = AnnotationDocument::new(
        ImageRef {
            path: format!("{name}{ext}"),
            width: plan.out_width,
            height: plan.out_height,
        },
        Vec::new(),
    );
    out.format = cfg.output_format;
    let mut records = Vec::with_capacity(doc.annotations.len());

    for (i, poly) in doc.annotations.iter().enumerate() {
        let mut rec = AnnotationRecord {
            source_index: i,
            output_indices: Vec::new(),
            label: poly.label().to_string(),
            n: poly.len(),
            m: 0,
            clips: 0,
            status: AnnotationStatus::Ok,
            note: None,
        };
        let mut emitted: Vec<RingPolygon> = Vec::new();
        let mask = match opts.pipeline {
            Pipeline::Repaired => {
                let outcome = augment_polygon(poly, plan, cfg.tol)?;
                rec.m = outcome.survivors.len();
                match &outcome.repaired {
                    Ok(r) => {
                        rec.clips = r
                            .entries()
                            .iter()
                            .filter(|e| matches!(e, ChainEntry::Clip { .. }))
                            .count();
                        emitted.push(r.to_polygon(poly.label())?);
                    }
                    Err(e) => {
                        rec.note = Some(e.to_string());
                        let kept: Vec<_> = outcome.survivors.survivors().iter().map(|v| v.position).collect();
                        degenerate(cfg.degenerate, &mut rec, kept, poly.label(), &mut emitted)?;
                    }
                }
                opts.dump_masks.then_some(outcome.warped)
            }
            Pipeline::Naive => {
                let kept = naive_vertex_transform(poly, plan);
                rec.m = kept.len();
                if kept.len() >= 3 {
                    emitted.push(RingPolygon::new(kept, None, poly.label())?);
                } else {
                    rec.note = Some(format!("{} vertices left the frame", poly.len() - kept.len()));
                    degenerate(cfg.degenerate, &mut rec, kept, poly.label(), &mut emitted)?;
                }
                None
            }
            Pipeline::Reextract => {
                for chain in mask_contour_reextract(poly, plan)? {
                    if chain.len() >= 3 {
                        emitted.push(RingPolygon::new(chain, None, poly.label())?);
                    }
                }
                rec.m = emitted.iter().map(RingPolygon::len).sum();
                if emitted.is_empty() {
                    rec.status = AnnotationStatus::DegenerateSkipped;
                }
                None
            }
        };
        if opts.dump_masks {
            let mask = match mask {
                Some(m) => m,
                None => warp_mask(&rasterize(poly, plan.in_width, plan.in_height), plan)?,
            };
            mask.write_pgm(opts.output.join(format!("{name}_mask{i}.pgm")))?;
        }
        for p in emitted {
            rec.output_indices.push(out.annotations.len());
            out.annotations.push(p);
        }
        records.push(rec);
    }
    Ok((out, records))
}

fn degenerate(
    policy: DegeneratePolicy,
    rec: &mut AnnotationRecord,
    kept: Vec<ringaug::Point2>,
    label: &str,
    emitted: &mut Vec<RingPolygon>,
) -> ringaug::Result<()> {
    match policy {
        DegeneratePolicy::Keep if !kept.is_empty() => {
            warn!("annotation {} kept with only {} vertices", rec.source_index, kept.len());
            rec.status = AnnotationStatus::DegenerateKept;
            emitted.push(RingPolygon::new(kept, None, label)?);
        }
        _ => rec.status = AnnotationStatus::DegenerateSkipped,
    }
    Ok(())
}
