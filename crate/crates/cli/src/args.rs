use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringaug::io::{AnnotationFormat, DegeneratePolicy};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ringaug", version, about = "Order-preserving augmentation for ring polygon annotations")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Augment every annotation file in a directory.
    Augment(AugmentArgs),
    /// Score augmented annotations against their originals.
    Cap(CapArgs),
    /// Check polygon invariants and raster topology.
    Validate(ValidateArgs),
    /// Draw an annotation file as SVG (and optionally PNG).
    Render(RenderArgs),
    /// Time repair on synthetic survivor sequences.
    Bench(BenchArgs),
}

/// Which pipeline produces the augmented polygons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    /// Mask-space transform, projection, clipping and order-preserving repair.
    #[default]
    Repaired,
    /// Transform vertices and drop those that leave the frame.
    Naive,
    /// Re-trace contours of the warped mask.
    Reextract,
}

fn parse_format(s: &str) -> Result<AnnotationFormat, String> {
    s.parse().map_err(|e: ringaug::Error| e.to_string())
}

fn parse_policy(s: &str) -> Result<DegeneratePolicy, String> {
    s.parse().map_err(|e: ringaug::Error| e.to_string())
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    let dim = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    let (w, h) = (dim(w)?, dim(h)?);
    if w == 0 || h == 0 {
        return Err("size must be positive".into());
    }
    Ok((w, h))
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Directory of annotation files (*.json).
    pub input: PathBuf,
    /// Output directory; created if missing.
    pub output: PathBuf,
    /// JSON pipeline config; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed for every per-sample stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples per image.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output format: native, coco-single-chain or labelme.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<AnnotationFormat>,
    /// Snapping tolerance in pixels.
    #[arg(long)]
    pub tol: Option<f64>,
    /// What to do with annotations left with fewer than 3 vertices: skip or keep.
    #[arg(long, value_parser = parse_policy)]
    pub degenerate: Option<DegeneratePolicy>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Pipeline::Repaired)]
    pub pipeline: Pipeline,
    /// Also write each warped mask as PGM.
    #[arg(long)]
    pub dump_masks: bool,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Directory holding the original annotation files.
    pub original: PathBuf,
    /// Directory holding augmented files and their manifest.
    pub augmented: PathBuf,
    /// Defaults to AUGMENTED/manifest.json.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Report directory; defaults to AUGMENTED.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Matching tolerance in pixels; defaults to the manifest's.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Exit non-zero when any entry cannot be paired.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Annotation files or directories.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub annotation: PathBuf,
    /// Canvas size as WIDTHxHEIGHT; defaults to the document's image size.
    #[arg(long, value_parser = parse_size)]
    pub size: Option<(usize, usize)>,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also rasterize the overlay to this PNG.
    #[arg(long)]
    pub png: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Survivor counts, ascending.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
    pub sizes: Vec<usize>,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}
