//! Command implementations behind the `ringaug` binary.

pub mod args;
pub mod augment;
pub mod bench;
pub mod cap;
pub mod render;
pub mod validate;

use std::path::Path;

use args::{Cli, Command};
use ringaug::io::{load_config, PipelineConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] ringaug::Error),
    /// The command ran to completion but some inputs failed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 1 for usage errors, 2 for anything wrong with the data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| {
        CliError::Data(ringaug::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn pipeline_config(a: &args::AugmentArgs) -> Result<PipelineConfig, CliError> {
    let mut cfg = match &a.config {
        Some(path) => load_config(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(k) = a.samples {
        cfg.samples_per_image = k;
    }
    if let Some(f) = a.format {
        cfg.output_format = f;
    }
    if let Some(t) = a.tol {
        cfg.tol = t;
    }
    if let Some(d) = a.degenerate {
        cfg.degenerate = d;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Augment(a) => {
            let opts = augment::AugmentOptions {
                config: pipeline_config(&a)?,
                input: a.input,
                output: a.output,
                jobs: a.jobs,
                pipeline: a.pipeline,
                dump_masks: a.dump_masks,
            };
            let manifest = augment::run_augment(&opts)?;
            println!(
                "{} samples from {} files written to {}",
                manifest.samples.len(),
                manifest.files,
                opts.output.display()
            );
            augment::check_failures(&manifest)
        }
        Command::Cap(a) => {
            let report = cap::run_cap(&cap::CapOptions {
                original: a.original,
                augmented: a.augmented,
                manifest: a.manifest,
                out: a.out,
                match_tol: a.tol,
            })?;
            print!("{}", report.summary_text());
            if a.strict && !report.unpaired.is_empty() {
                return Err(CliError::Failed(format!("{} unpaired entries", report.unpaired.len())));
            }
            Ok(())
        }
        Command::Validate(a) => {
            let report = validate::run_validate(&a.paths)?;
            for line in &report.lines {
                println!("{line}");
            }
            println!(
                "{} annotations in {} files, {} invalid",
                report.annotations, report.files, report.invalid
            );
            if report.invalid > 0 {
                return Err(CliError::Failed(format!("{} invalid annotations", report.invalid)));
            }
            Ok(())
        }
        Command::Render(a) => render::run_render(&a.annotation, a.size, &a.output, a.png.as_deref()),
        Command::Bench(a) => {
            let report = bench::run_bench(&a.sizes)?;
            if a.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.table());
            }
            Ok(())
        }
    }
}
