use std::path::PathBuf;

use ringaug::io::{list_annotation_files, read_annotations};
use ringaug::raster::{rasterize, topology};

use crate::augment::MANIFEST_NAME;
use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidateReport {
    pub files: usize,
    pub annotations: usize,
    pub invalid: usize,
    pub lines: Vec<String>,
}

/// Runs polygon validation and raster topology over files and directories.
/// Unreadable files count as one invalid entry each.
pub fn run_validate(paths: &[PathBuf]) -> Result<ValidateReport, CliError> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            files.extend(
                list_annotation_files(p)?
                    .into_iter()
                    .filter(|f| f.file_name().is_some_and(|n| n != MANIFEST_NAME)),
            );
        } else {
            files.push(p.clone());
        }
    }

    let mut report = ValidateReport::default();
    for file in files {
        report.files += 1;
        let doc = match read_annotations(&file) {
            Ok(d) => d,
            Err(e) => {
                report.invalid += 1;
                report.lines.push(format!("{}: {e}", file.display()));
                continue;
            }
        };
        for i in doc.out_of_bounds() {
            report.lines.push(format!("{}#{i}: warning: vertices outside the image frame", file.display()));
        }
        for (i, poly) in doc.annotations.iter().enumerate() {
            report.annotations += 1;
            let v = poly.validate();
            let t = topology(&rasterize(poly, doc.image.width, doc.image.height));
            let kind = if poly.is_ring() { "ring" } else { "simple" };
            let status = if v.is_valid() {
                "ok".to_string()
            } else {
                report.invalid += 1;
                v.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
            };
            report.lines.push(format!(
                "{}#{i} {} ({kind}, n={}): {status} [components={}, holes={}]",
                file.display(),
                poly.label(),
                poly.len(),
                t.components,
                t.holes
            ));
        }
    }
    Ok(report)
}
