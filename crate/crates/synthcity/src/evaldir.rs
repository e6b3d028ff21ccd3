//! Scoring a directory of predicted masks against ground truth.
//!
//! `pred/` and `gt/` must hold the same set of PNG file names. A file's
//! stratum is the leading run of letters in its name, so `austin3.png`
//! and `austin12.png` both count towards `austin`. Any nonzero pixel is
//! foreground.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use synthcity_core::eval::MaskPair;

use crate::error::CliError;
use crate::imageio;

/// Name used for files without a leading letter run.
pub const DEFAULT_STRATUM: &str = "all";

pub fn stratum_of(file_name: &str) -> String {
    let stem = file_name.rsplit_once('.').map_or(file_name, |(s, _)| s);
    let prefix: String = stem.chars().take_while(|c| c.is_alphabetic()).collect();
    if prefix.is_empty() {
        DEFAULT_STRATUM.into()
    } else {
        prefix
    }
}

fn png_names(dir: &Path) -> Result<BTreeSet<String>, CliError> {
    let entries = fs::read_dir(dir).map_err(CliError::io(dir))?;
    let mut names = BTreeSet::new();
    for e in entries {
        let e = e.map_err(CliError::io(dir))?;
        let name = e.file_name().to_string_lossy().into_owned();
        if name.to_ascii_lowercase().ends_with(".png") && e.path().is_file() {
            names.insert(name);
        }
    }
    Ok(names)
}

/// Loads all pairs, sorted by file name.
pub fn load_pairs(pred_dir: &Path, gt_dir: &Path, workers: &rayon::ThreadPool) -> Result<Vec<MaskPair>, CliError> {
    let pred = png_names(pred_dir)?;
    let gt = png_names(gt_dir)?;
    if let Some(missing) = gt.difference(&pred).next() {
        return Err(CliError::format(pred_dir.join(missing), "prediction missing for ground-truth mask"));
    }
    if let Some(extra) = pred.difference(&gt).next() {
        return Err(CliError::format(gt_dir.join(extra), "ground truth missing for prediction"));
    }
    let names: Vec<String> = gt.into_iter().collect();
    workers.install(|| {
        names
            .par_iter()
            .map(|n| {
                Ok(MaskPair {
                    pred: imageio::read_mask(&pred_dir.join(n))?,
                    gt: imageio::read_mask(&gt_dir.join(n))?,
                    stratum: stratum_of(n),
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strata_from_names() {
        assert_eq!(stratum_of("austin12.png"), "austin");
        assert_eq!(stratum_of("tyrol-w3.png"), "tyrol");
        assert_eq!(stratum_of("0001.png"), DEFAULT_STRATUM);
        assert_eq!(stratum_of("kitsap"), "kitsap");
    }
}
