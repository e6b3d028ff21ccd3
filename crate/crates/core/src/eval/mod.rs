//! Binary building IoU, benchmark splits, stratified reports and dataset
//! statistics.
//!
//! IoU is `TP / (TP + FP + FN)` over foreground pixels; two empty masks
//! agree vacuously and score 1. Reports pool pixel counts per stratum
//! (micro IoU) and also carry the per-tile mean.

mod report;
mod split;
mod stats;

use thiserror::Error;

use crate::image::Mask;

pub use report::{render_table, stratified_report, Aggregation, IoUReport, MaskPair, StratumScore};
pub use split::{split_benchmark, BenchmarkSplit};
pub use stats::{dataset_stats, tile_area_km2, DatasetStats, MaskCount};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("mask sizes differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("region `{region}` has {count} tiles; more than {k} are needed")]
    TooFewTiles { region: alloc::string::String, count: usize, k: usize },
    #[error("no mask pairs to evaluate")]
    NoPairs,
}

/// Pixel confusion counts for the foreground class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl Counts {
    pub fn from_masks(pred: &Mask, gt: &Mask) -> Result<Counts, EvalError> {
        if pred.dims() != gt.dims() {
            return Err(EvalError::DimensionMismatch(pred.width(), pred.height(), gt.width(), gt.height()));
        }
        let mut c = Counts::default();
        for (&p, &g) in pred.pixels().iter().zip(gt.pixels()) {
            match (p != 0, g != 0) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => {}
            }
        }
        Ok(c)
    }

    /// 1.0 when both masks are empty.
    pub fn iou(&self) -> f64 {
        let d = self.tp + self.fp + self.fn_;
        if d == 0 {
            1.0
        } else {
            self.tp as f64 / d as f64
        }
    }
}

impl core::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts { tp: self.tp + o.tp, fp: self.fp + o.fp, fn_: self.fn_ + o.fn_ }
    }
}

impl core::iter::Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), |a, b| a + b)
    }
}

pub fn iou(pred: &Mask, gt: &Mask) -> Result<f64, EvalError> {
    Counts::from_masks(pred, gt).map(|c| c.iou())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn mask(w: usize, h: usize, bits: &[bool]) -> Mask {
        Mask::from_fn(w, h, |c, r| bits[r * w + c])
    }

    #[test]
    fn basic_cases() {
        let full = Mask::from_fn(8, 8, |_, _| true);
        let left = Mask::from_fn(8, 8, |c, _| c < 4);
        let right = Mask::from_fn(8, 8, |c, _| c >= 4);
        let empty = Mask::filled(8, 8, 0);
        assert_eq!(iou(&full, &full).unwrap(), 1.0);
        assert_eq!(iou(&left, &right).unwrap(), 0.0);
        assert_eq!(iou(&left, &full).unwrap(), 0.5);
        assert_eq!(iou(&empty, &empty).unwrap(), 1.0);
        assert!(matches!(iou(&empty, &Mask::filled(4, 8, 0)), Err(EvalError::DimensionMismatch(..))));
    }

    proptest! {
        #[test]
        fn symmetric_and_monotone(bits in prop::collection::vec((any::<bool>(), any::<bool>()), 64)) {
            let a = mask(8, 8, &bits.iter().map(|b| b.0).collect::<Vec<_>>());
            let b = mask(8, 8, &bits.iter().map(|b| b.1).collect::<Vec<_>>());
            prop_assert_eq!(iou(&a, &b).unwrap(), iou(&b, &a).unwrap());
            // turning a false negative into a true positive never lowers IoU
            if let Some(k) = bits.iter().position(|&(p, g)| !p && g) {
                let mut a2 = a.clone();
                a2.set(k % 8, k / 8, 255);
                prop_assert!(iou(&a2, &b).unwrap() >= iou(&a, &b).unwrap());
            }
        }
    }
}
