use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::geom::{Extent, Rect, Vec2};
use crate::math;

/// Slack on grid-count divisions so that exact multiples such as
/// 171.6 / 85.8 are not lost to rounding.
const COUNT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepPolicy {
    /// Only tiles lying fully inside the extent.
    #[default]
    InteriorOnly,
    /// Enough tiles to cover the extent; edge tiles overhang it.
    ClippedCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub extent: Extent,
    pub tile_footprint_m: f64,
    /// Defaults to the footprint (no overlap).
    #[serde(default)]
    pub stride_m: Option<f64>,
    #[serde(default)]
    pub policy: SweepPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCenter {
    pub center: Vec2,
    pub row: usize,
    pub col: usize,
    /// The tile reaches past the extent.
    pub edge: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sweep {
    pub centers: Vec<SweepCenter>,
    pub rows: usize,
    pub cols: usize,
    pub warning: Option<String>,
}

impl SweepSpec {
    pub fn new(extent: Extent, tile_footprint_m: f64) -> Self {
        SweepSpec { extent, tile_footprint_m, stride_m: None, policy: SweepPolicy::InteriorOnly }
    }

    pub fn stride(&self) -> f64 {
        self.stride_m.unwrap_or(self.tile_footprint_m)
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if !(self.tile_footprint_m > 0.0 && self.tile_footprint_m.is_finite()) {
            return Err(DatasetError::InvalidSweep("tile footprint must be positive"));
        }
        if !(self.stride() > 0.0 && self.stride().is_finite()) {
            return Err(DatasetError::InvalidSweep("stride must be positive"));
        }
        if !(self.extent.width >= 0.0 && self.extent.height >= 0.0) {
            return Err(DatasetError::InvalidSweep("extent must be non-negative"));
        }
        Ok(())
    }

    fn count(&self, len: f64) -> usize {
        let (fp, stride) = (self.tile_footprint_m, self.stride());
        let span = (len - fp) / stride;
        match self.policy {
            SweepPolicy::InteriorOnly if len + COUNT_EPS * fp < fp => 0,
            SweepPolicy::InteriorOnly => math::floor(span.max(0.0) + COUNT_EPS) as usize + 1,
            SweepPolicy::ClippedCover if len <= 0.0 => 0,
            SweepPolicy::ClippedCover => math::ceil(span.max(0.0) - COUNT_EPS).max(0.0) as usize + 1,
        }
    }
}

/// Row-major grid of tile centers, south row first, west to east.
pub fn sweep(spec: &SweepSpec) -> Result<Sweep, DatasetError> {
    spec.validate()?;
    let rows = spec.count(spec.extent.height);
    let cols = spec.count(spec.extent.width);
    let (half, stride) = (0.5 * spec.tile_footprint_m, spec.stride());
    let mut out = Sweep { centers: Vec::with_capacity(rows * cols), rows, cols, warning: None };
    if rows == 0 || cols == 0 {
        out.rows = 0;
        out.cols = 0;
        out.warning = Some(alloc::format!(
            "extent {}x{} m is smaller than the {} m tile footprint; no tiles",
            spec.extent.width,
            spec.extent.height,
            spec.tile_footprint_m
        ));
        return Ok(out);
    }
    let world = spec.extent.rect();
    for row in 0..rows {
        for col in 0..cols {
            let center = Vec2::new(half + col as f64 * stride, half + row as f64 * stride);
            let b = Rect::centered(center, spec.tile_footprint_m);
            let slack = COUNT_EPS * spec.tile_footprint_m;
            let edge = b.max.x > world.max.x + slack || b.max.y > world.max.y + slack;
            out.centers.push(SweepCenter { center, row, col, edge });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(side: f64, fp: f64, stride: Option<f64>) -> SweepSpec {
        SweepSpec { stride_m: stride, ..SweepSpec::new(Extent::new(side, side), fp) }
    }

    #[test]
    fn one_kilometer_default_tiles() {
        let s = sweep(&spec(1000.0, 171.6, None)).unwrap();
        assert_eq!((s.rows, s.cols, s.centers.len()), (5, 5, 25));
        assert!(s.centers.iter().all(|c| !c.edge));
    }

    #[test]
    fn half_stride() {
        assert_eq!(sweep(&spec(343.2, 171.6, Some(85.8))).unwrap().centers.len(), 9);
    }

    #[test]
    fn too_small_extent_warns() {
        let s = sweep(&spec(100.0, 171.6, None)).unwrap();
        assert!(s.centers.is_empty());
        assert!(s.warning.is_some());
    }

    #[test]
    fn clipped_cover_reaches_the_far_edge() {
        let mut sp = spec(1000.0, 171.6, None);
        sp.policy = SweepPolicy::ClippedCover;
        let s = sweep(&sp).unwrap();
        assert_eq!((s.rows, s.cols), (6, 6));
        let last = s.centers.last().unwrap();
        assert!(last.edge && last.center.x + 85.8 >= 1000.0);
        assert_eq!(s.centers.iter().filter(|c| c.edge).count(), 11);
        sp.extent = Extent::new(100.0, 100.0);
        assert_eq!(sweep(&sp).unwrap().centers.len(), 1);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(sweep(&spec(100.0, 0.0, None)).is_err());
        assert!(sweep(&spec(100.0, 10.0, Some(-1.0))).is_err());
    }

    #[test]
    fn interior_tiles_tile_without_overlap() {
        let s = sweep(&spec(700.0, 171.6, None)).unwrap();
        let rects: Vec<Rect> = s.centers.iter().map(|c| Rect::centered(c.center, 171.6)).collect();
        for (i, a) in rects.iter().enumerate() {
            assert!(a.min.x >= -1e-9 && a.max.x <= 700.0 + 1e-9);
            for b in &rects[i + 1..] {
                assert!(a.overlap_area(b) < 1e-6);
            }
        }
        let covered: f64 = rects.iter().map(Rect::area).sum();
        let side = 4.0 * 171.6;
        assert!((covered - side * side).abs() < 1e-6);
    }
}
