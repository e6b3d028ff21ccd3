use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetManifest, TileRecord};

/// Foreground and total pixels of one mask, or `None` if it could not be
/// read.
pub type MaskCount = Option<(u64, u64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub tiles: usize,
    pub area_km2: f64,
    /// Over readable masks; `None` when there are none.
    pub building_fraction: Option<f64>,
    pub per_style: BTreeMap<String, usize>,
    /// Tiles whose masks could not be read.
    pub unreadable: Vec<String>,
}

/// Ground area of one tile in square kilometers.
pub fn tile_area_km2(r: &TileRecord) -> f64 {
    let side = r.image_px as f64 * r.gsd_m;
    side * side / 1e6
}

/// Statistics of a manifest; `mask_counts` yields one entry per record,
/// in order.
pub fn dataset_stats(manifest: &DatasetManifest, mask_counts: impl IntoIterator<Item = MaskCount>) -> DatasetStats {
    let mut fg = 0u64;
    let mut total = 0u64;
    let mut unreadable = Vec::new();
    for (r, c) in manifest.records.iter().zip(mask_counts) {
        match c {
            Some((f, t)) => {
                fg += f;
                total += t;
            }
            None => unreadable.push(r.tile_id.clone()),
        }
    }
    DatasetStats {
        tiles: manifest.len(),
        area_km2: manifest.records.iter().map(tile_area_km2).sum(),
        building_fraction: (total > 0).then(|| fg as f64 / total as f64),
        per_style: manifest.style_counts(),
        unreadable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::subsample;

    #[test]
    fn empty_manifest() {
        let m = DatasetManifest::new("e", "0", Vec::new());
        let s = dataset_stats(&m, []);
        assert_eq!((s.tiles, s.area_km2, s.building_fraction), (0, 0.0, None));
    }

    #[test]
    fn default_tile_area() {
        let m = crate::dataset::manifest_fixture(1640);
        let one = subsample(&m, 1.0 / 1640.0, 0).unwrap();
        let s = dataset_stats(&one, [Some((10, 40))]);
        assert!((s.area_km2 - 0.02944656).abs() < 1e-12);
        assert_eq!(s.building_fraction, Some(0.25));
        let all = dataset_stats(&m, core::iter::repeat_n(None, 1640));
        assert!((all.area_km2 - 1640.0 * 0.02944656).abs() < 1e-9);
        assert!((all.area_km2 - 48.29).abs() < 0.005);
        assert!((all.area_km2 - 47.0).abs() / 47.0 < 0.05);
        assert_eq!(all.unreadable.len(), 1640);
        assert_eq!(all.per_style.values().copied().collect::<Vec<_>>(), [274, 274, 273, 273, 273, 273]);
    }
}
