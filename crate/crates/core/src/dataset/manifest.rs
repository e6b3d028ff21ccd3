use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::geom::Rect;
use crate::math;
use crate::rng::{self, tag};

/// Relative slack on `fraction · N` so that e.g. 0.29 · 100 keeps 29.
const FRACTION_EPS: f64 = 1e-9;

/// One exported tile. Paths are relative to the dataset directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileRecord {
    pub tile_id: String,
    pub rgb: String,
    pub mask: String,
    pub style_id: String,
    pub world_seed: u64,
    pub bounds: Rect,
    pub gsd_m: f64,
    pub image_px: u32,
}

/// First line of a manifest file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestHeader {
    pub dataset_id: String,
    /// Digest of the parameters that produced the dataset.
    pub params_hash: String,
    pub records: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub dataset_id: String,
    pub params_hash: String,
    pub records: Vec<TileRecord>,
}

impl DatasetManifest {
    pub fn new(dataset_id: impl Into<String>, params_hash: impl Into<String>, mut records: Vec<TileRecord>) -> Self {
        records.sort_by(|a, b| a.tile_id.cmp(&b.tile_id));
        DatasetManifest { dataset_id: dataset_id.into(), params_hash: params_hash.into(), records }
    }

    pub fn header(&self) -> ManifestHeader {
        ManifestHeader {
            dataset_id: self.dataset_id.clone(),
            params_hash: self.params_hash.clone(),
            records: self.records.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Unique tile ids; one gsd and image size across records.
    pub fn validate(&self) -> Result<(), DatasetError> {
        let mut seen = BTreeSet::new();
        for r in &self.records {
            if !seen.insert(r.tile_id.as_str()) {
                return Err(DatasetError::DuplicateTile(r.tile_id.clone()));
            }
        }
        if let Some(first) = self.records.first() {
            if let Some(r) = self.records.iter().find(|r| r.gsd_m != first.gsd_m || r.image_px != first.image_px) {
                return Err(DatasetError::MixedResolution(r.tile_id.clone()));
            }
        }
        Ok(())
    }

    /// Counts per style id, sorted by id.
    pub fn style_counts(&self) -> alloc::collections::BTreeMap<String, usize> {
        let mut m = alloc::collections::BTreeMap::new();
        for r in &self.records {
            *m.entry(r.style_id.clone()).or_insert(0) += 1;
        }
        m
    }
}

/// Number of records kept by [`subsample`].
pub fn subsample_count(n: usize, fraction: f64) -> usize {
    (math::floor(fraction * n as f64 * (1.0 + FRACTION_EPS)) as usize).min(n)
}

/// Keeps `⌊fraction · N⌋` records: a prefix of one seeded permutation, so
/// smaller fractions keep subsets of larger ones. Kept records stay in
/// manifest order.
pub fn subsample(manifest: &DatasetManifest, fraction: f64, seed: u64) -> Result<DatasetManifest, DatasetError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(DatasetError::InvalidFraction(fraction));
    }
    let n = manifest.len();
    let keep = subsample_count(n, fraction);
    if keep == 0 {
        return Err(DatasetError::EmptySubsample { records: n, fraction });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed, &[tag::SUBSAMPLE]));
    let mut kept = order[..keep].to_vec();
    kept.sort_unstable();
    Ok(DatasetManifest {
        dataset_id: format!("{}-sub{}-s{}", manifest.dataset_id, fraction, seed),
        params_hash: manifest.params_hash.clone(),
        records: kept.into_iter().map(|i| manifest.records[i].clone()).collect(),
    })
}

#[cfg(test)]
pub(crate) fn manifest_fixture(n: usize) -> DatasetManifest {
    use crate::geom::Vec2;
    let records = (0..n)
        .map(|i| TileRecord {
            tile_id: format!("a-1-{i:05}"),
            rgb: format!("rgb/a-1-{i:05}.png"),
            mask: format!("mask/a-1-{i:05}.png"),
            style_id: String::from(["a", "b", "c", "g", "h", "i"][i % 6]),
            world_seed: 1,
            bounds: Rect::new(Vec2::ZERO, Vec2::new(171.6, 171.6)),
            gsd_m: 0.3,
            image_px: 572,
        })
        .collect();
    DatasetManifest::new("test", "0", records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_and_half() {
        let m = manifest_fixture(1640);
        assert_eq!(subsample(&m, 1.0, 3).unwrap().records, m.records);
        assert_eq!(subsample(&m, 0.5, 3).unwrap().len(), 820);
        assert_eq!(subsample_count(100, 0.29), 29);
    }

    #[test]
    fn empty_and_invalid() {
        let m = manifest_fixture(3);
        assert!(matches!(subsample(&m, 0.2, 0), Err(DatasetError::EmptySubsample { .. })));
        assert!(matches!(subsample(&m, 0.0, 0), Err(DatasetError::InvalidFraction(_))));
        assert!(matches!(subsample(&m, 1.5, 0), Err(DatasetError::InvalidFraction(_))));
    }

    #[test]
    fn validation() {
        let mut m = manifest_fixture(4);
        assert!(m.validate().is_ok());
        m.records[1].gsd_m = 0.5;
        assert!(matches!(m.validate(), Err(DatasetError::MixedResolution(_))));
        let mut m = manifest_fixture(4);
        m.records[2].tile_id = m.records[0].tile_id.clone();
        assert!(matches!(m.validate(), Err(DatasetError::DuplicateTile(_))));
    }

    proptest! {
        #[test]
        fn nested_prefixes(n in 1usize..400, a in 0.01..1.0f64, b in 0.01..1.0f64, seed in any::<u64>()) {
            let m = manifest_fixture(n);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            match (subsample(&m, lo, seed), subsample(&m, hi, seed)) {
                (Ok(small), Ok(big)) => {
                    let ids: BTreeSet<_> = big.records.iter().map(|r| r.tile_id.clone()).collect();
                    prop_assert!(small.records.iter().all(|r| ids.contains(&r.tile_id)));
                    prop_assert_eq!(small.len(), subsample_count(n, lo));
                }
                (Err(_), _) => prop_assert_eq!(subsample_count(n, lo), 0),
                (Ok(_), Err(e)) => prop_assert!(false, "{e}"),
            }
        }
    }
}
