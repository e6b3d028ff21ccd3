use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::manifest::TileRecord;
use super::sweep::Sweep;
use crate::geom::Rect;
use crate::render::CameraSpec;
use crate::rng::{self, tag};

/// Style subset that worked best for training.
pub const DEFAULT_SUBSET: [&str; 6] = ["a", "b", "c", "g", "h", "i"];
/// Equal per-style split closest to 2,108 images over nine styles.
pub const TILES_PER_STYLE_ALL: usize = 234;
/// Equal per-style split closest to 1,640 images over the default subset.
pub const TILES_PER_STYLE_SUBSET: usize = 273;
/// Worlds tried per style before a pool gives up.
pub const MAX_POOL_WORLDS: u32 = 16;

/// Seed of the `attempt`-th world generated for style number `style_index`.
pub fn pool_world_seed(base_seed: u64, style_index: usize, attempt: u32) -> u64 {
    rng::derive_seed(base_seed, &[tag::POOL, style_index as u64, attempt as u64])
}

pub fn tile_id(style_id: &str, world_seed: u64, index: usize) -> String {
    format!("{style_id}-{world_seed:016x}-{index:05}")
}

/// One tile to render.
#[derive(Debug, Clone, PartialEq)]
pub struct TileJob {
    pub tile_id: String,
    pub camera: CameraSpec,
    pub edge: bool,
}

impl TileJob {
    pub fn record(&self, style_id: &str, world_seed: u64) -> TileRecord {
        TileRecord {
            tile_id: self.tile_id.clone(),
            rgb: format!("rgb/{}.png", self.tile_id),
            mask: format!("mask/{}.png", self.tile_id),
            style_id: style_id.into(),
            world_seed,
            bounds: self.bounds(),
            gsd_m: self.camera.gsd_m,
            image_px: self.camera.image_px,
        }
    }

    pub fn bounds(&self) -> Rect {
        self.camera.bounds()
    }
}

/// Jobs for the first `limit` centers of a sweep (all when `None`).
pub fn tile_jobs(
    sweep: &Sweep,
    camera: &CameraSpec,
    style_id: &str,
    world_seed: u64,
    limit: Option<usize>,
) -> Vec<TileJob> {
    sweep
        .centers
        .iter()
        .take(limit.unwrap_or(usize::MAX))
        .enumerate()
        .map(|(i, c)| TileJob { tile_id: tile_id(style_id, world_seed, i), camera: camera.at(c.center), edge: c.edge })
        .collect()
}
