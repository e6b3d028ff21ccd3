//! Multi-style pools with an equal number of tiles per style.

use std::fs;
use std::path::Path;

use log::info;
use synthcity_core::citygen::WorldConfig;
use synthcity_core::dataset::{pool_world_seed, sweep, tile_jobs, DatasetManifest, MAX_POOL_WORLDS};

use crate::config::PoolPlan;
use crate::error::CliError;
use crate::export::{build_scene, finish_manifest, write_tiles};

pub fn pool_dataset_id(base_seed: u64) -> String {
    format!("pool-{base_seed:016x}")
}

/// Generates worlds per style until `tiles_per_style` tiles are exported,
/// trying at most [`MAX_POOL_WORLDS`] seeds per style.
pub fn make_style_pool(
    plan: &PoolPlan,
    out_dir: &Path,
    workers: &rayon::ThreadPool,
) -> Result<DatasetManifest, CliError> {
    fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let sw = sweep(&plan.sweep)?;
    if sw.centers.is_empty() {
        return Err(CliError::Operation(format!(
            "the sweep yields no tiles: {}",
            sw.warning.as_deref().unwrap_or("extent smaller than a tile")
        )));
    }
    let mut records = Vec::new();
    let abort = |records: &[_], e: CliError| {
        finish_cleanup(out_dir, records);
        e
    };
    for (si, style) in plan.styles.iter().enumerate() {
        let mut have = 0;
        let mut attempt = 0;
        while have < plan.tiles_per_style {
            if attempt == MAX_POOL_WORLDS {
                let e = CliError::Operation(format!(
                    "style `{}` produced {have} of {} tiles in {MAX_POOL_WORLDS} worlds",
                    style.id, plan.tiles_per_style
                ));
                return Err(abort(&records, e));
            }
            let seed = pool_world_seed(plan.base_seed, si, attempt);
            attempt += 1;
            let world = WorldConfig::new(plan.roads.clone(), style.clone(), seed);
            let scene = match build_scene(&world, workers) {
                Ok((scene, _)) => scene,
                Err(e) => {
                    info!("style {} seed {seed:016x}: {e}; trying the next seed", style.id);
                    continue;
                }
            };
            let jobs = tile_jobs(&sw, &plan.camera, &scene.style_id, seed, Some(plan.tiles_per_style - have));
            let written = write_tiles(&scene, &jobs, out_dir, workers).map_err(|e| abort(&records, e))?;
            have += written.len();
            records.extend(written);
        }
        info!("style {}: {have} tiles from {attempt} world(s)", style.id);
    }
    let manifest = DatasetManifest::new(pool_dataset_id(plan.base_seed), plan.params_hash.clone(), records);
    finish_manifest(out_dir, &manifest)?;
    Ok(manifest)
}

fn finish_cleanup(out_dir: &Path, records: &[synthcity_core::dataset::TileRecord]) {
    for r in records {
        let _ = fs::remove_file(out_dir.join(&r.rgb));
        let _ = fs::remove_file(out_dir.join(&r.mask));
    }
}
