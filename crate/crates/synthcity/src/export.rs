//! Rendering swept tiles to disk and the end-to-end `generate` run.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;
use synthcity_core::citygen::{build_lot, build_world_timed, Scene, StageTimings};
use synthcity_core::dataset::{sweep, tile_jobs, DatasetManifest, TileJob, TileRecord};
use synthcity_core::render::Tile;

use crate::config::GeneratePlan;
use crate::error::CliError;
use crate::{imageio, manifest_io};

pub const RGB_DIR: &str = "rgb";
pub const MASK_DIR: &str = "mask";
pub const REPORT_FILE: &str = "report.json";
pub const SCENE_FILE: &str = "scene.obj";

fn prepare_dirs(out_dir: &Path) -> Result<(), CliError> {
    for d in [RGB_DIR, MASK_DIR] {
        let p = out_dir.join(d);
        fs::create_dir_all(&p).map_err(CliError::io(p))?;
    }
    Ok(())
}

fn remove_outputs(out_dir: &Path, records: &[TileRecord]) {
    for r in records {
        let _ = fs::remove_file(out_dir.join(&r.rgb));
        let _ = fs::remove_file(out_dir.join(&r.mask));
    }
    let _ = fs::remove_file(out_dir.join(manifest_io::MANIFEST_FILE));
}

/// Renders and writes every job in parallel on `workers`. On failure the
/// files of all jobs are removed again.
pub fn write_tiles(
    scene: &Scene,
    jobs: &[TileJob],
    out_dir: &Path,
    workers: &rayon::ThreadPool,
) -> Result<Vec<TileRecord>, CliError> {
    prepare_dirs(out_dir)?;
    let records: Vec<TileRecord> = jobs.iter().map(|j| j.record(&scene.style_id, scene.world_seed)).collect();
    let result = workers.install(|| {
        jobs.par_iter().zip(&records).try_for_each(|(job, rec)| {
            let tile = Tile::render(scene, &job.camera);
            imageio::write_rgb(&out_dir.join(&rec.rgb), &tile.rgb)?;
            imageio::write_mask(&out_dir.join(&rec.mask), &tile.mask)
        })
    });
    match result {
        Ok(()) => Ok(records),
        Err(e) => {
            remove_outputs(out_dir, &records);
            Err(e)
        }
    }
}

/// Writes `manifest.jsonl`; on failure removes the tile files it lists.
pub fn finish_manifest(out_dir: &Path, manifest: &DatasetManifest) -> Result<(), CliError> {
    let check = manifest.validate().map_err(CliError::from);
    let written = check.and_then(|_| manifest_io::write(&out_dir.join(manifest_io::MANIFEST_FILE), manifest));
    if written.is_err() {
        remove_outputs(out_dir, &manifest.records);
    }
    written
}

/// Renders `jobs` of one scene and writes the tiles plus a manifest.
pub fn export_tiles(
    scene: &Scene,
    jobs: &[TileJob],
    out_dir: &Path,
    dataset_id: &str,
    params_hash: &str,
    workers: &rayon::ThreadPool,
) -> Result<DatasetManifest, CliError> {
    let records = write_tiles(scene, jobs, out_dir, workers)?;
    let manifest = DatasetManifest::new(dataset_id, params_hash, records);
    finish_manifest(out_dir, &manifest)?;
    Ok(manifest)
}

/// Checks that every record's files exist, decode at the declared size
/// and that masks are binary.
pub fn verify_dataset(out_dir: &Path, manifest: &DatasetManifest) -> Result<(), CliError> {
    manifest.validate()?;
    for r in &manifest.records {
        let n = r.image_px as usize;
        let rgb_path = out_dir.join(&r.rgb);
        let rgb = imageio::read_rgb(&rgb_path)?;
        if rgb.dims() != (n, n) {
            return Err(CliError::format(rgb_path, format!("expected {n}x{n} pixels")));
        }
        let mask_path = out_dir.join(&r.mask);
        let mask = imageio::read_mask(&mask_path)?;
        if mask.dims() != (n, n) {
            return Err(CliError::format(mask_path, format!("expected {n}x{n} pixels")));
        }
        mask.check_binary().map_err(|e| CliError::format(&mask_path, e))?;
    }
    Ok(())
}

/// Scene construction with lots built in parallel on `workers`.
pub fn build_scene(
    world: &synthcity_core::citygen::WorldConfig,
    workers: &rayon::ThreadPool,
) -> Result<(Scene, StageTimings), CliError> {
    let start = Instant::now();
    let mut clock = || start.elapsed().as_secs_f64();
    let mut lots = |plans: &[synthcity_core::citygen::LotPlan], style: &synthcity_core::citygen::StyleConfig| {
        workers.install(|| plans.par_iter().map(|p| build_lot(p, style)).collect())
    };
    build_world_timed(world, &mut clock, &mut lots).map_err(|e| CliError::Operation(format!("world generation: {e}")))
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub dataset_id: String,
    pub params_hash: String,
    pub stages: StageTimings,
    pub sweep_s: f64,
    pub export_s: f64,
    pub total_s: f64,
    pub world_km2: f64,
    pub km2_per_minute: f64,
    pub tiles: usize,
    pub tile_area_km2: f64,
    pub buildings: usize,
    pub triangles: usize,
    pub lot_failures: usize,
    pub skipped_blocks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_warning: Option<String>,
}

pub fn dataset_id(style_id: &str, seed: u64) -> String {
    format!("{style_id}-{seed:016x}")
}

/// Build the world, sweep it, export the tiles and write `report.json`.
pub fn run_generate(plan: &GeneratePlan, out_dir: &Path, workers: &rayon::ThreadPool) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let (scene, stages) = build_scene(&plan.world, workers)?;
    info!("world built in {:.2}s: {} buildings", stages.total_s(), scene.building_count());

    let t = Instant::now();
    let sw = sweep(&plan.sweep)?;
    if let Some(w) = &sw.warning {
        warn!("{w}");
    }
    let jobs = tile_jobs(&sw, &plan.camera, &scene.style_id, scene.world_seed, None);
    let sweep_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let id = dataset_id(&scene.style_id, scene.world_seed);
    fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let manifest = export_tiles(&scene, &jobs, out_dir, &id, &plan.params_hash, workers)?;
    if plan.export_obj {
        let p = out_dir.join(SCENE_FILE);
        fs::write(&p, scene.to_obj()).map_err(CliError::io(p))?;
    }
    let export_s = t.elapsed().as_secs_f64();
    info!("exported {} tiles in {:.2}s", manifest.len(), export_s);

    let total_s = start.elapsed().as_secs_f64();
    let world_km2 = scene.extent.area() / 1e6;
    let report = RunReport {
        dataset_id: id,
        params_hash: plan.params_hash.clone(),
        stages,
        sweep_s,
        export_s,
        total_s,
        world_km2,
        km2_per_minute: if total_s > 0.0 { world_km2 / (total_s / 60.0) } else { f64::INFINITY },
        tiles: manifest.len(),
        tile_area_km2: manifest.records.iter().map(synthcity_core::eval::tile_area_km2).sum(),
        buildings: scene.building_count(),
        triangles: scene.triangle_count(),
        lot_failures: scene.failures.len(),
        skipped_blocks: scene.skipped_blocks.len(),
        sweep_warning: sw.warning,
    };
    write_json(&out_dir.join(REPORT_FILE), &report)?;
    Ok(report)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    fs::write(path, text).map_err(CliError::io(path))
}

pub fn out_dir_or(flag: Option<PathBuf>, configured: Option<PathBuf>, base: &Path) -> Result<PathBuf, CliError> {
    match (flag, configured) {
        (Some(p), _) => Ok(p),
        (None, Some(p)) if p.is_relative() => Ok(base.join(p)),
        (None, Some(p)) => Ok(p),
        (None, None) => Err(CliError::Usage("no output directory: pass --out or set output.dir".into())),
    }
}
