//! Tile sweeps, manifests, sampling and training-data plumbing.

mod batch;
mod manifest;
mod pool;
mod schedule;
mod sweep;

use alloc::string::String;
use thiserror::Error;

pub use batch::{mixed_batch_stream, Batch, BatchStream, MixedBatches};
pub use manifest::{subsample, subsample_count, DatasetManifest, ManifestHeader, TileRecord};
pub use pool::{
    pool_world_seed, tile_id, tile_jobs, TileJob, DEFAULT_SUBSET, MAX_POOL_WORLDS, TILES_PER_STYLE_ALL,
    TILES_PER_STYLE_SUBSET,
};
pub use schedule::{
    training_schedule, Model, Stage, StageData, TrainingSchedule, FINETUNE_ITERATIONS, FINETUNE_LR, LR_DROP_FACTOR,
    LR_DROP_ITERATION, STAGE1_ITERATIONS,
};
pub use sweep::{sweep, Sweep, SweepCenter, SweepPolicy, SweepSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("invalid sweep: {0}")]
    InvalidSweep(&'static str),
    #[error("fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
    #[error("keeping {fraction} of {records} records leaves none")]
    EmptySubsample { records: usize, fraction: f64 },
    #[error("duplicate tile id `{0}`")]
    DuplicateTile(String),
    #[error("tile `{0}` differs in gsd or image size from the rest of the manifest")]
    MixedResolution(String),
    #[error("batch of {batch_size} cannot hold {real} real + {synth} synthetic ids")]
    BatchComposition { batch_size: usize, real: usize, synth: usize },
    #[error("id pools are empty")]
    EmptyPool,
    #[error("pools hold {real} real / {synth} synthetic ids; a batch needs {need_real} / {need_synth}")]
    PoolTooSmall { real: usize, synth: usize, need_real: usize, need_synth: usize },
}

#[cfg(test)]
pub(crate) use manifest::manifest_fixture;
