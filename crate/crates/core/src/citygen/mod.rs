//! Lot subdivision, style presets and scene population.
//!
//! A world is built in four stages: street network, blocks, lots, and a
//! populated [`Scene`]. Every lot draws from its own random stream keyed by
//! the world seed and its lot id, so lots can be built in any order.

mod lots;
mod populate;
mod scene;
mod style;
mod world;


pub use lots::{subdivide_block, subdivide_with, SubdivideError, DEGENERATE_AREA_M2};
pub use populate::{
    assemble, build_lot, plan_lots, populate, road_corridors, tree_mesh, LotOutcome, LotPlan, CANOPY_RADIUS, ROAD_LIFT,
};
pub use scene::{Lot, LotFailure, ObjectKind, Scene, SceneObject, SkippedBlock};
pub use style::{StyleConfig, StyleError, PRESET_IDS, REQUIRED_KEYS};
pub use world::{build_world, build_world_timed, StageTimings, WorldConfig, WorldError};
