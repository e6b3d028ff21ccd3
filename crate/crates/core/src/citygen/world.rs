use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::populate::{assemble, build_lot, plan_lots, LotOutcome, LotPlan};
use super::scene::Scene;
use super::style::{StyleConfig, StyleError};
use crate::rng::{self, tag};
use crate::roadnet::{extract_blocks_detailed, generate_roads, RoadConfig, RoadError};

#[derive(Debug, Clone, PartialEq)]
pub struct WorldConfig {
    /// Street network settings; its own seed is replaced by one derived
    /// from `seed`.
    pub roads: RoadConfig,
    pub style: StyleConfig,
    pub seed: u64,
}

impl WorldConfig {
    pub fn new(roads: RoadConfig, style: StyleConfig, seed: u64) -> Self {
        WorldConfig { roads, style, seed }
    }

    /// The road configuration actually used.
    pub fn road_config(&self) -> RoadConfig {
        RoadConfig { seed: rng::derive_seed(self.seed, &[tag::ROADS]), ..self.roads.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error(transparent)]
    Roads(#[from] RoadError),
    #[error(transparent)]
    Style(#[from] StyleError),
}

/// Seconds spent in each stage of [`build_world`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageTimings {
    pub roads_s: f64,
    pub blocks_s: f64,
    pub subdivide_s: f64,
    pub populate_s: f64,
}

impl StageTimings {
    pub fn total_s(&self) -> f64 {
        self.roads_s + self.blocks_s + self.subdivide_s + self.populate_s
    }
}

/// Roads, blocks, lots and the populated scene for one configuration.
pub fn build_world(config: &WorldConfig) -> Result<Scene, WorldError> {
    build_world_timed(config, &mut || 0.0, &mut |plans, style| plans.iter().map(|p| build_lot(p, style)).collect())
        .map(|(scene, _)| scene)
}

/// Like [`build_world`], reading `clock` (seconds) between stages and
/// building lots through `build_lots`, which must return one outcome per
/// plan in any order.
pub fn build_world_timed(
    config: &WorldConfig,
    clock: &mut dyn FnMut() -> f64,
    build_lots: &mut dyn FnMut(&[LotPlan], &StyleConfig) -> Vec<LotOutcome>,
) -> Result<(Scene, StageTimings), WorldError> {
    config.style.validate()?;
    let mut t = StageTimings::default();
    let t0 = clock();
    let graph = generate_roads(&config.road_config())?;
    let t1 = clock();
    t.roads_s = t1 - t0;
    let blocks = extract_blocks_detailed(&graph)?.blocks;
    let t2 = clock();
    t.blocks_s = t2 - t1;
    let (plans, skipped) = plan_lots(&blocks, &config.style, config.seed);
    let t3 = clock();
    t.subdivide_s = t3 - t2;
    let outcomes = build_lots(&plans, &config.style);
    let scene = assemble(&graph, &config.style, config.seed, outcomes, skipped);
    t.populate_s = clock() - t3;
    Ok((scene, t))
}
