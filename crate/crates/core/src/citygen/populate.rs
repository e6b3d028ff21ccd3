use alloc::string::ToString;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::lots::subdivide_with;
use super::scene::{Lot, LotFailure, ObjectKind, Scene, SceneObject, SkippedBlock};
use super::style::StyleConfig;
use crate::geom::{
    clip_to_rect, inset_polygon, point_in_polygon, point_segment_distance, polygon_area, signed_area, Rect, Vec2,
};
use crate::grammar::{derive_with, DeriveContext, LabeledMesh, Material, SemanticClass};
use crate::rng::{self, tag};
use crate::roadnet::{CityBlock, RoadGraph, BLOCK_MITER_LIMIT};

/// Road surfaces sit this far above the ground plane.
pub const ROAD_LIFT: f64 = 0.05;
/// Canopy radius range in meters.
pub const CANOPY_RADIUS: (f64, f64) = (1.5, 4.0);
const TREE_SIDES: usize = 8;
const JUNCTION_SIDES: usize = 12;
const TREE_ATTEMPTS: usize = 30;

/// A lot ready to be built, independent of every other lot.
#[derive(Debug, Clone, PartialEq)]
pub struct LotPlan {
    pub id: usize,
    pub block: usize,
    /// Counter-clockwise.
    pub polygon: Vec<Vec2>,
    pub seed: u64,
}

/// What building one lot produced.
#[derive(Debug, Clone, PartialEq)]
pub struct LotOutcome {
    pub lot: Lot,
    pub building: Option<LabeledMesh>,
    pub trees: Vec<LabeledMesh>,
    pub failure: Option<LotFailure>,
}

/// Subdivides every block into lots with ids in block order. Degenerate
/// blocks are skipped and reported.
pub fn plan_lots(blocks: &[CityBlock], style: &StyleConfig, world_seed: u64) -> (Vec<LotPlan>, Vec<SkippedBlock>) {
    let mut plans = Vec::new();
    let mut skipped = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        let seed = rng::derive_seed(world_seed, &[tag::SUBDIVIDE, b as u64]);
        match subdivide_with(&block.boundary, style.min_lot_area_m2, style.split_range, seed) {
            Ok(lots) => {
                for mut polygon in lots {
                    if signed_area(&polygon) < 0.0 {
                        polygon.reverse();
                    }
                    let id = plans.len();
                    let seed = rng::derive_seed(world_seed, &[tag::LOT, id as u64]);
                    plans.push(LotPlan { id, block: b, polygon, seed });
                }
            }
            Err(e) => skipped.push(SkippedBlock { block: b, message: e.to_string() }),
        }
    }
    (plans, skipped)
}

/// Builds one lot. Depends only on the plan and the style, so lots may be
/// built in any order or concurrently.
pub fn build_lot(plan: &LotPlan, style: &StyleConfig) -> LotOutcome {
    let area_m2 = polygon_area(&plan.polygon);
    let mut lot = Lot {
        id: plan.id,
        block: plan.block,
        polygon: plan.polygon.clone(),
        area_m2,
        building_region: None,
        has_building: false,
        trees: 0,
    };
    let mut failure = None;
    let mut building = None;

    let mut decide = rng::stream(plan.seed, &[tag::LOT]);
    if decide.gen_bool(style.building_prob) {
        let offsets = alloc::vec![style.lot_setback_m; plan.polygon.len()];
        if let Some(region) = inset_polygon(&plan.polygon, &offsets, BLOCK_MITER_LIMIT) {
            let ctx = DeriveContext {
                palette: Some(&style.palette),
                wall: style.material("wall"),
                roof: style.material("roof"),
                ground: style.material(&style.ground_material),
                ..DeriveContext::default()
            };
            match derive_with(&region, &style.grammar, plan.seed, &ctx) {
                Ok(d) => {
                    lot.has_building = d.mesh.classes.iter().any(|c| c.is_building());
                    building = Some(d.mesh);
                }
                Err(e) => failure = Some(LotFailure { lot: plan.id, message: e.to_string() }),
            }
            lot.building_region = Some(region);
        }
    }

    let keep_out = if building.is_some() { lot.building_region.as_deref() } else { None };
    let trees = plant_trees(plan, style, keep_out);
    lot.trees = trees.len();
    LotOutcome { lot, building, trees, failure }
}

/// Assembles the scene: ground plane, road corridors, then per lot its
/// building followed by its trees.
pub fn assemble(
    roads: &RoadGraph,
    style: &StyleConfig,
    world_seed: u64,
    mut outcomes: Vec<LotOutcome>,
    skipped: Vec<SkippedBlock>,
) -> Scene {
    outcomes.sort_by_key(|o| o.lot.id);
    let mut scene = Scene::empty(roads.extent, &style.id, world_seed, style.material(&style.ground_material));
    scene.skipped_blocks = skipped;
    let road_mesh = road_corridors(roads, style.material(&style.road_material));
    if !road_mesh.is_empty() {
        scene.objects.push(SceneObject { kind: ObjectKind::Roads, mesh: road_mesh });
    }
    for o in outcomes {
        let id = o.lot.id;
        if let Some(mesh) = o.building.filter(|m| !m.is_empty()) {
            scene.objects.push(SceneObject { kind: ObjectKind::Building { lot: id }, mesh });
        }
        for mesh in o.trees {
            scene.objects.push(SceneObject { kind: ObjectKind::Tree { lot: id }, mesh });
        }
        scene.failures.extend(o.failure);
        scene.lots.push(o.lot);
    }
    scene
}

/// Populates `blocks` of the street network `roads` sequentially.
pub fn populate(blocks: &[CityBlock], roads: &RoadGraph, style: &StyleConfig, world_seed: u64) -> Scene {
    let (plans, skipped) = plan_lots(blocks, style, world_seed);
    let outcomes = plans.iter().map(|p| build_lot(p, style)).collect();
    assemble(roads, style, world_seed, outcomes, skipped)
}

/// Road surface: one quad per edge spanning its width, and a disk at every
/// junction, all clipped to the extent.
pub fn road_corridors(g: &RoadGraph, material: Material) -> LabeledMesh {
    let mut mesh = LabeledMesh::new();
    let bounds = g.extent.rect();
    for (e, edge) in g.edges.iter().enumerate() {
        let (a, b) = g.segment(e);
        let d = (b - a).normalized();
        if d == Vec2::ZERO || edge.width <= 0.0 {
            continue;
        }
        let n = d.perp() * (0.5 * edge.width);
        push_flat(
            &mut mesh,
            &clip_to_rect(&[a - n, b - n, b + n, a + n], &bounds),
            ROAD_LIFT,
            SemanticClass::Road,
            material,
        );
    }
    for (i, &p) in g.nodes.iter().enumerate() {
        let r = g.edges.iter().filter(|e| e.a == i || e.b == i).map(|e| 0.5 * e.width).fold(f64::INFINITY, f64::min);
        if r.is_finite() && r > 0.0 {
            push_flat(
                &mut mesh,
                &clip_to_rect(&circle(p, r, JUNCTION_SIDES), &bounds),
                ROAD_LIFT,
                SemanticClass::Road,
                material,
            );
        }
    }
    mesh
}

/// Fan-triangulates a convex counter-clockwise polygon at height `z`.
fn push_flat(mesh: &mut LabeledMesh, poly: &[Vec2], z: f64, class: SemanticClass, material: Material) {
    for k in 1..poly.len().saturating_sub(1) {
        mesh.push([poly[0].extend(z), poly[k].extend(z), poly[k + 1].extend(z)], class, material);
    }
}

fn circle(c: Vec2, r: f64, sides: usize) -> Vec<Vec2> {
    (0..sides).map(|k| c + Vec2::from_angle(core::f64::consts::TAU * k as f64 / sides as f64) * r).collect()
}

fn edge_distance(p: Vec2, poly: &[Vec2]) -> f64 {
    (0..poly.len())
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % poly.len()]))
        .fold(f64::INFINITY, f64::min)
}

/// Poisson-many trees, each fully inside the lot and clear of the building
/// region; a tree that finds no free spot within a few attempts is dropped.
fn plant_trees(plan: &LotPlan, style: &StyleConfig, keep_out: Option<&[Vec2]>) -> Vec<LabeledMesh> {
    let lambda = style.tree_density * polygon_area(&plan.polygon) / 1e4;
    let mut rng = rng::stream(plan.seed, &[tag::TREES]);
    let count = match Poisson::new(lambda) {
        Ok(p) => p.sample(&mut rng) as usize,
        Err(_) => 0,
    };
    let Some(bounds) = Rect::bounding(plan.polygon.iter().copied()) else {
        return Vec::new();
    };
    let canopy = style.material("canopy");
    let trunk = style.material("trunk");
    let mut placed: Vec<(Vec2, f64)> = Vec::new();
    let mut trees = Vec::new();
    for _ in 0..count {
        let r = rng.gen_range(CANOPY_RADIUS.0..=CANOPY_RADIUS.1);
        let trunk_h = rng.gen_range(1.5..3.0);
        let crown_h = r * rng.gen_range(1.6..2.4);
        for _ in 0..TREE_ATTEMPTS {
            let p = Vec2::new(rng.gen_range(bounds.min.x..=bounds.max.x), rng.gen_range(bounds.min.y..=bounds.max.y));
            let fits = point_in_polygon(p, &plan.polygon)
                && edge_distance(p, &plan.polygon) >= r
                && keep_out.is_none_or(|k| !point_in_polygon(p, k) && edge_distance(p, k) >= r)
                && placed.iter().all(|&(q, rq)| q.distance(p) >= 0.5 * (r + rq));
            if fits {
                placed.push((p, r));
                trees.push(tree_mesh(p, r, trunk_h, crown_h, canopy, trunk));
                break;
            }
        }
    }
    trees
}

/// Cylinder trunk under a cone crown with a closed disk base.
pub fn tree_mesh(
    at: Vec2,
    canopy_r: f64,
    trunk_h: f64,
    crown_h: f64,
    canopy: Material,
    trunk: Material,
) -> LabeledMesh {
    let mut m = LabeledMesh::new();
    let veg = SemanticClass::Vegetation;
    let ring = |r: f64| circle(at, r, TREE_SIDES);
    let tr = ring((0.12 * canopy_r).clamp(0.15, 0.4));
    let cr = ring(canopy_r);
    let apex = at.extend(trunk_h + crown_h);
    for i in 0..TREE_SIDES {
        let j = (i + 1) % TREE_SIDES;
        m.push_quad([tr[i].extend(0.0), tr[j].extend(0.0), tr[j].extend(trunk_h), tr[i].extend(trunk_h)], veg, trunk);
        m.push([cr[i].extend(trunk_h), cr[j].extend(trunk_h), apex], veg, canopy);
        m.push([at.extend(trunk_h), cr[j].extend(trunk_h), cr[i].extend(trunk_h)], veg, canopy);
    }
    m
}
