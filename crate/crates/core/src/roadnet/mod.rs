//! Street networks and the city blocks they enclose.
//!
//! [`generate_roads`] builds a planar [`RoadGraph`] in one of three
//! topologies (or a district mix of them); [`extract_blocks`] walks the
//! interior faces of the planar subdivision and insets each by half the
//! width of its bounding roads.

mod faces;
mod mixed;
mod noise;
mod organic;
mod planar;
mod radial;
mod raster;
mod validate;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geom::{Extent, Rect, Vec2};
use crate::rng;

pub use faces::{extract_blocks, extract_blocks_detailed, planar_faces, BlockExtraction, Face, FaceSet};
pub use planar::find_crossing;
pub use validate::{validate_graph, ValidationReport};

/// Miter limit applied when insetting blocks.
pub const BLOCK_MITER_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Raster,
    Radial,
    Organic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedTopology {
    pub kind: TopologyKind,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Raster,
    Radial,
    Organic,
    /// Extent partitioned into rectangular districts, each drawing one
    /// topology by weight; districts are stitched with connector roads.
    Mixed(Vec<WeightedTopology>),
}

impl From<TopologyKind> for Topology {
    fn from(k: TopologyKind) -> Self {
        match k {
            TopologyKind::Raster => Topology::Raster,
            TopologyKind::Radial => Topology::Radial,
            TopologyKind::Organic => Topology::Organic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialParams {
    /// Ring count; `None` fits as many rings of `spacing_m` as the extent
    /// allows.
    #[serde(default)]
    pub rings: Option<u32>,
    #[serde(default = "default_spokes")]
    pub spokes: u32,
}

fn default_spokes() -> u32 {
    8
}

impl Default for RadialParams {
    fn default() -> Self {
        RadialParams { rings: None, spokes: default_spokes() }
    }
}

fn default_arterial() -> f64 {
    12.0
}

fn default_local() -> f64 {
    6.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadConfig {
    pub topology: Topology,
    pub extent: Extent,
    pub spacing_m: f64,
    #[serde(default)]
    pub jitter: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub radial: RadialParams,
    #[serde(default = "default_arterial")]
    pub arterial_width_m: f64,
    #[serde(default = "default_local")]
    pub local_width_m: f64,
    /// District side length for [`Topology::Mixed`]; defaults to half the
    /// longer extent side.
    #[serde(default)]
    pub district_m: Option<f64>,
}

impl RoadConfig {
    pub fn new(topology: Topology, extent: Extent, spacing_m: f64) -> Self {
        RoadConfig {
            topology,
            extent,
            spacing_m,
            jitter: 0.0,
            seed: 0,
            radial: RadialParams::default(),
            arterial_width_m: default_arterial(),
            local_width_m: default_local(),
            district_m: None,
        }
    }

    pub fn validate(&self) -> Result<(), RoadError> {
        let finite = |x: f64| x.is_finite();
        if !(finite(self.extent.width) && finite(self.extent.height))
            || self.extent.width <= 0.0
            || self.extent.height <= 0.0
        {
            return Err(RoadError::InvalidConfig("extent must be positive in both axes"));
        }
        if !finite(self.spacing_m) || self.spacing_m <= 0.0 {
            return Err(RoadError::InvalidConfig("spacing_m must be positive"));
        }
        if !(0.0..0.5).contains(&self.jitter) {
            return Err(RoadError::InvalidConfig("jitter must lie in [0, 0.5)"));
        }
        if !(self.arterial_width_m >= 0.0 && self.local_width_m >= 0.0) {
            return Err(RoadError::InvalidConfig("road widths must be non-negative"));
        }
        if self.radial.spokes < 3 {
            return Err(RoadError::InvalidConfig("radial topology needs at least 3 spokes"));
        }
        if let Some(d) = self.district_m {
            if !(d > 0.0) {
                return Err(RoadError::InvalidConfig("district_m must be positive"));
            }
        }
        if let Topology::Mixed(parts) = &self.topology {
            if parts.is_empty() {
                return Err(RoadError::InvalidConfig("mixed topology needs at least one entry"));
            }
            if parts.iter().any(|p| !(p.weight > 0.0) || !p.weight.is_finite()) {
                return Err(RoadError::InvalidConfig("mixed topology weights must be positive"));
            }
        }
        Ok(())
    }

    pub fn width_of(&self, class: RoadClass) -> f64 {
        match class {
            RoadClass::Arterial => self.arterial_width_m,
            RoadClass::Local => self.local_width_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoadClass {
    Arterial,
    Local,
}

impl RoadClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RoadClass::Arterial => "arterial",
            RoadClass::Local => "local",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoadEdge {
    pub a: usize,
    pub b: usize,
    pub width: f64,
    pub class: RoadClass,
}

/// Planar street graph; node coordinates in world meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadGraph {
    pub extent: Extent,
    pub nodes: Vec<Vec2>,
    pub edges: Vec<RoadEdge>,
}

impl RoadGraph {
    pub fn new(extent: Extent) -> Self {
        RoadGraph { extent, nodes: Vec::new(), edges: Vec::new() }
    }

    pub fn add_node(&mut self, p: Vec2) -> usize {
        self.nodes.push(p);
        self.nodes.len() - 1
    }

    /// Adds an undirected edge unless it is a loop or already present.
    pub fn add_edge(&mut self, a: usize, b: usize, width: f64, class: RoadClass) -> bool {
        if a == b || self.has_edge(a, b) {
            return false;
        }
        self.edges.push(RoadEdge { a, b, width, class });
        true
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    pub fn segment(&self, e: usize) -> (Vec2, Vec2) {
        let edge = &self.edges[e];
        (self.nodes[edge.a], self.nodes[edge.b])
    }

    pub fn degree(&self, n: usize) -> usize {
        self.edges.iter().filter(|e| e.a == n || e.b == n).count()
    }

    pub fn total_length(&self) -> f64 {
        (0..self.edges.len())
            .map(|e| {
                let (a, b) = self.segment(e);
                a.distance(b)
            })
            .sum()
    }

    /// Connected-component label per node (isolated nodes get their own).
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label = alloc::vec![usize::MAX; n];
        let mut count = 0;
        for i in 0..n {
            let r = find(&mut parent, i);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            label[i] = label[r];
        }
        (count, label)
    }

    /// Appends `other`, translating its nodes by `offset`.
    pub(crate) fn merge_translated(&mut self, other: &RoadGraph, offset: Vec2) {
        let base = self.nodes.len();
        self.nodes.extend(other.nodes.iter().map(|&p| p + offset));
        self.edges.extend(other.edges.iter().map(|e| RoadEdge { a: e.a + base, b: e.b + base, ..*e }));
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoadError {
    #[error("invalid road configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("extent {width}×{height} m cannot hold one {spacing} m spacing interval")]
    EmptyNetwork { width: f64, height: f64, spacing: f64 },
    #[error("edges {first} and {second} cross")]
    PlanarityViolation { first: usize, second: usize },
}

/// A city block: an interior face of the street graph, inset by half the
/// width of each bounding road.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CityBlock {
    /// Simple, counter-clockwise.
    pub boundary: Vec<Vec2>,
    pub area_m2: f64,
}

impl CityBlock {
    pub fn new(boundary: Vec<Vec2>) -> Self {
        let area_m2 = crate::geom::signed_area(&boundary);
        CityBlock { boundary, area_m2 }
    }

    pub fn bounds(&self) -> Rect {
        Rect::bounding(self.boundary.iter().copied()).unwrap_or(Rect::new(Vec2::ZERO, Vec2::ZERO))
    }
}

/// Builds a street network for `config`. Deterministic in the config,
/// including its seed.
pub fn generate_roads(config: &RoadConfig) -> Result<RoadGraph, RoadError> {
    config.validate()?;
    let mut r = rng::stream(config.seed, &[rng::tag::ROADS]);
    let graph = match &config.topology {
        Topology::Raster => raster::generate(config, &mut r)?,
        Topology::Radial => radial::generate(config, &mut r)?,
        Topology::Organic => organic::generate(config, &config.extent.rect(), &mut r)?,
        Topology::Mixed(parts) => mixed::generate(config, parts, &mut r)?,
    };
    if graph.edges.is_empty() {
        return Err(RoadError::EmptyNetwork {
            width: config.extent.width,
            height: config.extent.height,
            spacing: config.spacing_m,
        });
    }
    Ok(graph)
}
