//! Face walks of the planar street graph.
//!
//! Half-edge `2e` runs `a → b` of edge `e`, `2e + 1` runs back. The
//! successor of `u → v` is the half-edge leaving `v` immediately clockwise
//! from `v → u`, so each walk keeps its face on the left: interior faces
//! come out counter-clockwise and each component's unbounded face comes out
//! clockwise (or with zero area for a tree).

use alloc::vec;
use alloc::vec::Vec;

use super::planar::find_crossing;
use super::{CityBlock, RoadError, RoadGraph, BLOCK_MITER_LIMIT};
use crate::geom::{inset_polygon, signed_area, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    /// Half-edge ids in walk order.
    pub half_edges: Vec<usize>,
    /// Origin node of each half-edge.
    pub nodes: Vec<usize>,
    pub signed_area: f64,
    pub component: usize,
}

impl Face {
    pub fn polygon(&self, g: &RoadGraph) -> Vec<Vec2> {
        self.nodes.iter().map(|&n| g.nodes[n]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceSet {
    pub interior: Vec<Face>,
    /// One unbounded face per connected component that has edges.
    pub outer: Vec<Face>,
    pub components: usize,
}

/// All face walks of a planar graph.
pub fn planar_faces(g: &RoadGraph) -> Result<FaceSet, RoadError> {
    if let Some((first, second)) = find_crossing(g) {
        return Err(RoadError::PlanarityViolation { first, second });
    }
    let n = g.nodes.len();
    let h = 2 * g.edges.len();
    let origin = |he: usize| if he.is_multiple_of(2) { g.edges[he / 2].a } else { g.edges[he / 2].b };
    let target = |he: usize| origin(he ^ 1);

    // outgoing half-edges per node, counter-clockwise by angle
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for he in 0..h {
        out[origin(he)].push(he);
    }
    let angle = |he: usize| (g.nodes[target(he)] - g.nodes[origin(he)]).angle();
    let mut slot = vec![0usize; h];
    for list in out.iter_mut() {
        list.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)).then(a.cmp(&b)));
        for (k, &he) in list.iter().enumerate() {
            slot[he] = k;
        }
    }
    let next = |he: usize| {
        let twin = he ^ 1;
        let v = origin(twin);
        let list = &out[v];
        list[(slot[twin] + list.len() - 1) % list.len()]
    };

    let (components, label) = g.components();
    let mut seen = vec![false; h];
    let mut walks: Vec<Face> = Vec::new();
    for start in 0..h {
        if seen[start] {
            continue;
        }
        let mut half_edges = Vec::new();
        let mut he = start;
        loop {
            seen[he] = true;
            half_edges.push(he);
            he = next(he);
            if he == start {
                break;
            }
        }
        let nodes: Vec<usize> = half_edges.iter().map(|&e| origin(e)).collect();
        let poly: Vec<Vec2> = nodes.iter().map(|&k| g.nodes[k]).collect();
        walks.push(Face { signed_area: signed_area(&poly), component: label[nodes[0]], half_edges, nodes });
    }

    // per component, the walk of least signed area is the unbounded face
    let mut outer_idx: Vec<Option<usize>> = vec![None; components];
    for (k, w) in walks.iter().enumerate() {
        let slot = &mut outer_idx[w.component];
        if slot.is_none_or(|o| w.signed_area < walks[o].signed_area) {
            *slot = Some(k);
        }
    }
    let mut interior = Vec::new();
    let mut outer = Vec::new();
    for (k, w) in walks.into_iter().enumerate() {
        if outer_idx[w.component] == Some(k) {
            outer.push(w);
        } else {
            interior.push(w);
        }
    }
    Ok(FaceSet { interior, outer, components })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockExtraction {
    pub blocks: Vec<CityBlock>,
    /// Interior faces before insetting.
    pub face_count: usize,
    /// Faces whose inset collapsed and were dropped.
    pub dropped: usize,
}

/// City blocks: interior faces inset by half the width of each bounding
/// road. Faces whose inset collapses are dropped.
pub fn extract_blocks(g: &RoadGraph) -> Result<Vec<CityBlock>, RoadError> {
    extract_blocks_detailed(g).map(|x| x.blocks)
}

pub fn extract_blocks_detailed(g: &RoadGraph) -> Result<BlockExtraction, RoadError> {
    let faces = planar_faces(g)?;
    let mut blocks = Vec::with_capacity(faces.interior.len());
    let mut dropped = 0;
    for f in &faces.interior {
        let poly = f.polygon(g);
        let offsets: Vec<f64> = f.half_edges.iter().map(|&he| 0.5 * g.edges[he / 2].width).collect();
        match inset_polygon(&poly, &offsets, BLOCK_MITER_LIMIT) {
            Some(ring) => blocks.push(CityBlock::new(ring)),
            None => dropped += 1,
        }
    }
    Ok(BlockExtraction { blocks, face_count: faces.interior.len(), dropped })
}

#[cfg(test)]
mod tests {
    use super::super::{generate_roads, RoadClass, RoadConfig, Topology};
    use super::*;
    use crate::geom::{point_in_polygon, Extent};

    fn square_loop(side: f64, width: f64) -> RoadGraph {
        let mut g = RoadGraph::new(Extent::new(side, side));
        for (x, y) in [(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)] {
            g.add_node(Vec2::new(x, y));
        }
        for i in 0..4 {
            g.add_edge(i, (i + 1) % 4, width, RoadClass::Local);
        }
        g
    }

    #[test]
    fn single_loop_one_block() {
        let blocks = extract_blocks(&square_loop(100.0, 0.0)).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].area_m2, 10_000.0);
    }

    #[test]
    fn loop_with_width_is_inset() {
        let blocks = extract_blocks(&square_loop(100.0, 6.0)).unwrap();
        assert_eq!(blocks.len(), 1);
        assert!((blocks[0].area_m2 - 94.0 * 94.0).abs() < 1e-9);
    }

    #[test]
    fn lattice_nine_blocks() {
        let cfg = RoadConfig::new(Topology::Raster, Extent::new(900.0, 900.0), 300.0);
        let g = generate_roads(&cfg).unwrap();
        let faces = planar_faces(&g).unwrap();
        // Euler: F = E - V + 2 = 10 including the outer face
        assert_eq!(faces.interior.len() + faces.outer.len(), 24 - 16 + 2);
        assert_eq!(extract_blocks(&g).unwrap().len(), 9);
    }

    #[test]
    fn tree_has_no_blocks() {
        let mut g = RoadGraph::new(Extent::new(100.0, 100.0));
        for (x, y) in [(50.0, 50.0), (90.0, 50.0), (10.0, 50.0), (50.0, 90.0), (50.0, 10.0), (90.0, 90.0)] {
            g.add_node(Vec2::new(x, y));
        }
        for (a, b) in [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5)] {
            g.add_edge(a, b, 6.0, RoadClass::Local);
        }
        assert!(extract_blocks(&g).unwrap().is_empty());
        let f = planar_faces(&g).unwrap();
        assert_eq!(f.outer.len(), 1);
        assert_eq!(f.outer[0].signed_area, 0.0);
    }

    #[test]
    fn crossing_input_is_rejected() {
        let mut g = RoadGraph::new(Extent::new(10.0, 10.0));
        for (x, y) in [(0.0, 0.0), (10.0, 10.0), (0.0, 10.0), (10.0, 0.0)] {
            g.add_node(Vec2::new(x, y));
        }
        g.add_edge(0, 1, 6.0, RoadClass::Local);
        g.add_edge(2, 3, 6.0, RoadClass::Local);
        assert_eq!(extract_blocks(&g), Err(RoadError::PlanarityViolation { first: 0, second: 1 }));
    }

    #[test]
    fn blocks_are_ccw_and_disjoint() {
        let mut cfg = RoadConfig::new(Topology::Raster, Extent::new(600.0, 400.0), 100.0);
        cfg.jitter = 0.3;
        cfg.seed = 5;
        let g = generate_roads(&cfg).unwrap();
        let blocks = extract_blocks(&g).unwrap();
        assert_eq!(blocks.len(), 24);
        for b in &blocks {
            assert!(b.area_m2 > 0.0);
        }
        // sample centroids: each lies in exactly one block
        for b in &blocks {
            let c = b.boundary.iter().fold(Vec2::ZERO, |a, &p| a + p) * (1.0 / b.boundary.len() as f64);
            let n = blocks.iter().filter(|o| point_in_polygon(c, &o.boundary)).count();
            assert_eq!(n, 1);
        }
    }
}
