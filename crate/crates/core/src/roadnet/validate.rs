use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::faces::planar_faces;
use super::planar::find_crossing;
use super::RoadGraph;

/// Diagnostic summary of a street graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    /// First offending edge pair, if any.
    pub crossing: Option<(usize, usize)>,
    pub components: usize,
    pub duplicate_edges: Vec<(usize, usize)>,
    pub zero_length_edges: Vec<usize>,
    pub nodes_outside_extent: Vec<usize>,
    /// Interior faces; `None` when the graph is not planar.
    pub interior_faces: Option<usize>,
    /// `V − E + (F + 1) = 2` holds on every component.
    pub euler_ok: bool,
}

impl ValidationReport {
    pub fn planar(&self) -> bool {
        self.crossing.is_none()
    }

    pub fn connected(&self) -> bool {
        self.components <= 1
    }

    /// Every check passes.
    pub fn all_pass(&self) -> bool {
        self.planar()
            && self.connected()
            && self.duplicate_edges.is_empty()
            && self.zero_length_edges.is_empty()
            && self.nodes_outside_extent.is_empty()
            && self.euler_ok
    }
}

pub fn validate_graph(g: &RoadGraph) -> ValidationReport {
    let mut duplicate_edges = Vec::new();
    for i in 0..g.edges.len() {
        for j in (i + 1)..g.edges.len() {
            let (a, b) = (&g.edges[i], &g.edges[j]);
            if (a.a == b.a && a.b == b.b) || (a.a == b.b && a.b == b.a) {
                duplicate_edges.push((i, j));
            }
        }
    }
    let zero_length_edges = (0..g.edges.len())
        .filter(|&e| {
            let (a, b) = g.segment(e);
            a == b
        })
        .collect();
    let nodes_outside_extent = (0..g.nodes.len()).filter(|&n| !g.extent.contains(g.nodes[n], 1e-9)).collect();
    let crossing = find_crossing(g);
    let (components, label) = g.components();

    let (interior_faces, euler_ok) = match planar_faces(g) {
        Ok(faces) => {
            let mut v = alloc::vec![0i64; components];
            let mut e = alloc::vec![0i64; components];
            let mut f = alloc::vec![1i64; components];
            for &l in &label {
                v[l] += 1;
            }
            for edge in &g.edges {
                e[label[edge.a]] += 1;
            }
            for face in &faces.interior {
                f[face.component] += 1;
            }
            let ok = (0..components).all(|c| v[c] - e[c] + f[c] == 2);
            (Some(faces.interior.len()), ok)
        }
        Err(_) => (None, false),
    };

    ValidationReport {
        vertices: g.nodes.len(),
        edges: g.edges.len(),
        crossing,
        components,
        duplicate_edges,
        zero_length_edges,
        nodes_outside_extent,
        interior_faces,
        euler_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{generate_roads, RoadClass, RoadConfig, RoadEdge, Topology};
    use super::*;
    use crate::geom::{Extent, Vec2};

    #[test]
    fn lattice_all_pass() {
        let cfg = RoadConfig::new(Topology::Raster, Extent::new(900.0, 900.0), 300.0);
        let r = validate_graph(&generate_roads(&cfg).unwrap());
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.interior_faces, Some(9));
        assert_eq!(r.vertices as i64 - r.edges as i64 + (9 + 1), 2);
    }

    #[test]
    fn crossing_pair_named() {
        let mut g = RoadGraph::new(Extent::new(10.0, 10.0));
        for (x, y) in [(0.0, 0.0), (10.0, 10.0), (0.0, 10.0), (10.0, 0.0)] {
            g.add_node(Vec2::new(x, y));
        }
        g.add_edge(0, 1, 6.0, RoadClass::Local);
        g.add_edge(2, 3, 6.0, RoadClass::Local);
        let r = validate_graph(&g);
        assert_eq!(r.crossing, Some((0, 1)));
        assert!(!r.all_pass());
        assert!(!r.euler_ok);
    }

    #[test]
    fn duplicates_and_zero_length() {
        let mut g = RoadGraph::new(Extent::new(10.0, 10.0));
        g.add_node(Vec2::new(1.0, 1.0));
        g.add_node(Vec2::new(2.0, 1.0));
        g.add_node(Vec2::new(2.0, 1.0));
        // bypass add_edge's duplicate guard
        g.edges.push(RoadEdge { a: 0, b: 1, width: 6.0, class: RoadClass::Local });
        g.edges.push(RoadEdge { a: 1, b: 0, width: 6.0, class: RoadClass::Local });
        g.edges.push(RoadEdge { a: 1, b: 2, width: 6.0, class: RoadClass::Local });
        let r = validate_graph(&g);
        assert_eq!(r.duplicate_edges, alloc::vec![(0, 1)]);
        assert_eq!(r.zero_length_edges, alloc::vec![2]);
    }
}
