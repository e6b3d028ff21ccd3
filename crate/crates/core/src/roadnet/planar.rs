use alloc::vec::Vec;

use super::RoadGraph;
use crate::geom::{segments_intersect, SegmentIntersection, Vec2};

/// Whether edges `e` and `f` meet anywhere other than at a shared endpoint.
pub(crate) fn edges_conflict(g: &RoadGraph, e: usize, f: usize) -> bool {
    let (ea, fa) = (&g.edges[e], &g.edges[f]);
    let shared = [ea.a, ea.b].iter().find(|n| **n == fa.a || **n == fa.b).copied();
    let (a0, a1) = g.segment(e);
    let (b0, b1) = g.segment(f);
    match segments_intersect(a0, a1, b0, b1) {
        SegmentIntersection::None => false,
        SegmentIntersection::Overlap => true,
        SegmentIntersection::Point { at, .. } => match shared {
            Some(n) => at != g.nodes[n],
            None => true,
        },
    }
}

/// First pair of edges (by index) violating planarity: a crossing, a
/// T-contact without a shared node, or a collinear overlap.
///
/// Sweep over edges sorted by their minimum x; only pairs whose x-ranges
/// overlap are tested exactly.
pub fn find_crossing(g: &RoadGraph) -> Option<(usize, usize)> {
    let spans: Vec<(f64, f64, f64, f64)> = (0..g.edges.len())
        .map(|e| {
            let (a, b) = g.segment(e);
            (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y))
        })
        .collect();
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.sort_by(|&a, &b| spans[a].0.total_cmp(&spans[b].0).then(a.cmp(&b)));
    let mut best: Option<(usize, usize)> = None;
    for (k, &e) in order.iter().enumerate() {
        for &f in &order[k + 1..] {
            if spans[f].0 > spans[e].1 {
                break;
            }
            if spans[f].2 > spans[e].3 || spans[e].2 > spans[f].3 {
                continue;
            }
            if edges_conflict(g, e, f) {
                let pair = (e.min(f), e.max(f));
                if best.is_none_or(|b| pair < b) {
                    best = Some(pair);
                }
            }
        }
    }
    best
}

/// Would the segment `p → q` (between nodes `pn` and `qn`, either of which
/// may be absent for a not-yet-inserted point) conflict with any existing
/// edge? Edges incident to the segment's own nodes are allowed to touch at
/// that node.
pub(super) fn segment_is_free(
    g: &RoadGraph,
    p: Vec2,
    pn: Option<usize>,
    q: Vec2,
    qn: Option<usize>,
    skip: Option<usize>,
) -> bool {
    for (e, edge) in g.edges.iter().enumerate() {
        if Some(e) == skip {
            continue;
        }
        let (a, b) = (g.nodes[edge.a], g.nodes[edge.b]);
        match segments_intersect(p, q, a, b) {
            SegmentIntersection::None => {}
            SegmentIntersection::Overlap => return false,
            SegmentIntersection::Point { at, .. } => {
                let ok_p = pn.is_some_and(|n| (edge.a == n || edge.b == n) && at == g.nodes[n]);
                let ok_q = qn.is_some_and(|n| (edge.a == n || edge.b == n) && at == g.nodes[n]);
                if !(ok_p || ok_q) {
                    return false;
                }
            }
        }
    }
    true
}
