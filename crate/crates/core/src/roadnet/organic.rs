//! Incremental, noise-steered street growth.
//!
//! Growth fronts extend by roughly one spacing per step. A proposed segment
//! is cut at the first edge it would cross, and its endpoint snaps to any
//! node or edge within `spacing / 4`. Proposals that would cross an edge,
//! pass too close to an unrelated node or meet another street at less than
//! [`MIN_ANGLE_DEG`] are discarded, so the graph is planar after every step.

use alloc::collections::VecDeque;
use core::f64::consts::PI;

use rand::{Rng, RngCore};

use super::noise::ValueNoise;
use super::planar::segment_is_free;
use super::{RoadClass, RoadConfig, RoadError, RoadGraph};
use crate::geom::{point_segment_distance, segments_intersect, Rect, SegmentIntersection, Vec2};
use crate::math;
use crate::rng::Stream;

const MIN_ANGLE_DEG: f64 = 30.0;
const CONTINUE_P: f64 = 0.9;
const BRANCH_P: f64 = 0.3;

#[derive(Debug, Clone, Copy)]
struct Front {
    node: usize,
    heading: f64,
    class: RoadClass,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Fresh(Vec2),
    Node(usize),
    Split { edge: usize, at: Vec2 },
}

struct Grower<'a> {
    cfg: &'a RoadConfig,
    region: Rect,
    g: RoadGraph,
    snap: f64,
    clearance: f64,
    min_len: f64,
    cos_min_angle: f64,
}

pub(super) fn generate(cfg: &RoadConfig, region: &Rect, rng: &mut Stream) -> Result<RoadGraph, RoadError> {
    let s = cfg.spacing_m;
    if region.width() < s || region.height() < s {
        return Err(RoadError::EmptyNetwork { width: region.width(), height: region.height(), spacing: s });
    }
    let mut gr = Grower {
        cfg,
        region: *region,
        g: RoadGraph::new(cfg.extent),
        snap: s / 4.0,
        clearance: s / 8.0,
        min_len: s / 4.0,
        cos_min_angle: math::cos(math::to_radians(MIN_ANGLE_DEG)),
    };
    let budget = math::ceil(region.area() / (s * s) * 1.25) as usize + 4;
    let noise = ValueNoise::new(rng.next_u64(), 3.0 * s);

    let c = Vec2::new((region.min.x + region.max.x) * 0.5, (region.min.y + region.max.y) * 0.5);
    let start = c + Vec2::new(rng.gen_range(-0.25..0.25) * s, rng.gen_range(-0.25..0.25) * s);
    let root = gr.g.add_node(start);
    let h0 = rng.gen_range(0.0..2.0 * PI);
    let mut fronts: VecDeque<Front> =
        (0..4).map(|k| Front { node: root, heading: h0 + k as f64 * PI * 0.5, class: RoadClass::Arterial }).collect();

    let mut steps = 0usize;
    while let Some(f) = fronts.pop_front() {
        steps += 1;
        if gr.g.nodes.len() >= budget || steps > 50 * budget {
            break;
        }
        let p = gr.g.nodes[f.node];
        let steer = noise.sample(p.x, p.y) * (PI / 4.0);
        let heading = f.heading + 0.35 * steer + rng.gen_range(-0.15..0.15);
        let len = s * rng.gen_range(0.8..1.2);
        if let Some((q, true)) = gr.extend(f.node, heading, len, f.class, true) {
            if rng.gen_bool(CONTINUE_P) {
                fronts.push_back(Front { node: q, heading, class: f.class });
            }
            for side in [-1.0, 1.0] {
                if rng.gen_bool(BRANCH_P) {
                    fronts.push_back(Front { node: q, heading: heading + side * PI * 0.5, class: RoadClass::Local });
                }
            }
        }
    }

    // close dead ends onto nearby streets
    let dead: alloc::vec::Vec<usize> = (0..gr.g.nodes.len()).filter(|&n| gr.g.degree(n) == 1).collect();
    for n in dead {
        if gr.g.degree(n) != 1 {
            continue;
        }
        let Some(e) = gr.g.edges.iter().find(|e| e.a == n || e.b == n).copied() else { continue };
        let other = if e.a == n { e.b } else { e.a };
        let heading = (gr.g.nodes[n] - gr.g.nodes[other]).angle();
        gr.extend(n, heading, 1.5 * s, e.class, false);
    }
    Ok(gr.g)
}

impl Grower<'_> {
    /// Tries to add a street from node `from`; returns the far node and
    /// whether it is newly created.
    fn extend(
        &mut self,
        from: usize,
        heading: f64,
        len: f64,
        class: RoadClass,
        allow_fresh: bool,
    ) -> Option<(usize, bool)> {
        let p = self.g.nodes[from];
        let dir = Vec2::from_angle(heading);
        let reach = self.clip_to_region(p, dir, len)?;
        let mut target = p + dir * reach;
        target.x = target.x.clamp(self.region.min.x, self.region.max.x);
        target.y = target.y.clamp(self.region.min.y, self.region.max.y);

        let plan = self.resolve(from, p, target)?;
        let (q, qn, skip) = match plan {
            Target::Fresh(q) => {
                if !allow_fresh {
                    return None;
                }
                (q, None, None)
            }
            Target::Node(n) => (self.g.nodes[n], Some(n), None),
            Target::Split { edge, at } => (at, None, Some(edge)),
        };
        if p.distance(q) < self.min_len {
            return None;
        }
        if let Some(n) = qn {
            if n == from || self.g.has_edge(from, n) {
                return None;
            }
        }
        if !segment_is_free(&self.g, p, Some(from), q, qn, skip) {
            return None;
        }
        for (k, &node) in self.g.nodes.iter().enumerate() {
            if k == from || Some(k) == qn {
                continue;
            }
            if point_segment_distance(node, p, q) < self.clearance {
                return None;
            }
        }
        // angular separation at both ends
        let d = (q - p).normalized();
        if !self.angles_ok(from, p, d) {
            return None;
        }
        match plan {
            Target::Node(n) => {
                if !self.angles_ok(n, q, -d) {
                    return None;
                }
            }
            Target::Split { edge, .. } => {
                let (a, b) = self.g.segment(edge);
                for other in [a, b] {
                    if (other - q).normalized().dot(-d) > self.cos_min_angle {
                        return None;
                    }
                }
            }
            Target::Fresh(_) => {}
        }

        let width = self.cfg.width_of(class);
        let (qi, fresh) = match plan {
            Target::Fresh(q) => (self.g.add_node(q), true),
            Target::Node(n) => (n, false),
            Target::Split { edge, at } => {
                let qi = self.g.add_node(at);
                let old = self.g.edges[edge];
                self.g.edges[edge].b = qi;
                self.g.edges.push(super::RoadEdge { a: qi, b: old.b, ..old });
                (qi, false)
            }
        };
        self.g.add_edge(from, qi, width, class);
        Some((qi, fresh))
    }

    fn angles_ok(&self, node: usize, at: Vec2, d: Vec2) -> bool {
        for e in &self.g.edges {
            let other = if e.a == node {
                e.b
            } else if e.b == node {
                e.a
            } else {
                continue;
            };
            if (self.g.nodes[other] - at).normalized().dot(d) > self.cos_min_angle {
                return false;
            }
        }
        true
    }

    /// Length along `dir` from `p` that stays inside the region, capped at
    /// `len`; `None` if shorter than the minimum street length.
    fn clip_to_region(&self, p: Vec2, dir: Vec2, len: f64) -> Option<f64> {
        let mut t = len;
        let r = &self.region;
        if dir.x > 0.0 {
            t = t.min((r.max.x - p.x) / dir.x);
        } else if dir.x < 0.0 {
            t = t.min((r.min.x - p.x) / dir.x);
        }
        if dir.y > 0.0 {
            t = t.min((r.max.y - p.y) / dir.y);
        } else if dir.y < 0.0 {
            t = t.min((r.min.y - p.y) / dir.y);
        }
        (t >= self.min_len).then_some(t)
    }

    fn resolve(&self, from: usize, p: Vec2, target: Vec2) -> Option<Target> {
        let g = &self.g;
        // first crossing along the proposal
        let mut hit: Option<(f64, usize, Vec2)> = None;
        for (k, e) in g.edges.iter().enumerate() {
            if e.a == from || e.b == from {
                continue;
            }
            match segments_intersect(p, target, g.nodes[e.a], g.nodes[e.b]) {
                SegmentIntersection::None => {}
                SegmentIntersection::Overlap => return None,
                SegmentIntersection::Point { at, t, .. } => {
                    if t > 1e-9 && hit.is_none_or(|(bt, _, _)| t < bt) {
                        hit = Some((t, k, at));
                    }
                }
            }
        }
        if let Some((_, e, at)) = hit {
            return Some(self.snap_on_edge(e, at));
        }
        // nearest node within snap radius
        let mut near: Option<(f64, usize)> = None;
        for (k, &n) in g.nodes.iter().enumerate() {
            if k == from {
                continue;
            }
            let d = n.distance(target);
            if d < self.snap && near.is_none_or(|(bd, _)| d < bd) {
                near = Some((d, k));
            }
        }
        if let Some((_, n)) = near {
            return Some(Target::Node(n));
        }
        // nearest edge within snap radius
        let mut near_edge: Option<(f64, usize)> = None;
        for (k, e) in g.edges.iter().enumerate() {
            if e.a == from || e.b == from {
                continue;
            }
            let d = point_segment_distance(target, g.nodes[e.a], g.nodes[e.b]);
            if d < self.snap && near_edge.is_none_or(|(bd, _)| d < bd) {
                near_edge = Some((d, k));
            }
        }
        if let Some((_, e)) = near_edge {
            let (a, b) = g.segment(e);
            let ab = b - a;
            let t = ((target - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
            return Some(self.snap_on_edge(e, a.lerp(b, t)));
        }
        Some(Target::Fresh(target))
    }

    fn snap_on_edge(&self, e: usize, at: Vec2) -> Target {
        let edge = self.g.edges[e];
        let (a, b) = (self.g.nodes[edge.a], self.g.nodes[edge.b]);
        if at.distance(a) < self.snap {
            Target::Node(edge.a)
        } else if at.distance(b) < self.snap {
            Target::Node(edge.b)
        } else {
            Target::Split { edge: e, at }
        }
    }
}
