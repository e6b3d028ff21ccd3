//! District mixes of the three base topologies.
//!
//! The extent is cut into a grid of rectangular districts. Each district,
//! shrunk by a quarter spacing on every side, receives one topology drawn by
//! weight and is generated independently; the gaps between districts are
//! then bridged by connector streets between the nodes nearest to the shared
//! boundary.

use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::planar::segment_is_free;
use super::{
    organic, radial, raster, RoadClass, RoadConfig, RoadError, RoadGraph, Topology, TopologyKind, WeightedTopology,
};
use crate::geom::{point_segment_distance, Extent, Rect, Vec2};
use crate::math;
use crate::rng::{self, Stream};

pub(super) fn generate(cfg: &RoadConfig, parts: &[WeightedTopology], rng: &mut Stream) -> Result<RoadGraph, RoadError> {
    let ext = cfg.extent;
    let s = cfg.spacing_m;
    let district = cfg.district_m.unwrap_or(0.5 * ext.width.max(ext.height));
    let nx = (math::round(ext.width / district) as usize).max(1);
    let ny = (math::round(ext.height / district) as usize).max(1);
    let (dw, dh) = (ext.width / nx as f64, ext.height / ny as f64);
    let margin = 0.25 * s;
    let total: f64 = parts.iter().map(|p| p.weight).sum();

    let mut g = RoadGraph::new(ext);
    // node range per district, row-major
    let mut ranges: Vec<(usize, usize)> = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let rect = Rect::new(
                Vec2::new(i as f64 * dw + margin, j as f64 * dh + margin),
                Vec2::new((i + 1) as f64 * dw - margin, (j + 1) as f64 * dh - margin),
            );
            let mut pick = rng.gen_range(0.0..total);
            let mut kind = parts[parts.len() - 1].kind;
            for p in parts {
                if pick < p.weight {
                    kind = p.kind;
                    break;
                }
                pick -= p.weight;
            }
            let sub_seed = rng.next_u64();
            let start = g.nodes.len();
            if let Some(sub) = district_network(cfg, kind, &rect, sub_seed) {
                g.merge_translated(&sub, rect.min);
            }
            ranges.push((start, g.nodes.len()));
        }
    }
    // fix up extent of merged nodes (district graphs were built in local frames)
    g.extent = ext;

    for j in 0..ny {
        for i in 0..nx {
            let here = ranges[j * nx + i];
            if i + 1 < nx {
                let x = (i + 1) as f64 * dw;
                let along = (j as f64 * dh, (j + 1) as f64 * dh);
                stitch(&mut g, cfg, here, ranges[j * nx + i + 1], true, x, along);
            }
            if j + 1 < ny {
                let y = (j + 1) as f64 * dh;
                let along = (i as f64 * dw, (i + 1) as f64 * dw);
                stitch(&mut g, cfg, here, ranges[(j + 1) * nx + i], false, y, along);
            }
        }
    }
    Ok(g)
}

/// Network of one district in its local frame (origin at the district's
/// south-west corner); `None` when the district is too small for it.
fn district_network(cfg: &RoadConfig, kind: TopologyKind, rect: &Rect, seed: u64) -> Option<RoadGraph> {
    let mut sub = cfg.clone();
    sub.topology = Topology::from(kind);
    sub.extent = Extent::new(rect.width(), rect.height());
    sub.seed = seed;
    sub.radial.rings = None;
    if sub.extent.width <= 0.0 || sub.extent.height <= 0.0 {
        return None;
    }
    let mut r = rng::stream(seed, &[rng::tag::ROADS]);
    let res = match kind {
        TopologyKind::Raster => raster::generate(&sub, &mut r),
        TopologyKind::Radial => radial::generate(&sub, &mut r),
        TopologyKind::Organic => organic::generate(&sub, &sub.extent.rect(), &mut r),
    };
    res.ok().filter(|g| !g.edges.is_empty())
}

/// Adds connector streets across the boundary `coord` (x when `vertical`,
/// else y) between node ranges `a` and `b`, one candidate per spacing along
/// the boundary.
fn stitch(
    g: &mut RoadGraph,
    cfg: &RoadConfig,
    a: (usize, usize),
    b: (usize, usize),
    vertical: bool,
    coord: f64,
    along: (f64, f64),
) {
    if a.0 == a.1 || b.0 == b.1 {
        return;
    }
    let s = cfg.spacing_m;
    let steps = math::floor((along.1 - along.0) / s) as usize;
    let reach = 1.5 * s;
    for k in 0..steps {
        let t = along.0 + (k as f64 + 0.5) * s;
        let probe = if vertical { Vec2::new(coord, t) } else { Vec2::new(t, coord) };
        let (Some(na), Some(nb)) = (nearest(g, a, probe, reach), nearest(g, b, probe, reach)) else { continue };
        try_connect(g, cfg, na, nb);
    }
}

fn nearest(g: &RoadGraph, range: (usize, usize), p: Vec2, reach: f64) -> Option<usize> {
    (range.0..range.1)
        .map(|n| (g.nodes[n].distance(p), n))
        .filter(|(d, _)| *d <= reach)
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
        .map(|(_, n)| n)
}

fn try_connect(g: &mut RoadGraph, cfg: &RoadConfig, na: usize, nb: usize) -> bool {
    let (p, q) = (g.nodes[na], g.nodes[nb]);
    let len = p.distance(q);
    if len < 0.1 * cfg.spacing_m || g.has_edge(na, nb) {
        return false;
    }
    if !segment_is_free(g, p, Some(na), q, Some(nb), None) {
        return false;
    }
    let clearance = cfg.spacing_m / 8.0;
    if g.nodes.iter().enumerate().any(|(k, &n)| k != na && k != nb && point_segment_distance(n, p, q) < clearance) {
        return false;
    }
    let d = (q - p).normalized();
    let cos_min = math::cos(math::to_radians(20.0));
    for (node, at, dir) in [(na, p, d), (nb, q, -d)] {
        for e in &g.edges {
            let other = if e.a == node {
                e.b
            } else if e.b == node {
                e.a
            } else {
                continue;
            };
            if (g.nodes[other] - at).normalized().dot(dir) > cos_min {
                return false;
            }
        }
    }
    g.add_edge(na, nb, cfg.local_width_m, RoadClass::Local)
}
