use rand::Rng;

use super::{RoadClass, RoadConfig, RoadError, RoadGraph};
use crate::geom::Vec2;
use crate::math;
use crate::rng::Stream;

/// Every fourth lattice line (and the perimeter) is an arterial.
const ARTERIAL_EVERY: usize = 4;

/// Axis-aligned lattice of `⌊w/spacing⌋ × ⌊h/spacing⌋` cells stretched to
/// span the extent. Interior nodes move by up to `jitter · cell` per axis,
/// perimeter nodes only along the perimeter; with `jitter < 0.5` the
/// displacement boxes of distinct nodes are disjoint, which keeps the
/// lattice planar.
pub(super) fn generate(cfg: &RoadConfig, rng: &mut Stream) -> Result<RoadGraph, RoadError> {
    let ext = cfg.extent;
    let nx = math::floor(ext.width / cfg.spacing_m) as usize;
    let ny = math::floor(ext.height / cfg.spacing_m) as usize;
    if nx == 0 || ny == 0 {
        return Err(RoadError::EmptyNetwork { width: ext.width, height: ext.height, spacing: cfg.spacing_m });
    }
    let (cw, ch) = (ext.width / nx as f64, ext.height / ny as f64);
    let mut g = RoadGraph::new(ext);
    for j in 0..=ny {
        for i in 0..=nx {
            let mut p = Vec2::new(i as f64 * cw, j as f64 * ch);
            if i == nx {
                p.x = ext.width;
            }
            if j == ny {
                p.y = ext.height;
            }
            if cfg.jitter > 0.0 {
                let dx = rng.gen_range(-1.0..=1.0) * cfg.jitter * cw;
                let dy = rng.gen_range(-1.0..=1.0) * cfg.jitter * ch;
                if i != 0 && i != nx {
                    p.x += dx;
                }
                if j != 0 && j != ny {
                    p.y += dy;
                }
            }
            g.add_node(p);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let class_of = |line: usize, last: usize| {
        if line.is_multiple_of(ARTERIAL_EVERY) || line == last {
            RoadClass::Arterial
        } else {
            RoadClass::Local
        }
    };
    for j in 0..=ny {
        let class = class_of(j, ny);
        for i in 0..nx {
            g.add_edge(id(i, j), id(i + 1, j), cfg.width_of(class), class);
        }
    }
    for i in 0..=nx {
        let class = class_of(i, nx);
        for j in 0..ny {
            g.add_edge(id(i, j), id(i, j + 1), cfg.width_of(class), class);
        }
    }
    Ok(g)
}
