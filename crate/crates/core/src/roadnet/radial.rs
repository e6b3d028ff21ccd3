use core::f64::consts::PI;

use rand::Rng;

use super::{RoadClass, RoadConfig, RoadError, RoadGraph};
use crate::geom::Vec2;
use crate::math;
use crate::rng::Stream;

/// Concentric rings at multiples of `spacing_m` around the extent center,
/// cut into chords where they meet the spokes. Jitter moves ring nodes only
/// along their spoke (by less than half a ring gap) and spokes only within
/// their angular slot, so chords of neighbouring rings never cross.
pub(super) fn generate(cfg: &RoadConfig, rng: &mut Stream) -> Result<RoadGraph, RoadError> {
    let ext = cfg.extent;
    let max_r = 0.5 * ext.width.min(ext.height);
    let fit = math::floor(max_r / cfg.spacing_m + 1e-9) as u32;
    let rings = cfg.radial.rings.map_or(fit, |r| r.min(fit));
    if rings == 0 {
        return Err(RoadError::EmptyNetwork { width: ext.width, height: ext.height, spacing: cfg.spacing_m });
    }
    let spokes = cfg.radial.spokes as usize;
    let slot = 2.0 * PI / spokes as f64;
    let rotation = if cfg.jitter > 0.0 { rng.gen_range(0.0..slot) } else { 0.0 };
    let angles: alloc::vec::Vec<f64> = (0..spokes)
        .map(|s| {
            let wobble = if cfg.jitter > 0.0 { rng.gen_range(-1.0..=1.0) * cfg.jitter * 0.5 * slot } else { 0.0 };
            rotation + s as f64 * slot + wobble
        })
        .collect();

    let c = ext.center();
    let mut g = RoadGraph::new(ext);
    let center = g.add_node(c);
    let node = |ring: usize, spoke: usize| 1 + ring * spokes + spoke;
    for k in 1..=rings as usize {
        for &a in &angles {
            let mut r = k as f64 * cfg.spacing_m;
            if cfg.jitter > 0.0 {
                r += rng.gen_range(-1.0..=1.0) * cfg.jitter * cfg.spacing_m;
            }
            let r = r.min(max_r);
            let mut p = c + Vec2::from_angle(a) * r;
            p.x = p.x.clamp(0.0, ext.width);
            p.y = p.y.clamp(0.0, ext.height);
            g.add_node(p);
        }
    }
    let (aw, lw) = (cfg.arterial_width_m, cfg.local_width_m);
    for s in 0..spokes {
        g.add_edge(center, node(0, s), aw, RoadClass::Arterial);
        for k in 1..rings as usize {
            g.add_edge(node(k - 1, s), node(k, s), aw, RoadClass::Arterial);
        }
    }
    for k in 0..rings as usize {
        for s in 0..spokes {
            g.add_edge(node(k, s), node(k, (s + 1) % spokes), lw, RoadClass::Local);
        }
    }
    Ok(g)
}
