use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::geom::{min_area_rect, polygon_area, split_polygon, Vec2};
use crate::rng;
use crate::roadnet::CityBlock;

/// Blocks below this area are not subdivided.
pub const DEGENERATE_AREA_M2: f64 = 1e-6;
const MAX_SPLIT_DEPTH: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SubdivideError {
    #[error("block area {area} m² is degenerate")]
    DegenerateBlock { area: f64 },
    #[error("minimum lot area must be positive, got {0}")]
    InvalidMinArea(f64),
    #[error("split range ({0}, {1}) must satisfy 0 < lo <= hi < 1")]
    InvalidSplitRange(f64, f64),
}

/// Subdivides with split positions drawn from `[0.4, 0.6]`.
pub fn subdivide_block(block: &CityBlock, min_area_m2: f64, seed: u64) -> Result<Vec<Vec<Vec2>>, SubdivideError> {
    subdivide_with(&block.boundary, min_area_m2, (0.4, 0.6), seed)
}

/// Recursively halves `poly` across the long axis of its minimum-area
/// bounding rectangle, at a random fraction in `range` of that axis, until
/// every piece is smaller than `2 · min_area_m2`. Pieces tile the input.
pub fn subdivide_with(
    poly: &[Vec2],
    min_area_m2: f64,
    range: (f64, f64),
    seed: u64,
) -> Result<Vec<Vec<Vec2>>, SubdivideError> {
    if !(min_area_m2 > 0.0) {
        return Err(SubdivideError::InvalidMinArea(min_area_m2));
    }
    let (lo, hi) = range;
    if !(lo > 0.0 && lo <= hi && hi < 1.0) {
        return Err(SubdivideError::InvalidSplitRange(lo, hi));
    }
    let area = polygon_area(poly);
    if !(area >= DEGENERATE_AREA_M2) {
        return Err(SubdivideError::DegenerateBlock { area });
    }
    let mut rng = rng::stream(seed, &[rng::tag::SUBDIVIDE]);
    let mut lots = Vec::new();
    let mut stack = vec![(poly.to_vec(), 0usize)];
    while let Some((piece, depth)) = stack.pop() {
        let a = polygon_area(&piece);
        if a < 2.0 * min_area_m2 || depth >= MAX_SPLIT_DEPTH {
            lots.push(piece);
            continue;
        }
        let Some(r) = min_area_rect(&piece) else {
            lots.push(piece);
            continue;
        };
        let t = if lo == hi { lo } else { rng.gen_range(lo..hi) };
        let at = r.origin() + r.major * (2.0 * r.half_major * t);
        let (left, right) = split_polygon(&piece, at, r.minor);
        if left.is_empty() || right.is_empty() {
            lots.push(piece);
            continue;
        }
        // push in reverse so the left side is refined first
        for p in left.into_iter().chain(right).collect::<Vec<_>>().into_iter().rev() {
            if polygon_area(&p) >= DEGENERATE_AREA_M2 {
                stack.push((p, depth + 1));
            }
        }
    }
    Ok(lots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::point_in_polygon;
    use proptest::prelude::*;

    fn square(side: f64) -> Vec<Vec2> {
        vec![Vec2::new(0.0, 0.0), Vec2::new(side, 0.0), Vec2::new(side, side), Vec2::new(0.0, side)]
    }

    #[test]
    fn median_split_gives_four_quarters() {
        let lots = subdivide_with(&square(100.0), 2500.0, (0.5, 0.5), 1).unwrap();
        assert_eq!(lots.len(), 4);
        for l in &lots {
            assert!((polygon_area(l) - 2500.0).abs() < 1e-9);
        }
    }

    #[test]
    fn small_block_is_one_lot() {
        let block = CityBlock::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(40.0, 0.0),
            Vec2::new(40.0, 25.0),
            Vec2::new(0.0, 25.0),
        ]);
        let lots = subdivide_block(&block, 2500.0, 3).unwrap();
        assert_eq!(lots, vec![block.boundary.clone()]);
    }

    #[test]
    fn degenerate_block_rejected() {
        let sliver = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, 1e-9)];
        assert!(matches!(subdivide_with(&sliver, 10.0, (0.4, 0.6), 0), Err(SubdivideError::DegenerateBlock { .. })));
    }

    proptest! {
        #[test]
        fn lots_tile_the_block(
            seed in any::<u64>(),
            pts in prop::collection::vec((0.0..core::f64::consts::TAU, 40.0..120.0f64), 5..9),
            min_area in 150.0..900.0f64,
        ) {
            // star-shaped polygon around the origin, angles sorted
            let mut pts = pts;
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts.dedup_by(|a, b| (a.0 - b.0).abs() < 0.05);
            prop_assume!(pts.len() >= 3);
            let poly: Vec<Vec2> = pts.iter().map(|&(a, r)| Vec2::from_angle(a) * r).collect();
            prop_assume!(crate::geom::is_simple(&poly) && crate::geom::signed_area(&poly) > 0.0);
            let lots = subdivide_with(&poly, min_area, (0.4, 0.6), seed).unwrap();
            let total: f64 = lots.iter().map(|l| polygon_area(l)).sum();
            let area = polygon_area(&poly);
            prop_assert!((total - area).abs() <= 1e-6 * area, "{total} vs {area}");
            for l in &lots {
                prop_assert!(polygon_area(l) < 2.0 * min_area);
            }
            // a sample of interior points lies in exactly one lot
            for k in 0..40 {
                let a = k as f64 * 0.157;
                let p = Vec2::from_angle(a) * (10.0 + (k % 7) as f64 * 3.1);
                if point_in_polygon(p, &poly) {
                    let n = lots.iter().filter(|l| point_in_polygon(p, l)).count();
                    prop_assert!(n <= 1);
                }
            }
        }
    }
}
