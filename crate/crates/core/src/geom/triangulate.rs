use alloc::vec::Vec;

use super::{signed_area, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TriangulationError {
    #[error("polygon needs at least three vertices")]
    TooFewVertices,
    #[error("no ear found; polygon is not simple")]
    NotSimple,
}

/// Ear-clipping triangulation of a simple polygon (either winding).
///
/// Returns index triples into `poly`, each wound counter-clockwise.
/// Zero-area ears at collinear vertices are clipped without emitting a
/// triangle.
pub fn triangulate(poly: &[Vec2]) -> Result<Vec<[usize; 3]>, TriangulationError> {
    let n = poly.len();
    if n < 3 {
        return Err(TriangulationError::TooFewVertices);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    if signed_area(poly) < 0.0 {
        idx.reverse();
    }
    let mut tris = Vec::with_capacity(n - 2);

    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            let turn = (b - a).cross(c - b);
            if turn <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                j != ia && j != ib && j != ic && {
                    let p = poly[j];
                    p != a && p != b && p != c && in_triangle(p, a, b, c)
                }
            });
            if blocked {
                continue;
            }
            tris.push([ia, ib, ic]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            // only reflex or collinear vertices left as candidates: drop a
            // collinear one if present
            let m = idx.len();
            let flat = (0..m).find(|&k| {
                let (a, b, c) = (poly[idx[(k + m - 1) % m]], poly[idx[k]], poly[idx[(k + 1) % m]]);
                (b - a).cross(c - b) == 0.0
            });
            match flat {
                Some(k) => {
                    idx.remove(k);
                }
                None => return Err(TriangulationError::NotSimple),
            }
        }
    }
    let (a, b, c) = (poly[idx[0]], poly[idx[1]], poly[idx[2]]);
    if (b - a).cross(c - a) > 0.0 {
        tris.push([idx[0], idx[1], idx[2]]);
    }
    Ok(tris)
}

/// Closed point-in-triangle test for a counter-clockwise triangle.
fn in_triangle(p: Vec2, a: Vec2, b: Vec2, c: Vec2) -> bool {
    (b - a).cross(p - a) >= 0.0 && (c - b).cross(p - b) >= 0.0 && (a - c).cross(p - c) >= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tri_area_sum(poly: &[Vec2], tris: &[[usize; 3]]) -> f64 {
        tris.iter().map(|t| 0.5 * (poly[t[1]] - poly[t[0]]).cross(poly[t[2]] - poly[t[0]])).sum()
    }

    #[test]
    fn square_gives_two() {
        let sq = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        let t = triangulate(&sq).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(tri_area_sum(&sq, &t), 1.0);
    }

    #[test]
    fn concave_area_preserved() {
        let u = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(30.0, 0.0),
            Vec2::new(30.0, 30.0),
            Vec2::new(20.0, 30.0),
            Vec2::new(20.0, 10.0),
            Vec2::new(10.0, 10.0),
            Vec2::new(10.0, 30.0),
            Vec2::new(0.0, 30.0),
        ];
        let t = triangulate(&u).unwrap();
        assert_eq!(t.len(), 6);
        assert!((tri_area_sum(&u, &t) - signed_area(&u)).abs() < 1e-9);
    }

    #[test]
    fn clockwise_input_emits_ccw() {
        let mut sq = vec![Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(2.0, 2.0), Vec2::new(0.0, 2.0)];
        sq.reverse();
        let t = triangulate(&sq).unwrap();
        assert!((tri_area_sum(&sq, &t) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_vertices() {
        let p = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(5.0, 0.0),
            Vec2::new(10.0, 0.0),
            Vec2::new(10.0, 10.0),
            Vec2::new(0.0, 10.0),
        ];
        let t = triangulate(&p).unwrap();
        assert!((tri_area_sum(&p, &t) - 100.0).abs() < 1e-9);
    }
}
