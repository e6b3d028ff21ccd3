//! Scanline-free triangle rasterizer over a regular ground grid.
//!
//! Pixel `(i, j)`, with `j` counted from the south, samples the ground point
//! `min + (i + 0.5, j + 0.5) · g` and is stored at image row `rows - 1 - j`
//! so that north is up. Coverage uses a top-left fill rule, so triangles
//! sharing an edge never both claim a pixel.

use alloc::vec::Vec;

use crate::geom::{Rect, Vec2, Vec3};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    Orthographic,
    /// Pinhole straight down from `eye`.
    Perspective {
        eye: Vec3,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub min: Vec2,
    pub cols: usize,
    pub rows: usize,
    pub gsd: f64,
    pub projection: Projection,
}

/// A covered pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub col: usize,
    /// Image row, 0 at the north edge.
    pub row: usize,
    /// Larger is closer to the camera.
    pub nearness: f64,
    /// World x of the surface point.
    pub world_x: f64,
}

#[derive(Debug, Clone, Copy)]
struct Projected {
    u: f64,
    v: f64,
    /// Interpolates linearly in screen space.
    near: f64,
    /// Perspective weight; 1 for orthographic.
    q: f64,
    x: f64,
}

impl Frame {
    pub fn bounds(&self) -> Rect {
        Rect::new(
            self.min,
            Vec2::new(self.min.x + self.cols as f64 * self.gsd, self.min.y + self.rows as f64 * self.gsd),
        )
    }

    /// Ground point sampled by pixel `(col, row)`.
    pub fn sample(&self, col: usize, row: usize) -> Vec2 {
        let j = self.rows - 1 - row;
        Vec2::new(self.min.x + (col as f64 + 0.5) * self.gsd, self.min.y + (j as f64 + 0.5) * self.gsd)
    }

    /// Ground-plane position at which `p` appears.
    pub fn project_xy(&self, p: Vec3) -> Option<Vec2> {
        match self.projection {
            Projection::Orthographic => Some(p.xy()),
            Projection::Perspective { eye } => {
                let d = eye.z - p.z;
                (d > 1e-9).then(|| eye.xy() + (p.xy() - eye.xy()) * (eye.z / d))
            }
        }
    }

    fn project(&self, p: Vec3) -> Option<Projected> {
        let g = self.project_xy(p)?;
        let (near, q) = match self.projection {
            Projection::Orthographic => (p.z, 1.0),
            Projection::Perspective { eye } => {
                let q = 1.0 / (eye.z - p.z);
                (q, q)
            }
        };
        Some(Projected { u: (g.x - self.min.x) / self.gsd, v: (g.y - self.min.y) / self.gsd, near, q, x: p.x })
    }

    /// Calls `emit` for every pixel whose sample point the triangle covers.
    /// Triangles reaching the camera plane are skipped.
    pub fn rasterize(&self, tri: &[Vec3; 3], mut emit: impl FnMut(Fragment)) {
        let (Some(mut a), Some(mut b), Some(c)) = (self.project(tri[0]), self.project(tri[1]), self.project(tri[2]))
        else {
            return;
        };
        let area = (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
        if area == 0.0 || !area.is_finite() {
            return;
        }
        if area < 0.0 {
            core::mem::swap(&mut a, &mut b);
        }
        let area = area.abs();
        let (umin, umax) = (a.u.min(b.u).min(c.u), a.u.max(b.u).max(c.u));
        let (vmin, vmax) = (a.v.min(b.v).min(c.v), a.v.max(b.v).max(c.v));
        let i0 = math::ceil(umin - 0.5).max(0.0);
        let i1 = math::floor(umax - 0.5).min(self.cols as f64 - 1.0);
        let j0 = math::ceil(vmin - 0.5).max(0.0);
        let j1 = math::floor(vmax - 0.5).min(self.rows as f64 - 1.0);
        if i0 > i1 || j0 > j1 {
            return;
        }
        let edges = [(b, c), (c, a), (a, b)];
        let bias = edges.map(|(p, q)| top_left(p, q));
        for j in j0 as usize..=j1 as usize {
            let pv = j as f64 + 0.5;
            for i in i0 as usize..=i1 as usize {
                let pu = i as f64 + 0.5;
                let mut w = [0.0; 3];
                let mut inside = true;
                for k in 0..3 {
                    let (p, q) = edges[k];
                    let e = (q.u - p.u) * (pv - p.v) - (q.v - p.v) * (pu - p.u);
                    if e < 0.0 || (e == 0.0 && !bias[k]) {
                        inside = false;
                        break;
                    }
                    w[k] = e / area;
                }
                if !inside {
                    continue;
                }
                let nearness = w[0] * a.near + w[1] * b.near + w[2] * c.near;
                let qs = w[0] * a.q + w[1] * b.q + w[2] * c.q;
                let world_x = (w[0] * a.q * a.x + w[1] * b.q * b.x + w[2] * c.q * c.x) / qs;
                emit(Fragment { col: i, row: self.rows - 1 - j, nearness, world_x });
            }
        }
    }

    /// Screen-space bounding box (in pixel units) of a set of world points,
    /// or `None` if any reaches the camera plane.
    pub fn screen_bounds(&self, pts: impl IntoIterator<Item = Vec3>) -> Option<(f64, f64, f64, f64)> {
        let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            let s = self.project(p)?;
            b = (b.0.min(s.u), b.1.min(s.v), b.2.max(s.u), b.3.max(s.v));
        }
        Some(b)
    }

    /// Whether a screen box can touch any pixel center.
    pub fn overlaps(&self, b: (f64, f64, f64, f64)) -> bool {
        b.2 >= 0.5 && b.3 >= 0.5 && b.0 <= self.cols as f64 - 0.5 && b.1 <= self.rows as f64 - 0.5
    }
}

/// Counter-clockwise edge `p -> q` in a y-up frame: left edges go down,
/// top edges go left.
fn top_left(p: Projected, q: Projected) -> bool {
    let (du, dv) = (q.u - p.u, q.v - p.v);
    dv < 0.0 || (dv == 0.0 && du < 0.0)
}

/// Triangles' world-space axis-aligned box corners.
pub fn box_corners(tris: &[[Vec3; 3]]) -> Option<[Vec3; 8]> {
    let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut hi = Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in tris.iter().flatten() {
        lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    if tris.is_empty() {
        return None;
    }
    let mut out = [lo; 8];
    for (k, o) in out.iter_mut().enumerate() {
        *o = Vec3::new(
            if k & 1 == 0 { lo.x } else { hi.x },
            if k & 2 == 0 { lo.y } else { hi.y },
            if k & 4 == 0 { lo.z } else { hi.z },
        );
    }
    Some(out)
}

/// Pixels of a frame covered by a triangle, collected.
pub fn covered(frame: &Frame, tri: &[Vec3; 3]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    frame.rasterize(tri, |f| out.push((f.col, f.row)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ortho(cols: usize, rows: usize) -> Frame {
        Frame { min: Vec2::ZERO, cols, rows, gsd: 1.0, projection: Projection::Orthographic }
    }

    #[test]
    fn shared_edge_covered_once() {
        // a unit-grid square split along its diagonal through pixel centers
        let f = ortho(8, 8);
        let p = |x: f64, y: f64| Vec3::new(x, y, 0.0);
        let t1 = [p(0.5, 0.5), p(6.5, 0.5), p(6.5, 6.5)];
        let t2 = [p(0.5, 0.5), p(6.5, 6.5), p(0.5, 6.5)];
        let mut counts = [[0u8; 8]; 8];
        for t in [t1, t2] {
            for (c, r) in covered(&f, &t) {
                counts[r][c] += 1;
            }
        }
        let total: usize = counts.iter().flatten().map(|&c| c as usize).sum();
        assert!(counts.iter().flatten().all(|&c| c <= 1));
        // pixel centers (0.5..6.5) on the closed square: top-left rule keeps
        // the left and top edges only
        assert_eq!(total, 36);
    }

    #[test]
    fn row_zero_is_north() {
        let f = ortho(4, 4);
        let t = [Vec3::new(0.0, 3.0, 0.0), Vec3::new(1.2, 3.0, 0.0), Vec3::new(0.0, 4.2, 0.0)];
        assert_eq!(covered(&f, &t), [(0, 0)]);
        assert_eq!(f.sample(0, 0), Vec2::new(0.5, 3.5));
    }

    #[test]
    fn winding_does_not_matter() {
        let f = ortho(10, 10);
        let a = [Vec3::new(1.0, 1.0, 0.0), Vec3::new(9.0, 2.0, 0.0), Vec3::new(4.0, 8.0, 0.0)];
        let b = [a[0], a[2], a[1]];
        assert_eq!(covered(&f, &a), covered(&f, &b));
    }

    #[test]
    fn perspective_magnifies_raised_geometry() {
        let eye = Vec3::new(5.0, 5.0, 100.0);
        let f = Frame { min: Vec2::ZERO, cols: 10, rows: 10, gsd: 1.0, projection: Projection::Perspective { eye } };
        let p = f.project_xy(Vec3::new(9.0, 5.0, 50.0)).unwrap();
        assert!((p.x - 13.0).abs() < 1e-12 && (p.y - 5.0).abs() < 1e-12);
        assert!(f.project_xy(Vec3::new(0.0, 0.0, 100.0)).is_none());
    }
}
