use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::camera::{CameraMode, CameraSpec};
use super::raster::{box_corners, Frame, Projection};
use crate::citygen::Scene;
use crate::geom::{Rect, Vec3};
use crate::grammar::{Material, SemanticClass};
use crate::image::{Mask, Raster, RgbImage, FOREGROUND};
use crate::math;

/// Light received by surfaces facing away from the sun.
pub const AMBIENT: f64 = 0.4;
/// Color of pixels no triangle covers.
pub const BACKGROUND_RGB: [u8; 3] = [0, 0, 0];

/// Per-pixel class and instance id of the nearest surface. Instance 0 is
/// the background; scene object `k` has instance `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdBuffer {
    pub classes: Raster<SemanticClass>,
    pub instances: Raster<u32>,
}

impl IdBuffer {
    pub fn background(width: usize, height: usize) -> IdBuffer {
        IdBuffer {
            classes: Raster::filled(width, height, SemanticClass::Ground),
            instances: Raster::filled(width, height, 0),
        }
    }

    pub fn width(&self) -> usize {
        self.classes.width()
    }

    pub fn height(&self) -> usize {
        self.classes.height()
    }

    pub fn count(&self, pred: impl Fn(SemanticClass) -> bool) -> usize {
        self.classes.pixels().iter().filter(|&&c| pred(c)).count()
    }
}

/// Building mask: 255 where the class is Building or Roof, else 0.
pub fn extract_mask(ids: &IdBuffer) -> Mask {
    ids.classes.map(|c| if c.is_building() { FOREGROUND } else { 0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub rgb: RgbImage,
    pub ids: IdBuffer,
    /// The camera footprint misses the scene; the tile is all background.
    pub outside_scene: bool,
}

fn frame_for(cam: &CameraSpec) -> Frame {
    let w = cam.image_px as usize;
    let bounds = cam.bounds();
    let projection = match cam.mode {
        CameraMode::Orthographic => Projection::Orthographic,
        CameraMode::Perspective => Projection::Perspective { eye: cam.center_xy.extend(cam.height_m) },
    };
    Frame { min: bounds.min, cols: w, rows: w, gsd: cam.gsd_m, projection }
}

/// Nadir rendering of `scene` through `cam`: z-buffered, flat Lambert
/// shaded, no anti-aliasing.
pub fn render_tile(scene: &Scene, cam: &CameraSpec) -> Rendered {
    let frame = frame_for(cam);
    let outside_scene = !cam.bounds().intersects(&scene.extent.rect());
    let mut target = Target::new(frame.cols, frame.rows);
    if !outside_scene {
        target.draw(scene, &frame, Some(cam), |_| true);
        if cam.shadows {
            target.cast_shadows(&frame, cam);
        }
    }
    Rendered { rgb: target.rgb, ids: target.ids, outside_scene }
}

struct Target {
    depth: Vec<f64>,
    /// Unshaded albedo and sun term, kept for the shadow pass.
    lit: Vec<(f64, [f64; 3])>,
    rgb: RgbImage,
    ids: IdBuffer,
}

impl Target {
    fn new(cols: usize, rows: usize) -> Target {
        Target {
            depth: vec![f64::NEG_INFINITY; cols * rows],
            lit: vec![(0.0, [0.0; 3]); cols * rows],
            rgb: RgbImage::filled(cols, rows, BACKGROUND_RGB),
            ids: IdBuffer::background(cols, rows),
        }
    }

    fn draw(&mut self, scene: &Scene, frame: &Frame, cam: Option<&CameraSpec>, keep: impl Fn(SemanticClass) -> bool) {
        let sun = cam.map(|c| c.sun.direction()).unwrap_or(Vec3::Z);
        let cols = frame.cols;
        for (k, obj) in scene.objects.iter().enumerate() {
            let mesh = &obj.mesh;
            let Some(corners) = box_corners(&mesh.triangles) else { continue };
            match frame.screen_bounds(corners) {
                Some(b) if !frame.overlaps(b) => continue,
                _ => {}
            }
            let instance = (k + 1) as u32;
            for (t, tri) in mesh.triangles.iter().enumerate() {
                let class = mesh.classes[t];
                if !keep(class) {
                    continue;
                }
                let material = mesh.material_of(t);
                let light = lambert(tri, sun);
                frame.rasterize(tri, |f| {
                    let idx = f.row * cols + f.col;
                    if f.nearness > self.depth[idx] {
                        self.depth[idx] = f.nearness;
                        self.ids.classes.set(f.col, f.row, class);
                        self.ids.instances.set(f.col, f.row, instance);
                        let albedo = albedo(material, f.world_x);
                        self.lit[idx] = (light, albedo);
                        self.rgb.set(f.col, f.row, shade(albedo, AMBIENT + (1.0 - AMBIENT) * light));
                    }
                });
            }
        }
    }

    /// Height-field shadows: a pixel is shadowed when some pixel towards the
    /// sun rises above the sun ray. Orthographic heights only.
    fn cast_shadows(&mut self, frame: &Frame, cam: &CameraSpec) {
        if cam.mode != CameraMode::Orthographic || cam.sun.elevation_deg <= 0.0 {
            return;
        }
        let (cols, rows) = (frame.cols, frame.rows);
        let height: Vec<f64> = self.depth.iter().map(|&d| if d.is_finite() { d } else { 0.0 }).collect();
        let top = height.iter().copied().fold(0.0, f64::max);
        let dir = cam.sun.direction();
        let horiz = math::sqrt(dir.x * dir.x + dir.y * dir.y);
        if horiz < 1e-12 {
            return;
        }
        // one pixel of horizontal travel per step; rows grow southwards
        let (du, dv) = (dir.x / horiz, -dir.y / horiz);
        let rise = dir.z / horiz * frame.gsd;
        for row in 0..rows {
            for col in 0..cols {
                let idx = row * cols + col;
                let z0 = height[idx];
                let steps = ((top - z0) / rise).max(0.0) as usize + 1;
                let mut shadowed = false;
                for s in 1..=steps {
                    let c = math::round(col as f64 + du * s as f64);
                    let r = math::round(row as f64 + dv * s as f64);
                    if c < 0.0 || r < 0.0 || c >= cols as f64 || r >= rows as f64 {
                        break;
                    }
                    if height[r as usize * cols + c as usize] > z0 + rise * s as f64 + 1e-6 {
                        shadowed = true;
                        break;
                    }
                }
                if shadowed {
                    let (_, albedo) = self.lit[idx];
                    self.rgb.set(col, row, shade(albedo, AMBIENT));
                }
            }
        }
    }
}

fn lambert(tri: &[Vec3; 3], sun: Vec3) -> f64 {
    let mut n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
    if n.z < 0.0 {
        n = -n;
    }
    n.dot(sun).max(0.0)
}

fn albedo(m: Material, world_x: f64) -> [f64; 3] {
    let mut k = 1.0;
    if let Some(s) = m.stripe {
        if s.period_m > 0.0 && (math::floor(world_x / s.period_m) as i64).rem_euclid(2) == 1 {
            k = s.shade;
        }
    }
    m.color.map(|c| c as f64 * k)
}

fn shade(albedo: [f64; 3], k: f64) -> [u8; 3] {
    albedo.map(|c| math::round((c * k).clamp(0.0, 255.0)) as u8)
}

/// Metadata stored with every exported tile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileMeta {
    pub bounds: Rect,
    pub style_id: String,
    pub world_seed: u64,
    pub camera: CameraSpec,
    #[serde(default)]
    pub outside_scene: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub rgb: RgbImage,
    pub mask: Mask,
    pub ids: IdBuffer,
    pub meta: TileMeta,
}

impl Tile {
    pub fn render(scene: &Scene, cam: &CameraSpec) -> Tile {
        let r = render_tile(scene, cam);
        let mask = extract_mask(&r.ids);
        Tile {
            rgb: r.rgb,
            mask,
            ids: r.ids,
            meta: TileMeta {
                bounds: cam.bounds(),
                style_id: scene.style_id.clone(),
                world_seed: scene.world_seed,
                camera: *cam,
                outside_scene: r.outside_scene,
            },
        }
    }
}

/// Visible top-down area per class over the whole extent, sampled at
/// `gsd`; indexed by `SemanticClass as usize`. With `see_through_trees`,
/// vegetation is left out so the surface below it counts.
pub fn class_coverage(scene: &Scene, gsd: f64, see_through_trees: bool) -> [f64; 5] {
    let e = scene.extent;
    let cols = math::ceil(e.width / gsd) as usize;
    let rows = math::ceil(e.height / gsd) as usize;
    let frame = Frame { min: crate::geom::Vec2::ZERO, cols, rows, gsd, projection: Projection::Orthographic };
    let mut target = Target::new(cols, rows);
    target.draw(scene, &frame, None, |c| !(see_through_trees && c == SemanticClass::Vegetation));
    let mut areas = [0.0; 5];
    let px = gsd * gsd;
    for row in 0..rows {
        for col in 0..cols {
            let p = frame.sample(col, row);
            if p.x < e.width && p.y < e.height {
                areas[target.ids.classes.get(col, row) as usize] += px;
            }
        }
    }
    areas
}
