use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::citygen::{ObjectKind, Scene, SceneObject};
use crate::geom::{Extent, Rect, Vec2, Vec3};
use crate::grammar::{LabeledMesh, Material, SemanticClass};
use crate::image::Raster;

const GREY: Material = Material::rgb(128, 128, 128);

fn ground_scene(side: f64) -> Scene {
    Scene::empty(Extent::new(side, side), "t", 0, Material::rgb(90, 120, 60))
}

/// Closed box over `r` from z = 0 to `h`: Building walls, Roof top.
fn prism(r: Rect, h: f64) -> LabeledMesh {
    let mut m = LabeledMesh::new();
    let [a, b, c, d] = r.corners();
    m.push_quad([a.extend(h), b.extend(h), c.extend(h), d.extend(h)], SemanticClass::Roof, GREY);
    let ring = [a, b, c, d];
    for i in 0..4 {
        let (p, q) = (ring[i], ring[(i + 1) % 4]);
        m.push_quad([p.extend(0.0), q.extend(0.0), q.extend(h), p.extend(h)], SemanticClass::Building, GREY);
    }
    m
}

fn with_buildings(side: f64, boxes: &[(Rect, f64)]) -> Scene {
    let mut s = ground_scene(side);
    for (k, &(r, h)) in boxes.iter().enumerate() {
        s.objects.push(SceneObject { kind: ObjectKind::Building { lot: k }, mesh: prism(r, h) });
    }
    s
}

fn ortho(g: f64, w: u32, center: Vec2) -> CameraSpec {
    plan_camera(g, w, CameraMode::Orthographic, None).unwrap().at(center)
}

#[test]
fn empty_scene_is_all_ground() {
    let s = ground_scene(100.0);
    let r = render_tile(&s, &ortho(0.5, 100, Vec2::new(50.0, 50.0)));
    assert!(!r.outside_scene);
    assert_eq!(r.ids.count(|c| c == SemanticClass::Ground), 100 * 100);
    assert_eq!(extract_mask(&r.ids).count_foreground(), 0);
    // the ground plane itself is instance 1
    assert!(r.ids.instances.pixels().iter().all(|&i| i == 1));
}

#[test]
fn centered_ten_meter_roof() {
    let s = with_buildings(30.0, &[(Rect::new(Vec2::new(10.0, 10.0), Vec2::new(20.0, 20.0)), 6.0)]);
    let r = render_tile(&s, &ortho(0.3, 100, Vec2::new(15.0, 15.0)));
    let n = r.ids.count(|c| c.is_building());
    // sample centers (k + 0.5)·0.3 inside [10, 20] for k = 33..=66 on both axes
    let oracle = (33..=66).count() * (33..=66).count();
    assert_eq!(n, oracle);
    assert_eq!(n, 1156);
    let analytic = 100.0 / 0.09;
    assert!((n as f64 - analytic).abs() <= 40.0 / 0.3);
}

#[test]
fn taller_box_wins_the_overlap() {
    let low = Rect::new(Vec2::new(5.0, 5.0), Vec2::new(20.0, 20.0));
    let high = Rect::new(Vec2::new(12.0, 12.0), Vec2::new(25.0, 25.0));
    for boxes in [[(low, 5.0), (high, 15.0)], [(high, 15.0), (low, 5.0)]] {
        let s = with_buildings(30.0, &boxes);
        let tall = if boxes[0].1 == 15.0 { 2 } else { 3 };
        let r = render_tile(&s, &ortho(0.3, 100, Vec2::new(15.0, 15.0)));
        let f = Frame::ortho_for(&ortho(0.3, 100, Vec2::new(15.0, 15.0)));
        let mut overlap = 0;
        for row in 0..100 {
            for col in 0..100 {
                let p = f.sample(col, row);
                if p.x > 12.0 && p.x < 20.0 && p.y > 12.0 && p.y < 20.0 {
                    overlap += 1;
                    assert_eq!(r.ids.instances.get(col, row), tall);
                }
            }
        }
        assert!(overlap > 0);
    }
}

#[test]
fn mask_counts_match_ids() {
    let mut ids = IdBuffer::background(100, 100);
    let mut expected = 0;
    for i in 0..10_000usize {
        let class = SemanticClass::ALL[(i * 7 + i / 13) % 5];
        if class.is_building() {
            expected += 1;
        }
        ids.classes.set(i % 100, i / 100, class);
    }
    assert_eq!(extract_mask(&ids).count_foreground(), expected);

    let mut ids = IdBuffer::background(100, 100);
    for i in 0..4000 {
        ids.classes.set(i % 100, i / 100, if i % 2 == 0 { SemanticClass::Building } else { SemanticClass::Roof });
    }
    let mask = extract_mask(&ids);
    assert_eq!(mask.count_foreground(), 4000);
    assert!(mask.check_binary().is_ok());

    let mut permuted = ids.clone();
    permuted.instances = ids.instances.map(|i| 977 - i);
    assert_eq!(extract_mask(&permuted), mask);
}

#[test]
fn camera_off_the_world() {
    let s = with_buildings(50.0, &[(Rect::new(Vec2::new(10.0, 10.0), Vec2::new(20.0, 20.0)), 6.0)]);
    let r = render_tile(&s, &ortho(0.3, 50, Vec2::new(500.0, 500.0)));
    assert!(r.outside_scene);
    assert_eq!(r.ids, IdBuffer::background(50, 50));
}

#[test]
fn perspective_enlarges_roofs() {
    let s = with_buildings(60.0, &[(Rect::new(Vec2::new(20.0, 20.0), Vec2::new(40.0, 40.0)), 30.0)]);
    let o = render_tile(&s, &ortho(0.3, 200, Vec2::new(30.0, 30.0)));
    let cam = plan_camera(0.3, 200, CameraMode::Perspective, Some(10.0)).unwrap().at(Vec2::new(30.0, 30.0));
    let p = render_tile(&s, &cam);
    let roof = |r: &Rendered| r.ids.count(|c| c == SemanticClass::Roof);
    // roof at 30 m seen from h: scale h / (h - 30)
    let scale = cam.height_m / (cam.height_m - 30.0);
    let expected = 400.0 * scale * scale / 0.09;
    assert!(roof(&p) > roof(&o));
    assert!((roof(&p) as f64 - expected).abs() < 80.0 * scale / 0.3);
}

#[test]
fn shadows_fall_away_from_the_sun() {
    let s = with_buildings(60.0, &[(Rect::new(Vec2::new(25.0, 25.0), Vec2::new(35.0, 35.0)), 10.0)]);
    let mut cam = ortho(0.5, 120, Vec2::new(30.0, 30.0));
    let plain = render_tile(&s, &cam);
    cam.shadows = true;
    let shaded = render_tile(&s, &cam);
    assert_eq!(plain.ids, shaded.ids);
    let f = Frame::ortho_for(&cam);
    let mut darker = 0;
    for row in 0..120 {
        for col in 0..120 {
            if plain.rgb.get(col, row) != shaded.rgb.get(col, row) {
                darker += 1;
                let p = f.sample(col, row);
                // sun in the south-east: shade lies north-west of the box
                assert!(p.x < 35.0 && p.y > 25.0, "{p:?}");
            }
        }
    }
    assert!(darker > 100);
}

#[test]
fn coverage_partitions_the_extent() {
    let s = with_buildings(40.0, &[(Rect::new(Vec2::new(10.0, 10.0), Vec2::new(20.0, 30.0)), 8.0)]);
    let a = class_coverage(&s, 0.25, true);
    assert!((a.iter().sum::<f64>() - 1600.0).abs() < 1e-9);
    assert!((a[SemanticClass::Roof as usize] - 200.0).abs() < 1e-9);
}

#[test]
fn rendering_is_repeatable() {
    let s = with_buildings(60.0, &[(Rect::new(Vec2::new(3.0, 7.0), Vec2::new(41.0, 22.0)), 12.0)]);
    let cam = ortho(0.3, 150, Vec2::new(25.0, 25.0));
    assert_eq!(render_tile(&s, &cam), render_tile(&s, &cam));
}

impl Frame {
    fn ortho_for(cam: &CameraSpec) -> Frame {
        let b = cam.bounds();
        Frame {
            min: b.min,
            cols: cam.image_px as usize,
            rows: cam.image_px as usize,
            gsd: cam.gsd_m,
            projection: raster::Projection::Orthographic,
        }
    }
}

use raster::Frame;

/// Brute force: the highest triangle whose interior holds the sample point.
fn oracle(tris: &[[Vec3; 3]], p: Vec2) -> Option<Option<usize>> {
    let mut best: Option<(usize, f64)> = None;
    for (k, t) in tris.iter().enumerate() {
        let (a, b, c) = (t[0].xy(), t[1].xy(), t[2].xy());
        let area = (b - a).cross(c - a);
        let l0 = (b - p).cross(c - p) / area;
        let l1 = (c - p).cross(a - p) / area;
        let l2 = 1.0 - l0 - l1;
        let m = l0.min(l1).min(l2);
        if m.abs() < 1e-9 {
            return None; // too close to an edge to be decisive
        }
        if m > 0.0 {
            let z = l0 * t[0].z + l1 * t[1].z + l2 * t[2].z;
            if let Some((_, bz)) = best {
                if (z - bz).abs() < 1e-9 {
                    return None;
                }
            }
            if best.is_none_or(|(_, bz)| z > bz) {
                best = Some((k, z));
            }
        }
    }
    Some(best.map(|(k, _)| k))
}

fn tri_strategy() -> impl Strategy<Value = [Vec3; 3]> {
    let v = (0.0..20.0f64, 0.0..20.0f64, 0.0..10.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z));
    [v.clone(), v.clone(), v]
}

proptest! {
    #[test]
    fn nearest_triangle_wins(a in tri_strategy(), b in tri_strategy()) {
        let tris = [a, b];
        let frame = Frame { min: Vec2::ZERO, cols: 40, rows: 40, gsd: 0.5, projection: raster::Projection::Orthographic };
        let mut depth = vec![f64::NEG_INFINITY; 1600];
        let mut winner: Vec<Option<usize>> = vec![None; 1600];
        for (k, t) in tris.iter().enumerate() {
            frame.rasterize(t, |f| {
                let i = f.row * 40 + f.col;
                if f.nearness > depth[i] {
                    depth[i] = f.nearness;
                    winner[i] = Some(k);
                }
            });
        }
        for row in 0..40 {
            for col in 0..40 {
                if let Some(expected) = oracle(&tris, frame.sample(col, row)) {
                    prop_assert_eq!(winner[row * 40 + col], expected, "pixel {} {}", col, row);
                }
            }
        }
    }

    #[test]
    fn prism_pixels_within_perimeter_band(
        x0 in 1.0..30.0f64, y0 in 1.0..30.0f64, w in 1.0..25.0f64, h in 1.0..25.0f64, z in 2.0..40.0f64,
    ) {
        let r = Rect::new(Vec2::new(x0, y0), Vec2::new(x0 + w, y0 + h));
        let s = with_buildings(60.0, &[(r, z)]);
        let tile = render_tile(&s, &ortho(0.3, 200, Vec2::new(30.0, 30.0)));
        let n = tile.ids.count(|c| c.is_building()) as f64;
        let g = 0.3;
        prop_assert!((n - w * h / (g * g)).abs() <= 2.0 * (w + h) / g);
    }
}

#[test]
fn ids_raster_shapes() {
    let ids = IdBuffer::background(3, 2);
    assert_eq!((ids.width(), ids.height()), (3, 2));
    let _: &Raster<u32> = &ids.instances;
}
