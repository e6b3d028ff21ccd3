//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;
use synthcity::config::GenerateConfig;
use synthcity::export::run_generate;
use synthcity_core::citygen::{ObjectKind, Scene, SceneObject};
use synthcity_core::dataset::{
    mixed_batch_stream, sweep, tile_jobs, BatchStream, DatasetManifest, SweepSpec, DEFAULT_SUBSET,
};
use synthcity_core::eval::{dataset_stats, iou, split_benchmark, tile_area_km2};
use synthcity_core::geom::{Extent, Rect, Vec2};
use synthcity_core::grammar::{
    apply_split, derive, derive_with, DeriveContext, GrammarProgram, LabeledMesh, Material, SemanticClass, SplitError,
    SplitSize, SPLIT_TOLERANCE,
};
use synthcity_core::image::Mask;
use synthcity_core::render::{plan_camera, render_tile, CameraMode, CameraSpec, DEFAULT_GSD_M, DEFAULT_IMAGE_PX};
use synthcity_core::rng::{self, Stream};
use synthcity_core::roadnet::{extract_blocks, generate_roads, validate_graph, RoadConfig, Topology};
use synthcity_core::StyleConfig;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(seed: u64) -> Stream {
    rng::stream(seed, &[0xacce])
}

fn iou_oracle() -> Outcome {
    let mut r = rng(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (pa, pb) = (r.gen::<u8>(), r.gen::<u8>());
        let a: Vec<bool> = (0..64 * 64).map(|_| r.gen::<u8>() < pa).collect();
        let b: Vec<bool> = (0..64 * 64).map(|_| r.gen::<u8>() < pb).collect();
        let pred = Mask::from_fn(64, 64, |c, row| a[row * 64 + c]);
        let gt = Mask::from_fn(64, 64, |c, row| b[row * 64 + c]);
        let got = iou(&pred, &gt).expect("same size");
        let (mut inter, mut union) = (0u32, 0u32);
        for i in 0..64 * 64 {
            inter += (a[i] && b[i]) as u32;
            union += (a[i] || b[i]) as u32;
        }
        let want = if union == 0 { 1.0 } else { inter as f64 / union as f64 };
        worst = worst.max((got - want).abs());
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-12 && t < Duration::from_secs(5),
        format!("max |Δ| = {worst:.1e}, {:.2}s (limit 5s)", t.as_secs_f64()),
    )
}

fn prism(r: Rect, h: f64) -> LabeledMesh {
    let grey = Material::rgb(128, 128, 128);
    let mut m = LabeledMesh::new();
    let [a, b, c, d] = r.corners();
    m.push_quad([a.extend(h), b.extend(h), c.extend(h), d.extend(h)], SemanticClass::Roof, grey);
    let ring = [a, b, c, d];
    for i in 0..4 {
        let (p, q) = (ring[i], ring[(i + 1) % 4]);
        m.push_quad([p.extend(0.0), q.extend(0.0), q.extend(h), p.extend(h)], SemanticClass::Building, grey);
    }
    m
}

fn render_pixel_count() -> Outcome {
    let mut r = rng(2);
    let g = 0.3;
    let (side, cells) = (120.0, 4);
    let cell = side / cells as f64;
    let cam = plan_camera(g, 400, CameraMode::Orthographic, None).unwrap().at(Vec2::new(side / 2.0, side / 2.0));
    let start = Instant::now();
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mut scene = Scene::empty(Extent::new(side, side), "prisms", 0, Material::rgb(90, 120, 60));
        let (mut area, mut perimeter) = (0.0, 0.0);
        let count = r.gen_range(1..=8);
        for k in 0..count {
            let (cx, cy) = ((k % cells) as f64 * cell, (k / cells) as f64 * cell);
            let (w, h) = (r.gen_range(1.0..cell - 2.0), r.gen_range(1.0..cell - 2.0));
            let x0 = cx + 1.0 + r.gen_range(0.0..cell - 2.0 - w);
            let y0 = cy + 1.0 + r.gen_range(0.0..cell - 2.0 - h);
            let rect = Rect::new(Vec2::new(x0, y0), Vec2::new(x0 + w, y0 + h));
            scene
                .objects
                .push(SceneObject { kind: ObjectKind::Building { lot: k }, mesh: prism(rect, r.gen_range(2.0..40.0)) });
            area += w * h;
            perimeter += 2.0 * (w + h);
        }
        let tile = render_tile(&scene, &cam);
        let n = tile.ids.count(SemanticClass::is_building) as f64;
        let dev = (n - area / (g * g)).abs();
        worst = worst.max(dev / (perimeter / g));
        if dev > perimeter / g {
            failures += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        failures == 0 && t < Duration::from_secs(30),
        format!(
            "{failures}/50 scenes outside the band, worst |Δ| = {worst:.3}·P/g, {:.2}s (limit 30s)",
            t.as_secs_f64()
        ),
    )
}

fn planar_suite() -> Outcome {
    let topologies = [Topology::Raster, Topology::Radial, Topology::Organic];
    let mut bad = Vec::new();
    for seed in 0..100u64 {
        let topo = topologies[seed as usize % 3].clone();
        let mut cfg = RoadConfig::new(topo.clone(), Extent::new(600.0 + 5.0 * seed as f64, 500.0), 90.0);
        cfg.seed = seed;
        cfg.jitter = 0.3;
        match generate_roads(&cfg) {
            Ok(g) => {
                let v = validate_graph(&g);
                if !(v.planar() && v.euler_ok) {
                    bad.push(format!("{topo:?} seed {seed}"));
                }
            }
            Err(e) => bad.push(format!("{topo:?} seed {seed}: {e}")),
        }
    }
    let mut lattice_bad = Vec::new();
    for (n, m) in [(1, 1), (3, 4), (5, 2), (6, 6), (10, 7)] {
        let cfg = RoadConfig::new(Topology::Raster, Extent::new(100.0 * n as f64, 100.0 * m as f64), 100.0);
        let blocks = generate_roads(&cfg).and_then(|g| extract_blocks(&g)).map(|b| b.len());
        if blocks != Ok(n * m) {
            lattice_bad.push(format!("{n}x{m} → {blocks:?}"));
        }
    }
    outcome(
        bad.is_empty() && lattice_bad.is_empty(),
        format!(
            "{} of 100 graphs fail planarity/Euler {:?}; lattice mismatches {:?}",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>(),
            lattice_bad
        ),
    )
}

fn split_arithmetic() -> Outcome {
    let mut r = rng(4);
    let (mut sum_bad, mut err_bad) = (0, 0);
    for _ in 0..10_000 {
        let len = r.gen_range(0.5..200.0);
        let n = r.gen_range(1..7);
        let spec: Vec<SplitSize> = match r.gen_range(0..3) {
            0 => (0..n)
                .map(|_| {
                    if r.gen_bool(0.5) {
                        SplitSize::Absolute(r.gen_range(0.0..len / 2.0))
                    } else {
                        SplitSize::Relative(r.gen_range(0.1..5.0))
                    }
                })
                .collect(),
            1 => (0..n).map(|_| SplitSize::Absolute(r.gen_range(0.0..len))).collect(),
            _ => {
                let step = len / n as f64;
                (0..n).map(|_| SplitSize::Absolute(step)).collect()
            }
        };
        let abs: f64 = spec.iter().map(|s| if let SplitSize::Absolute(v) = s { *v } else { 0.0 }).sum();
        let has_rel = spec.iter().any(|s| matches!(s, SplitSize::Relative(_)));
        let expect_over = abs > len * (1.0 + SPLIT_TOLERANCE);
        let expect_under = !expect_over && !has_rel && abs < len * (1.0 - SPLIT_TOLERANCE);
        match apply_split(len, &spec) {
            Ok(out) => {
                if expect_over || expect_under {
                    err_bad += 1;
                }
                let total = out.iter().fold(0.0, |a, &x| a + x);
                if total != len || out.len() != spec.len() {
                    sum_bad += 1;
                }
            }
            Err(SplitError::Overflow { .. }) if expect_over => {}
            Err(SplitError::Underflow { .. }) if expect_under => {}
            Err(_) => err_bad += 1,
        }
    }
    outcome(
        sum_bad == 0 && err_bad == 0,
        format!("10000 cases: {sum_bad} inexact sums, {err_bad} wrong error decisions"),
    )
}

fn grammar_determinism() -> Outcome {
    let lot = [Vec2::new(0.0, 0.0), Vec2::new(24.0, 0.0), Vec2::new(24.0, 16.0), Vec2::new(0.0, 16.0)];
    let mut mismatches = 0;
    for id in synthcity_core::citygen::PRESET_IDS {
        let style = StyleConfig::preset(id).unwrap();
        for seed in 0..10 {
            if derive(&lot, &style.grammar, seed) != derive(&lot, &style.grammar, seed) {
                mismatches += 1;
            }
        }
    }
    let p = GrammarProgram::compile("Lot --> 30%: B 70%: C\nterminal B, C").unwrap();
    let ctx = DeriveContext::default();
    let first = (0..10_000u64).filter(|&s| derive_with(&lot, &p, s, &ctx).unwrap().choices[0].1 == 0).count();
    let f = first as f64 / 10_000.0;
    outcome(
        mismatches == 0 && (f - 0.3).abs() <= 0.02,
        format!("{mismatches} nondeterministic derivations of 90; 0.3 branch frequency {f:.4} (±0.02)"),
    )
}

fn throughput() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let workers = rayon::ThreadPoolBuilder::new().build().unwrap();
    let mut lines = Vec::new();
    let mut worst = 0.0f64;
    for style in DEFAULT_SUBSET {
        let text = format!(
            r#"{{"world": {{"extent_m": [1000, 1000], "roads": {{"topology": "raster", "jitter": 0.15}}, "style": "{style}", "seed": 1}}}}"#
        );
        let cfg: GenerateConfig = synthcity::config::parse(&text).unwrap();
        let plan = cfg.resolve(Path::new(".")).unwrap();
        let start = Instant::now();
        let report = run_generate(&plan, &dir.path().join(style), &workers).unwrap();
        let t = start.elapsed().as_secs_f64();
        worst = worst.max(t);
        lines.push(format!("{style} {t:.1}s/{}tiles", report.tiles));
    }
    outcome(worst <= 300.0, format!("1 km² per style: {} (limit 300s each)", lines.join(", ")))
}

fn dataset_scale() -> Outcome {
    let cam = CameraSpec::default_tile();
    let sw = sweep(&SweepSpec::new(Extent::new(7500.0, 7500.0), cam.footprint_m())).unwrap();
    let records: Vec<_> = tile_jobs(&sw, &cam, "a", 0, Some(1640)).iter().map(|j| j.record("a", 0)).collect();
    let m = DatasetManifest::new("scale", "0", records);
    let s = dataset_stats(&m, std::iter::repeat_n(None, m.len()));
    let rounded = (s.area_km2 * 10.0).round() / 10.0;
    let rel = (s.area_km2 - 47.0).abs() / 47.0;
    let defaults = DEFAULT_IMAGE_PX == 572 && DEFAULT_GSD_M == 0.3 && cam.image_px == 572 && cam.gsd_m == 0.3;
    let per_tile = tile_area_km2(&m.records[0]);
    outcome(
        m.len() == 1640 && rounded == 48.3 && rel <= 0.05 && defaults,
        format!(
            "{} tiles × {per_tile:.6} km² = {:.2} km² ({:+.1}% vs 47); tile {}px at {} m/px",
            m.len(),
            s.area_km2,
            100.0 * (s.area_km2 - 47.0) / 47.0,
            cam.image_px,
            cam.gsd_m
        ),
    )
}

fn mixed_batches() -> Outcome {
    let real: Vec<String> = (0..155).map(|i| format!("real{i}")).collect();
    let synth: Vec<String> = (0..1640).map(|i| format!("syn{i}")).collect();
    let stream = mixed_batch_stream(real.clone(), synth.clone(), BatchStream::with_seed(11)).unwrap();
    let mut counts: BTreeMap<&str, u64> = real.iter().map(|s| (s.as_str(), 0)).collect();
    let mut bad = 0;
    let mut imbalance = 0;
    let mut emitted = 0u64;
    for b in stream.take(100_000) {
        emitted += 1;
        if b.real.len() != 6
            || b.synth.len() != 1
            || !b.real.iter().all(|id| id.starts_with("real"))
            || !b.synth[0].starts_with("syn")
        {
            bad += 1;
        }
        for id in &b.real {
            *counts.get_mut(id.as_str()).unwrap() += 1;
        }
        if (emitted * 6).is_multiple_of(155) {
            let (lo, hi) = (counts.values().min().unwrap(), counts.values().max().unwrap());
            imbalance = imbalance.max(hi - lo);
        }
    }
    let (lo, hi) = (counts.values().min().unwrap(), counts.values().max().unwrap());
    outcome(
        emitted == 100_000 && bad == 0 && imbalance <= 1 && hi - lo <= 1,
        format!("{emitted} batches, {bad} malformed; spread {imbalance} at epoch ends, {} at the end", hi - lo),
    )
}

fn split_rule() -> Outcome {
    let regions: Vec<(String, Vec<String>)> =
        (0..5).map(|r| (format!("city{r}"), (1..=36).map(|t| format!("city{r}-{t}")).collect())).collect();
    let s = split_benchmark(&regions, 5).unwrap();
    let pct = (s.test_fraction() * 100.0).round();
    outcome(
        s.test.len() == 25 && s.train.len() == 155 && pct == 14.0,
        format!("{}/{} split, test fraction {:.2}% → {pct}%", s.test.len(), s.train.len(), 100.0 * s.test_fraction()),
    )
}

fn camera_round_trip() -> Outcome {
    let mut r = rng(10);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let g = r.gen_range(0.05..2.0);
        let w = r.gen_range(64..4096u32);
        let (mode, fov) = if i % 2 == 0 {
            (CameraMode::Perspective, Some(r.gen_range(1.0..150.0)))
        } else {
            (CameraMode::Orthographic, None)
        };
        let cam = plan_camera(g, w, mode, fov).unwrap();
        worst = worst.max((cam.gsd() - g).abs() / g);
    }
    outcome(worst <= 1e-9, format!("1000 triples, max relative error {worst:.1e} (limit 1e-9)"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("iou-oracle", iou_oracle),
        ("render-pixel-count", render_pixel_count),
        ("planar-graph-suite", planar_suite),
        ("split-arithmetic", split_arithmetic),
        ("grammar-determinism", grammar_determinism),
        ("throughput", throughput),
        ("dataset-scale", dataset_scale),
        ("mixed-batches", mixed_batches),
        ("split-rule", split_rule),
        ("camera-round-trip", camera_round_trip),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
