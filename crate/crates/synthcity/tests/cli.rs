use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use synthcity_core::dataset::{DatasetManifest, TileRecord};
use synthcity_core::geom::{Rect, Vec2};
use synthcity_core::image::Mask;

fn synthcity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synthcity")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CONFIG: &str = r#"{
  "world": {"extent_m": [120, 120], "roads": {"topology": "raster", "spacing_m": 40, "jitter": 0.2}, "style": "c", "seed": 2},
  "tile": {"image_px": 100}
}"#;

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.json");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_is_repeatable_and_seed_overridable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for out in [&a, &b] {
        let o = synthcity(&["generate", "--config", &cfg, "--out", s(out), "--workers", "2"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let manifest = |d: &Path| fs::read(d.join("manifest.jsonl")).unwrap();
    assert_eq!(manifest(&a), manifest(&b));
    let o = synthcity(&["generate", "--config", &cfg, "--out", s(&c), "--seed", "77"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_ne!(manifest(&a), manifest(&c));
    let report: serde_json::Value = serde_json::from_slice(&fs::read(a.join("report.json")).unwrap()).unwrap();
    assert!(report["km2_per_minute"].as_f64().unwrap() > 0.0);
    assert_eq!(report["tiles"], 16);

    let o = synthcity(&["stats", "--manifest", s(&a.join("manifest.jsonl"))]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stats: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stats["tiles"], 16);
    assert!((stats["area_km2"].as_f64().unwrap() - 16.0 * 30.0 * 30.0 / 1e6).abs() < 1e-9);
    let frac = stats["building_fraction"].as_f64().unwrap();
    assert!(frac > 0.0 && frac < 1.0);
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &CONFIG.replace("\"seed\"", "\"sed\""));
    let o = synthcity(&["generate", "--config", &cfg, "--out", s(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("sed"), "{}", stderr(&o));
    let cfg = write_config(dir.path(), &CONFIG.replace("\"c\"", "\"z\""));
    let o = synthcity(&["generate", "--config", &cfg, "--out", s(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("\"error\":\"config\""), "{}", stderr(&o));
    assert_eq!(code(&synthcity(&["generate"])), 2);
    assert_eq!(code(&synthcity(&["stats", "--manifest", s(&dir.path().join("missing.jsonl"))])), 1);
}

fn write_manifest(path: &Path, n: usize) {
    let records = (0..n)
        .map(|i| TileRecord {
            tile_id: format!("a-{i:05}"),
            rgb: format!("rgb/a-{i:05}.png"),
            mask: format!("mask/a-{i:05}.png"),
            style_id: "a".into(),
            world_seed: 1,
            bounds: Rect::new(Vec2::ZERO, Vec2::new(171.6, 171.6)),
            gsd_m: 0.3,
            image_px: 572,
        })
        .collect();
    fs::write(path, synthcity::manifest_io::to_jsonl(&DatasetManifest::new("big", "0", records))).unwrap();
}

#[test]
fn subsample_half_of_1640() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("manifest.jsonl");
    write_manifest(&src, 1640);
    let out = dir.path().join("half").join("manifest.jsonl");
    let o = synthcity(&["subsample", "--manifest", s(&src), "--fraction", "0.5", "--seed", "4", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = synthcity::manifest_io::read(&out).unwrap();
    assert_eq!(m.len(), 820);
    assert!(m.records[0].rgb.starts_with("../rgb/"));
    let again = dir.path().join("again.jsonl");
    synthcity(&["subsample", "--manifest", s(&src), "--fraction", "0.5", "--seed", "4", "--out", s(&again)]);
    let ids =
        |p: &Path| synthcity::manifest_io::read(p).unwrap().records.into_iter().map(|r| r.tile_id).collect::<Vec<_>>();
    assert_eq!(ids(&out), ids(&again));
    let o = synthcity(&["subsample", "--manifest", s(&src), "--fraction", "1.5", "--out", s(&again)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn batchplan_defaults_and_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let real = dir.path().join("real.txt");
    fs::write(&real, (0..155).map(|i| format!("austin{i}\n")).collect::<String>()).unwrap();
    let synth = dir.path().join("manifest.jsonl");
    write_manifest(&synth, 40);
    let plan = dir.path().join("plan.jsonl");
    let o = synthcity(&[
        "batchplan",
        "--real",
        s(&real),
        "--synth",
        s(&synth),
        "--batches",
        "500",
        "--seed",
        "3",
        "--out",
        s(&plan),
        "--model",
        "unet",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(&plan).unwrap();
    assert_eq!(text.lines().count(), 500);
    for line in text.lines() {
        let b: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(b["real"].as_array().unwrap().len(), 6);
        assert_eq!(b["synth"].as_array().unwrap().len(), 1);
        assert!(b["synth"][0].as_str().unwrap().starts_with("a-"));
    }
    let schedule: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("schedule.json")).unwrap()).unwrap();
    assert_eq!(schedule["model"], "unet");
    assert_eq!(schedule["stages"].as_array().unwrap().len(), 2);
    assert_eq!(schedule["stages"][1]["base_lr"], 2e-5);
    let o = synthcity(&["batchplan", "--real", s(&real), "--synth", s(&synth), "--out", s(&plan), "--batch-size", "8"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn eval_identical_directories_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    let (pred, gt) = (dir.path().join("pred"), dir.path().join("gt"));
    for d in [&pred, &gt] {
        fs::create_dir_all(d).unwrap();
        for (name, k) in [("austin1.png", 3), ("austin2.png", 5), ("vienna1.png", 7)] {
            let m = Mask::from_fn(32, 32, |c, r| (c * r) % k == 0);
            synthcity::imageio::write_mask(&d.join(name), &m).unwrap();
        }
    }
    let report = dir.path().join("iou.json");
    let o = synthcity(&["eval", "--pred", s(&pred), "--gt", s(&gt), "--out", s(&report)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("austin") && table.contains("vienna") && table.contains("1.0000"), "{table}");
    let r: serde_json::Value = serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
    assert_eq!(r["report"]["overall"]["iou"], 1.0);
    assert_eq!(r["report"]["strata"]["austin"]["tiles"], 2);

    fs::remove_file(pred.join("vienna1.png")).unwrap();
    let o = synthcity(&["eval", "--pred", s(&pred), "--gt", s(&gt)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("vienna1.png"), "{}", stderr(&o));
}
