use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::grammar::{GrammarError, GrammarProgram, Item, Material, Operation, Palette};

/// Palette keys every style must define.
pub const REQUIRED_KEYS: [&str; 4] = ["wall", "roof", "canopy", "trunk"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StyleError {
    #[error("unknown style preset `{0}` (expected one of a-i)")]
    UnknownPreset(String),
    #[error("style field `{field}` has invalid value {value}")]
    InvalidField { field: &'static str, value: f64 },
    #[error("palette has no entry `{0}`")]
    MissingPaletteKey(String),
    #[error("style grammar: {0}")]
    Grammar(#[from] GrammarError),
}

/// Everything needed to populate blocks in one look.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleConfig {
    pub id: String,
    pub grammar: GrammarProgram,
    pub palette: Palette,
    /// Chance that a lot receives a building.
    pub building_prob: f64,
    /// Trees per hectare of lot area.
    pub tree_density: f64,
    pub road_material: String,
    pub ground_material: String,
    pub min_lot_area_m2: f64,
    /// Inset applied to each lot before its grammar runs.
    pub lot_setback_m: f64,
    /// Range of the randomized split position along the lot's long axis.
    pub split_range: (f64, f64),
}

/// Built-in style ids.
pub const PRESET_IDS: [&str; 9] = ["a", "b", "c", "d", "e", "f", "g", "h", "i"];

struct Preset {
    id: &'static str,
    name: &'static str,
    source: &'static str,
    building_prob: f64,
    tree_density: f64,
    min_lot_area_m2: f64,
    colors: &'static [(&'static str, [u8; 3])],
    stripes: &'static [(&'static str, f64, f64)],
}

const COMMON: &[(&str, [u8; 3])] = &[("road", [72, 72, 76]), ("canopy", [58, 98, 46]), ("trunk", [92, 70, 50])];

const PRESETS: [Preset; 9] = [
    Preset {
        id: "a",
        name: "red roof",
        source: include_str!("presets/a.sg"),
        building_prob: 0.8,
        tree_density: 40.0,
        min_lot_area_m2: 450.0,
        colors: &[
            ("ground", [112, 138, 82]),
            ("wall", [222, 214, 196]),
            ("roof", [168, 62, 44]),
            ("tiles", [176, 66, 46]),
        ],
        stripes: &[("tiles", 0.6, 0.85)],
    },
    Preset {
        id: "b",
        name: "Paris",
        source: include_str!("presets/b.sg"),
        building_prob: 0.98,
        tree_density: 8.0,
        min_lot_area_m2: 700.0,
        colors: &[
            ("ground", [150, 146, 134]),
            ("wall", [214, 204, 178]),
            ("roof", [112, 118, 126]),
            ("zinc", [118, 126, 136]),
            ("stone", [216, 206, 180]),
            ("slate", [88, 94, 104]),
        ],
        stripes: &[("zinc", 0.8, 0.9)],
    },
    Preset {
        id: "c",
        name: "ancient",
        source: include_str!("presets/c.sg"),
        building_prob: 0.9,
        tree_density: 10.0,
        min_lot_area_m2: 350.0,
        colors: &[
            ("ground", [184, 164, 124]),
            ("wall", [198, 172, 128]),
            ("roof", [190, 162, 118]),
            ("sandstone", [204, 176, 130]),
        ],
        stripes: &[],
    },
    Preset {
        id: "d",
        name: "sci-fi",
        source: include_str!("presets/d.sg"),
        building_prob: 0.85,
        tree_density: 5.0,
        min_lot_area_m2: 2500.0,
        colors: &[
            ("ground", [70, 80, 92]),
            ("wall", [150, 164, 180]),
            ("roof", [190, 200, 214]),
            ("chrome", [206, 214, 226]),
            ("panel", [96, 120, 150]),
            ("pad", [60, 66, 74]),
        ],
        stripes: &[("panel", 2.0, 0.8)],
    },
    Preset {
        id: "e",
        name: "Chinese palace",
        source: include_str!("presets/e.sg"),
        building_prob: 0.9,
        tree_density: 25.0,
        min_lot_area_m2: 1500.0,
        colors: &[
            ("ground", [170, 156, 128]),
            ("wall", [160, 40, 34]),
            ("roof", [196, 150, 40]),
            ("glazed", [204, 158, 36]),
        ],
        stripes: &[("glazed", 0.5, 0.85)],
    },
    Preset {
        id: "f",
        name: "damaged",
        source: include_str!("presets/f.sg"),
        building_prob: 0.8,
        tree_density: 12.0,
        min_lot_area_m2: 500.0,
        colors: &[
            ("ground", [126, 118, 104]),
            ("wall", [150, 146, 138]),
            ("roof", [132, 128, 120]),
            ("concrete", [156, 152, 144]),
            ("rubble", [112, 104, 94]),
        ],
        stripes: &[],
    },
    Preset {
        id: "g",
        name: "Austin",
        source: include_str!("presets/g.sg"),
        building_prob: 0.7,
        tree_density: 30.0,
        min_lot_area_m2: 900.0,
        colors: &[
            ("ground", [118, 134, 84]),
            ("wall", [206, 200, 188]),
            ("roof", [176, 176, 170]),
            ("gravel", [186, 184, 176]),
            ("shingle", [96, 88, 82]),
            ("asphalt", [64, 64, 66]),
        ],
        stripes: &[("asphalt", 2.6, 0.75)],
    },
    Preset {
        id: "h",
        name: "Venice",
        source: include_str!("presets/h.sg"),
        building_prob: 0.97,
        tree_density: 3.0,
        min_lot_area_m2: 250.0,
        colors: &[
            ("ground", [150, 140, 124]),
            ("wall", [214, 170, 130]),
            ("roof", [184, 88, 56]),
            ("terracotta", [188, 92, 58]),
        ],
        stripes: &[("terracotta", 0.4, 0.85)],
    },
    Preset {
        id: "i",
        name: "modern",
        source: include_str!("presets/i.sg"),
        building_prob: 0.85,
        tree_density: 15.0,
        min_lot_area_m2: 2000.0,
        colors: &[
            ("ground", [124, 142, 96]),
            ("wall", [210, 214, 218]),
            ("roof", [226, 228, 230]),
            ("white", [232, 234, 236]),
            ("glass", [70, 104, 128]),
        ],
        stripes: &[],
    },
];

impl StyleConfig {
    /// One of the nine built-in styles `a`..`i`.
    pub fn preset(id: &str) -> Result<StyleConfig, StyleError> {
        let p = PRESETS.iter().find(|p| p.id == id).ok_or_else(|| StyleError::UnknownPreset(id.to_string()))?;
        let mut palette = Palette::new();
        for (k, c) in COMMON.iter().chain(p.colors) {
            palette.insert((*k).to_string(), Material::rgb(c[0], c[1], c[2]));
        }
        for (k, period, shade) in p.stripes {
            if let Some(m) = palette.get_mut(*k) {
                *m = m.striped(*period, *shade);
            }
        }
        let style = StyleConfig {
            id: p.id.to_string(),
            grammar: GrammarProgram::compile(p.source)?,
            palette,
            building_prob: p.building_prob,
            tree_density: p.tree_density,
            road_material: "road".into(),
            ground_material: "ground".into(),
            min_lot_area_m2: p.min_lot_area_m2,
            lot_setback_m: 2.0,
            split_range: (0.4, 0.6),
        };
        style.validate()?;
        Ok(style)
    }

    /// Descriptive name of a preset id.
    pub fn preset_name(id: &str) -> Option<&'static str> {
        PRESETS.iter().find(|p| p.id == id).map(|p| p.name)
    }

    /// Grammar source text of a preset id.
    pub fn preset_source(id: &str) -> Option<&'static str> {
        PRESETS.iter().find(|p| p.id == id).map(|p| p.source)
    }

    pub fn validate(&self) -> Result<(), StyleError> {
        let check = |field: &'static str, value: f64, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(StyleError::InvalidField { field, value })
            }
        };
        check("building_prob", self.building_prob, (0.0..=1.0).contains(&self.building_prob))?;
        check("tree_density", self.tree_density, self.tree_density >= 0.0 && self.tree_density.is_finite())?;
        check("min_lot_area_m2", self.min_lot_area_m2, self.min_lot_area_m2 > 0.0 && self.min_lot_area_m2.is_finite())?;
        check("lot_setback_m", self.lot_setback_m, self.lot_setback_m >= 0.0 && self.lot_setback_m.is_finite())?;
        let (lo, hi) = self.split_range;
        check("split_range", lo, lo > 0.0 && lo <= hi && hi < 1.0)?;
        self.grammar.link()?;
        let keys = REQUIRED_KEYS.iter().copied().chain([self.road_material.as_str(), self.ground_material.as_str()]);
        for k in keys.chain(self.textures()) {
            if !self.palette.contains_key(k) {
                return Err(StyleError::MissingPaletteKey(k.to_string()));
            }
        }
        Ok(())
    }

    /// Texture names referenced by the grammar.
    fn textures(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for rule in self.grammar.rules.values() {
            for s in &rule.successors {
                for item in &s.items {
                    if let Item::Op(Operation::Texture(t)) = item {
                        out.push(t.as_str());
                    }
                }
            }
        }
        out
    }

    pub fn material(&self, key: &str) -> Material {
        self.palette[key]
    }
}
