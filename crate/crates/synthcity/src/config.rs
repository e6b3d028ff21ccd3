//! JSON run configurations. Unknown keys are rejected; everything is
//! validated before any work starts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use synthcity_core::citygen::{StyleConfig, WorldConfig};
use synthcity_core::dataset::{SweepPolicy, SweepSpec, DEFAULT_SUBSET};
use synthcity_core::geom::Extent;
use synthcity_core::grammar::{GrammarProgram, Material};
use synthcity_core::render::{plan_camera, CameraMode, CameraSpec, Sun, DEFAULT_GSD_M, DEFAULT_IMAGE_PX};
use synthcity_core::roadnet::{RadialParams, RoadConfig, Topology};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("invalid `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
}

fn invalid(key: &'static str, e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Invalid { key, message: e.to_string() }
}

fn default_spacing() -> f64 {
    100.0
}
fn default_arterial() -> f64 {
    12.0
}
fn default_local() -> f64 {
    6.0
}

/// Street-network parameters; the extent and seed come from the world.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadsSection {
    pub topology: Topology,
    #[serde(default = "default_spacing")]
    pub spacing_m: f64,
    #[serde(default)]
    pub jitter: f64,
    #[serde(default)]
    pub radial: RadialParams,
    #[serde(default = "default_arterial")]
    pub arterial_width_m: f64,
    #[serde(default = "default_local")]
    pub local_width_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub district_m: Option<f64>,
}

impl RoadsSection {
    pub fn to_road_config(&self, extent: Extent) -> RoadConfig {
        RoadConfig {
            topology: self.topology.clone(),
            extent,
            spacing_m: self.spacing_m,
            jitter: self.jitter,
            seed: 0,
            radial: self.radial,
            arterial_width_m: self.arterial_width_m,
            local_width_m: self.local_width_m,
            district_m: self.district_m,
        }
    }
}

/// Changes applied on top of a preset style.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StyleOverrides {
    /// Name recorded in manifests instead of the preset id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// Grammar source file, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grammar_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_density: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_lot_area_m2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lot_setback_m: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub palette: BTreeMap<String, [u8; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldSection {
    /// `[width, height]` in meters.
    pub extent_m: [f64; 2],
    pub roads: RoadsSection,
    /// Preset id `a`..`i`.
    pub style: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style_overrides: Option<StyleOverrides>,
    #[serde(default)]
    pub seed: u64,
}

fn default_image_px() -> u32 {
    DEFAULT_IMAGE_PX
}
fn default_gsd() -> f64 {
    DEFAULT_GSD_M
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileSection {
    #[serde(default = "default_image_px")]
    pub image_px: u32,
    #[serde(default = "default_gsd")]
    pub gsd_m: f64,
    #[serde(default)]
    pub mode: CameraMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fov_deg: Option<f64>,
    #[serde(default)]
    pub sun: Sun,
    #[serde(default)]
    pub shadows: bool,
}

impl Default for TileSection {
    fn default() -> Self {
        TileSection {
            image_px: DEFAULT_IMAGE_PX,
            gsd_m: DEFAULT_GSD_M,
            mode: CameraMode::Orthographic,
            fov_deg: None,
            sun: Sun::default(),
            shadows: false,
        }
    }
}

impl TileSection {
    pub fn camera(&self) -> Result<CameraSpec, ConfigError> {
        let mut cam =
            plan_camera(self.gsd_m, self.image_px, self.mode, self.fov_deg).map_err(|e| invalid("tile", e))?;
        cam.sun = self.sun;
        cam.shadows = self.shadows;
        Ok(cam)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride_m: Option<f64>,
    #[serde(default)]
    pub policy: SweepPolicy,
}

impl SweepSection {
    pub fn spec(&self, extent: Extent, camera: &CameraSpec) -> Result<SweepSpec, ConfigError> {
        let s =
            SweepSpec { extent, tile_footprint_m: camera.footprint_m(), stride_m: self.stride_m, policy: self.policy };
        s.validate().map_err(|e| invalid("sweep", e))?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Also write the scene as `scene.obj`.
    #[serde(default)]
    pub export_obj: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub world: WorldSection,
    #[serde(default)]
    pub tile: TileSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_styles() -> Vec<String> {
    DEFAULT_SUBSET.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolConfig {
    pub extent_m: [f64; 2],
    pub roads: RoadsSection,
    #[serde(default = "default_styles")]
    pub styles: Vec<String>,
    pub tiles_per_style: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub tile: TileSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    parse(&text).map_err(|message| ConfigError::Schema { path: path.into(), message })
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

/// Hex SHA-256 of the canonical JSON form of `value`.
pub fn params_hash<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("config serializes");
    hex::encode(Sha256::digest(&json))
}

fn extent(e: [f64; 2]) -> Result<Extent, ConfigError> {
    if !(e[0] > 0.0 && e[1] > 0.0 && e[0].is_finite() && e[1].is_finite()) {
        return Err(invalid("extent_m", format!("{e:?} must be positive")));
    }
    Ok(Extent::new(e[0], e[1]))
}

/// Preset style with overrides applied; `base_dir` anchors `grammar_file`.
pub fn resolve_style(
    id: &str,
    overrides: Option<&StyleOverrides>,
    base_dir: &Path,
) -> Result<StyleConfig, ConfigError> {
    let mut style = StyleConfig::preset(id).map_err(|e| invalid("style", e))?;
    if let Some(o) = overrides {
        if let Some(name) = &o.id {
            style.id = name.clone();
        }
        if let Some(file) = &o.grammar_file {
            let path = base_dir.join(file);
            let src = fs::read_to_string(&path).map_err(|source| ConfigError::Io { path: path.clone(), source })?;
            style.grammar = GrammarProgram::compile(&src).map_err(|e| invalid("grammar_file", e))?;
        }
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut style.building_prob, o.building_prob);
        set(&mut style.tree_density, o.tree_density);
        set(&mut style.min_lot_area_m2, o.min_lot_area_m2);
        set(&mut style.lot_setback_m, o.lot_setback_m);
        for (k, c) in &o.palette {
            style.palette.insert(k.clone(), Material::rgb(c[0], c[1], c[2]));
        }
    }
    style.validate().map_err(|e| invalid("style_overrides", e))?;
    Ok(style)
}

/// A generate run, resolved and validated.
#[derive(Debug, Clone)]
pub struct GeneratePlan {
    pub world: WorldConfig,
    pub camera: CameraSpec,
    pub sweep: SweepSpec,
    pub params_hash: String,
    pub export_obj: bool,
    pub out_dir: Option<PathBuf>,
}

impl GenerateConfig {
    pub fn resolve(&self, base_dir: &Path) -> Result<GeneratePlan, ConfigError> {
        let extent = extent(self.world.extent_m)?;
        let roads = self.world.roads.to_road_config(extent);
        roads.validate().map_err(|e| invalid("roads", e))?;
        let style = resolve_style(&self.world.style, self.world.style_overrides.as_ref(), base_dir)?;
        let camera = self.tile.camera()?;
        let sweep = self.sweep.spec(extent, &camera)?;
        Ok(GeneratePlan {
            world: WorldConfig::new(roads, style, self.world.seed),
            camera,
            sweep,
            params_hash: params_hash(self),
            export_obj: self.output.export_obj,
            out_dir: self.output.dir.clone(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct PoolPlan {
    pub roads: RoadConfig,
    pub styles: Vec<StyleConfig>,
    pub tiles_per_style: usize,
    pub base_seed: u64,
    pub camera: CameraSpec,
    pub sweep: SweepSpec,
    pub params_hash: String,
    pub out_dir: Option<PathBuf>,
}

impl PoolConfig {
    pub fn resolve(&self, base_dir: &Path) -> Result<PoolPlan, ConfigError> {
        let extent = extent(self.extent_m)?;
        let roads = self.roads.to_road_config(extent);
        roads.validate().map_err(|e| invalid("roads", e))?;
        if self.tiles_per_style == 0 {
            return Err(invalid("tiles_per_style", "must be positive"));
        }
        if self.styles.is_empty() {
            return Err(invalid("styles", "at least one style is needed"));
        }
        let styles = self.styles.iter().map(|s| resolve_style(s, None, base_dir)).collect::<Result<Vec<_>, _>>()?;
        let camera = self.tile.camera()?;
        let sweep = self.sweep.spec(extent, &camera)?;
        Ok(PoolPlan {
            roads,
            styles,
            tiles_per_style: self.tiles_per_style,
            base_seed: self.base_seed,
            camera,
            sweep,
            params_hash: params_hash(self),
            out_dir: self.output.dir.clone(),
        })
    }
}
