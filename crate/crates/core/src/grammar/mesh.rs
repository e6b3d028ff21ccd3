use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geom::{triangle_area, Vec3};

/// Semantic label carried by every triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[repr(u8)]
pub enum SemanticClass {
    Ground = 0,
    Building = 1,
    Roof = 2,
    Road = 3,
    Vegetation = 4,
}

impl SemanticClass {
    pub const ALL: [SemanticClass; 5] = [
        SemanticClass::Ground,
        SemanticClass::Building,
        SemanticClass::Roof,
        SemanticClass::Road,
        SemanticClass::Vegetation,
    ];

    /// Classes that make up the building label mask.
    #[inline]
    pub fn is_building(self) -> bool {
        matches!(self, SemanticClass::Building | SemanticClass::Roof)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SemanticClass::Ground => "ground",
            SemanticClass::Building => "building",
            SemanticClass::Roof => "roof",
            SemanticClass::Road => "road",
            SemanticClass::Vegetation => "vegetation",
        }
    }
}

/// Alternating darker bands along world x, e.g. for tiled roofs or crop rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stripe {
    pub period_m: f64,
    /// Multiplier applied to the color inside odd bands.
    pub shade: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub color: [u8; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stripe: Option<Stripe>,
}

impl Material {
    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Material { color: [r, g, b], stripe: None }
    }

    /// From unit-range channels, clamped.
    pub fn from_unit(r: f64, g: f64, b: f64) -> Self {
        let q = |v: f64| crate::math::round(v.clamp(0.0, 1.0) * 255.0) as u8;
        Material::rgb(q(r), q(g), q(b))
    }

    pub fn striped(mut self, period_m: f64, shade: f64) -> Self {
        self.stripe = Some(Stripe { period_m, shade });
        self
    }
}

/// Named material table.
pub type Palette = BTreeMap<String, Material>;

/// Triangle soup with one material and one semantic class per triangle.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LabeledMesh {
    pub triangles: Vec<[Vec3; 3]>,
    pub classes: Vec<SemanticClass>,
    /// Index into `materials` per triangle.
    pub material_ids: Vec<u16>,
    pub materials: Vec<Material>,
}

/// Triangles at or below this area are dropped on insertion.
pub const MIN_TRIANGLE_AREA: f64 = 1e-9;

impl LabeledMesh {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    fn intern(&mut self, m: Material) -> u16 {
        if let Some(i) = self.materials.iter().position(|x| *x == m) {
            return i as u16;
        }
        self.materials.push(m);
        (self.materials.len() - 1) as u16
    }

    /// Appends a triangle unless it is degenerate. Returns whether it was kept.
    pub fn push(&mut self, tri: [Vec3; 3], class: SemanticClass, material: Material) -> bool {
        if !(triangle_area(&tri) > MIN_TRIANGLE_AREA) {
            return false;
        }
        let id = self.intern(material);
        self.triangles.push(tri);
        self.classes.push(class);
        self.material_ids.push(id);
        true
    }

    /// Appends a quad `a b c d` as two triangles.
    pub fn push_quad(&mut self, q: [Vec3; 4], class: SemanticClass, material: Material) {
        self.push([q[0], q[1], q[2]], class, material);
        self.push([q[0], q[2], q[3]], class, material);
    }

    pub fn extend(&mut self, other: &LabeledMesh) {
        for i in 0..other.len() {
            let m = other.materials[other.material_ids[i] as usize];
            let id = self.intern(m);
            self.triangles.push(other.triangles[i]);
            self.classes.push(other.classes[i]);
            self.material_ids.push(id);
        }
    }

    pub fn material_of(&self, tri: usize) -> Material {
        self.materials[self.material_ids[tri] as usize]
    }

    pub fn count_class(&self, class: SemanticClass) -> usize {
        self.classes.iter().filter(|c| **c == class).count()
    }

    /// Signed volume by tetrahedron summation against the origin; equals
    /// the enclosed volume for a closed, outward-wound mesh.
    pub fn signed_volume(&self) -> f64 {
        self.triangles.iter().map(|t| t[0].dot(t[1].cross(t[2])) / 6.0).sum()
    }

    pub fn max_z(&self) -> f64 {
        self.triangles.iter().flat_map(|t| t.iter()).map(|p| p.z).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Projected (xy) area of the triangles of the given classes, counting
    /// only upward-facing triangles so that closed solids are not counted
    /// twice.
    pub fn projected_area(&self, pred: impl Fn(SemanticClass) -> bool) -> f64 {
        self.triangles
            .iter()
            .zip(&self.classes)
            .filter(|(_, c)| pred(**c))
            .map(|(t, _)| {
                let a = t[1].xy() - t[0].xy();
                let b = t[2].xy() - t[0].xy();
                0.5 * a.cross(b)
            })
            .filter(|a| *a > 0.0)
            .sum()
    }
}
