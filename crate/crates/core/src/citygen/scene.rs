use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use serde::{Deserialize, Serialize};

use crate::geom::{Extent, Vec2};
use crate::grammar::{LabeledMesh, SemanticClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObjectKind {
    Ground,
    Roads,
    Building { lot: usize },
    Tree { lot: usize },
}

impl ObjectKind {
    pub fn name(&self) -> &'static str {
        match self {
            ObjectKind::Ground => "ground",
            ObjectKind::Roads => "roads",
            ObjectKind::Building { .. } => "building",
            ObjectKind::Tree { .. } => "tree",
        }
    }
}

/// One mesh of the scene; its instance id is its index plus one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub kind: ObjectKind,
    pub mesh: LabeledMesh,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lot {
    pub id: usize,
    pub block: usize,
    pub polygon: Vec<Vec2>,
    pub area_m2: f64,
    /// Region handed to the grammar (lot inset by the setback), if a
    /// building was attempted.
    pub building_region: Option<Vec<Vec2>>,
    pub has_building: bool,
    pub trees: usize,
}

/// A lot whose derivation failed; it was left as ground.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LotFailure {
    pub lot: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedBlock {
    pub block: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub extent: Extent,
    pub style_id: String,
    pub world_seed: u64,
    pub objects: Vec<SceneObject>,
    pub lots: Vec<Lot>,
    pub failures: Vec<LotFailure>,
    pub skipped_blocks: Vec<SkippedBlock>,
}

impl Scene {
    /// A scene holding only the ground plane.
    pub fn empty(extent: Extent, style_id: &str, world_seed: u64, ground: crate::grammar::Material) -> Scene {
        let mut mesh = LabeledMesh::new();
        let [a, b, c, d] = extent.rect().corners();
        mesh.push_quad([a.extend(0.0), b.extend(0.0), c.extend(0.0), d.extend(0.0)], SemanticClass::Ground, ground);
        Scene {
            extent,
            style_id: style_id.into(),
            world_seed,
            objects: alloc::vec![SceneObject { kind: ObjectKind::Ground, mesh }],
            lots: Vec::new(),
            failures: Vec::new(),
            skipped_blocks: Vec::new(),
        }
    }

    pub fn triangle_count(&self) -> usize {
        self.objects.iter().map(|o| o.mesh.len()).sum()
    }

    pub fn count_class(&self, class: SemanticClass) -> usize {
        self.objects.iter().map(|o| o.mesh.count_class(class)).sum()
    }

    pub fn buildings(&self) -> impl Iterator<Item = (usize, &SceneObject)> {
        self.objects.iter().enumerate().filter(|(_, o)| matches!(o.kind, ObjectKind::Building { .. }))
    }

    pub fn building_count(&self) -> usize {
        self.buildings().count()
    }

    /// Wavefront OBJ text: one `o` group per object, faces grouped by
    /// semantic class, vertex colors appended to `v` lines.
    pub fn write_obj(&self, out: &mut impl Write) -> fmt::Result {
        writeln!(out, "# synthcity scene style={} seed={}", self.style_id, self.world_seed)?;
        writeln!(out, "# extent {} x {} m", self.extent.width, self.extent.height)?;
        let mut base = 1usize;
        for (k, obj) in self.objects.iter().enumerate() {
            let m = &obj.mesh;
            writeln!(out, "o {}_{}", obj.kind.name(), k + 1)?;
            for (i, t) in m.triangles.iter().enumerate() {
                let c = m.material_of(i).color;
                for v in t {
                    writeln!(
                        out,
                        "v {} {} {} {:.4} {:.4} {:.4}",
                        v.x,
                        v.y,
                        v.z,
                        c[0] as f64 / 255.0,
                        c[1] as f64 / 255.0,
                        c[2] as f64 / 255.0
                    )?;
                }
            }
            for class in SemanticClass::ALL {
                let mut any = false;
                for i in 0..m.len() {
                    if m.classes[i] != class {
                        continue;
                    }
                    if !any {
                        writeln!(out, "g {}", class.as_str())?;
                        any = true;
                    }
                    let v = base + 3 * i;
                    writeln!(out, "f {} {} {}", v, v + 1, v + 2)?;
                }
            }
            base += 3 * m.len();
        }
        Ok(())
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        self.write_obj(&mut s).expect("writing to a String cannot fail");
        s
    }
}
