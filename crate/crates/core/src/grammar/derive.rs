use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use super::ast::*;
use super::mesh::{LabeledMesh, Material, Palette, SemanticClass};
use super::split::{apply_split, SplitError, SplitSize};
use super::GrammarError;
use crate::geom::{
    inset_polygon, is_simple, min_area_rect, polygon_area, signed_area, split_polygon, triangulate, OrientedRect,
    TriangulationError, Vec2, Vec3,
};
use crate::math;
use crate::rng::{self, Stream};

pub const DEFAULT_MAX_DEPTH: usize = 64;
pub const DEFAULT_MAX_SHAPES: usize = 100_000;
const DEFAULT_PITCH_DEG: f64 = 30.0;
const MAX_PITCH_DEG: f64 = 80.0;
/// Terminal footprints sit this far above the ground plane.
const FOOTPRINT_LIFT: f64 = 0.02;
const START: &str = "Lot";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeriveError {
    #[error(transparent)]
    Link(#[from] GrammarError),
    #[error("the program has no rule for the start symbol `Lot`")]
    EmptyDerivation,
    #[error("lot polygon is not simple")]
    InvalidLot,
    #[error("rule `{symbol}` nested deeper than {depth}")]
    RecursionLimitExceeded { symbol: String, depth: usize },
    #[error("derivation produced more than {limit} shapes")]
    ShapeBudgetExceeded { limit: usize },
    #[error("`{op}` cannot be applied to a {scope} shape")]
    InvalidScope { op: &'static str, scope: &'static str },
    #[error("`{op}` got invalid value {value}")]
    InvalidArgument { op: &'static str, value: f64 },
    #[error("texture `{0}` is not in the palette")]
    UnknownTexture(String),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// Materials and limits for a derivation.
#[derive(Debug, Clone)]
pub struct DeriveContext<'a> {
    pub palette: Option<&'a Palette>,
    /// Used for building-class triangles without an explicit material.
    pub wall: Material,
    pub roof: Material,
    pub ground: Material,
    pub max_depth: usize,
    pub max_shapes: usize,
}

impl Default for DeriveContext<'_> {
    fn default() -> Self {
        DeriveContext {
            palette: None,
            wall: Material::rgb(200, 196, 188),
            roof: Material::rgb(150, 60, 50),
            ground: Material::rgb(120, 140, 90),
            max_depth: DEFAULT_MAX_DEPTH,
            max_shapes: DEFAULT_MAX_SHAPES,
        }
    }
}

impl DeriveContext<'_> {
    fn default_material(&self, class: SemanticClass) -> Material {
        match class {
            SemanticClass::Roof => self.roof,
            SemanticClass::Ground | SemanticClass::Road | SemanticClass::Vegetation => self.ground,
            SemanticClass::Building => self.wall,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub mesh: LabeledMesh,
    /// `(symbol, successor index)` for every stochastic rule application,
    /// in derivation order.
    pub choices: Vec<(String, usize)>,
    /// Shapes processed.
    pub shapes: usize,
}

/// Oriented box of a shape: `origin` plus `size[k]` along `axes[k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scope {
    pub origin: Vec3,
    pub axes: [Vec3; 3],
    pub size: Vec3,
}

#[derive(Debug, Clone)]
enum Geometry {
    /// Horizontal polygon that has not been extruded.
    Footprint {
        poly: Vec<Vec2>,
        z: f64,
    },
    Top {
        poly: Vec<Vec2>,
        z: f64,
    },
    Bottom {
        poly: Vec<Vec2>,
        z: f64,
    },
    Mass {
        poly: Vec<Vec2>,
        base: f64,
        height: f64,
    },
    /// Vertical rectangle; outward normal is `along` turned clockwise.
    Facade {
        origin: Vec3,
        along: Vec2,
        width: f64,
        height: f64,
    },
    Roof {
        tris: Vec<([Vec3; 3], SemanticClass)>,
    },
}

impl Geometry {
    fn kind(&self) -> &'static str {
        match self {
            Geometry::Footprint { .. } => "footprint",
            Geometry::Top { .. } => "top",
            Geometry::Bottom { .. } => "bottom",
            Geometry::Mass { .. } => "mass",
            Geometry::Facade { .. } => "facade",
            Geometry::Roof { .. } => "roof",
        }
    }

    /// Horizontal polygon and its height, for the flat kinds.
    fn flat(&self) -> Option<(&[Vec2], f64)> {
        match self {
            Geometry::Footprint { poly, z } | Geometry::Top { poly, z } | Geometry::Bottom { poly, z } => {
                Some((poly, *z))
            }
            _ => None,
        }
    }

    fn with_poly(&self, poly: Vec<Vec2>) -> Geometry {
        match *self {
            Geometry::Footprint { z, .. } => Geometry::Footprint { poly, z },
            Geometry::Top { z, .. } => Geometry::Top { poly, z },
            Geometry::Bottom { z, .. } => Geometry::Bottom { poly, z },
            Geometry::Mass { base, height, .. } => Geometry::Mass { poly, base, height },
            _ => unreachable!("only polygonal geometry is rebuilt"),
        }
    }

    fn polygon(&self) -> Option<&[Vec2]> {
        match self {
            Geometry::Footprint { poly, .. }
            | Geometry::Top { poly, .. }
            | Geometry::Bottom { poly, .. }
            | Geometry::Mass { poly, .. } => Some(poly),
            _ => None,
        }
    }

    fn scope(&self) -> Scope {
        let frame = |poly: &[Vec2], z: f64, h: f64| {
            let r = min_area_rect(poly).unwrap_or(OrientedRect {
                center: poly.first().copied().unwrap_or(Vec2::ZERO),
                major: Vec2::new(1.0, 0.0),
                minor: Vec2::new(0.0, 1.0),
                half_major: 0.0,
                half_minor: 0.0,
            });
            Scope {
                origin: r.origin().extend(z),
                axes: [r.major.extend(0.0), r.minor.extend(0.0), Vec3::Z],
                size: Vec3::new(2.0 * r.half_major, 2.0 * r.half_minor, h),
            }
        };
        match self {
            Geometry::Footprint { poly, z } | Geometry::Top { poly, z } | Geometry::Bottom { poly, z } => {
                frame(poly, *z, 0.0)
            }
            Geometry::Mass { poly, base, height } => frame(poly, *base, *height),
            Geometry::Facade { origin, along, width, height } => Scope {
                origin: *origin,
                axes: [along.extend(0.0), Vec3::Z, Vec3::new(along.y, -along.x, 0.0)],
                size: Vec3::new(*width, *height, 0.0),
            },
            Geometry::Roof { tris } => {
                let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
                let mut hi = -lo;
                for p in tris.iter().flat_map(|(t, _)| t.iter()) {
                    lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
                    hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
                }
                if tris.is_empty() {
                    lo = Vec3::ZERO;
                    hi = Vec3::ZERO;
                }
                Scope { origin: lo, axes: [Vec3::X, Vec3::Y, Vec3::Z], size: hi - lo }
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Shape<'p> {
    symbol: &'p str,
    geom: Geometry,
    material: Option<Material>,
    depth: usize,
}

/// Derives a lot with default materials and limits. Links the program
/// first.
pub fn derive(lot: &[Vec2], program: &GrammarProgram, seed: u64) -> Result<LabeledMesh, DeriveError> {
    derive_with(lot, program, seed, &DeriveContext::default()).map(|d| d.mesh)
}

pub fn derive_with(
    lot: &[Vec2],
    program: &GrammarProgram,
    seed: u64,
    ctx: &DeriveContext<'_>,
) -> Result<Derivation, DeriveError> {
    program.link()?;
    if program.rule(START).is_none() {
        return Err(DeriveError::EmptyDerivation);
    }
    if lot.len() < 3 || !is_simple(lot) || polygon_area(lot) <= 0.0 {
        return Err(DeriveError::InvalidLot);
    }
    let mut poly = lot.to_vec();
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }

    let mut interp = Interp { ctx, seed, env: Vec::new(), counter: 0, mesh: LabeledMesh::new(), choices: Vec::new() };
    let mut attr_rng = rng::stream(seed, &[rng::tag::ATTRS]);
    for a in &program.attrs {
        let v = interp.eval(&a.value, &mut attr_rng)?;
        interp.env.push((a.name.as_str(), v));
    }

    let mut stack = vec![Shape { symbol: START, geom: Geometry::Footprint { poly, z: 0.0 }, material: None, depth: 0 }];
    let mut processed = 0usize;
    while let Some(shape) = stack.pop() {
        processed += 1;
        if processed > ctx.max_shapes {
            return Err(DeriveError::ShapeBudgetExceeded { limit: ctx.max_shapes });
        }
        match program.rule(shape.symbol) {
            None => interp.emit(&shape),
            Some(rule) => {
                if shape.depth >= ctx.max_depth {
                    return Err(DeriveError::RecursionLimitExceeded {
                        symbol: shape.symbol.to_string(),
                        depth: ctx.max_depth,
                    });
                }
                let children = interp.apply(rule, shape)?;
                stack.extend(children.into_iter().rev());
            }
        }
    }
    Ok(Derivation { mesh: interp.mesh, choices: interp.choices, shapes: processed })
}

struct Interp<'p, 'c> {
    ctx: &'c DeriveContext<'c>,
    seed: u64,
    env: Vec<(&'p str, f64)>,
    counter: u64,
    mesh: LabeledMesh,
    choices: Vec<(String, usize)>,
}

impl<'p> Interp<'p, '_> {
    fn eval(&self, e: &Expr, rng: &mut Stream) -> Result<f64, DeriveError> {
        let v =
            match e {
                Expr::Num(v) => *v,
                Expr::Attr(n) => self.env.iter().rev().find(|(k, _)| k == n).map(|(_, v)| *v).ok_or_else(|| {
                    GrammarError::UndefinedAttribute { name: n.clone(), context: "expression".into() }
                })?,
                Expr::Neg(a) => -self.eval(a, rng)?,
                Expr::Rand(a, b) => {
                    let (a, b) = (self.eval(a, rng)?, self.eval(b, rng)?);
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    if lo == hi {
                        lo
                    } else {
                        rng.gen_range(lo..hi)
                    }
                }
                Expr::Bin(op, a, b) => {
                    let (a, b) = (self.eval(a, rng)?, self.eval(b, rng)?);
                    match op {
                        BinOp::Add => a + b,
                        BinOp::Sub => a - b,
                        BinOp::Mul => a * b,
                        BinOp::Div => a / b,
                    }
                }
            };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DeriveError::InvalidArgument { op: "expression", value: v })
        }
    }

    fn material(&self, shape: &Shape<'_>, class: SemanticClass) -> Material {
        shape.material.unwrap_or_else(|| self.ctx.default_material(class))
    }

    /// Rewrites `shape` with one successor of `rule`; returns the shapes it
    /// hands on, in derivation order.
    fn apply(&mut self, rule: &'p Rule, shape: Shape<'p>) -> Result<Vec<Shape<'p>>, DeriveError> {
        let mut rng = rng::stream(self.seed, &[rng::tag::GRAMMAR, self.counter]);
        self.counter += 1;
        let succ = if rule.successors.len() == 1 {
            &rule.successors[0]
        } else {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = rule.successors.len() - 1;
            for (i, s) in rule.successors.iter().enumerate() {
                acc += s.weight;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            self.choices.push((shape.symbol.to_string(), pick));
            &rule.successors[pick]
        };

        let depth = shape.depth + 1;
        let mut cur = Some(shape);
        for item in &succ.items {
            let Some(mut s) = cur.take() else { break };
            match item {
                Item::Emit(sym) => {
                    s.symbol = sym;
                    s.depth = depth;
                    return Ok(vec![s]);
                }
                Item::Op(Operation::Split { axis, entries }) => {
                    return self.split(&s, *axis, entries, depth, &mut rng);
                }
                Item::Op(Operation::Comp(parts)) => return self.comp(&s, parts, depth),
                Item::Op(op) => cur = self.transform(s, op, &mut rng)?,
            }
        }
        // ops only: the result is terminal
        if let Some(s) = cur {
            self.emit(&s);
        }
        Ok(Vec::new())
    }

    fn transform(
        &mut self,
        mut s: Shape<'p>,
        op: &Operation,
        rng: &mut Stream,
    ) -> Result<Option<Shape<'p>>, DeriveError> {
        match op {
            Operation::Extrude(h) => {
                let h = self.eval(h, rng)?;
                if !(h > 0.0) {
                    return Err(DeriveError::InvalidArgument { op: "extrude", value: h });
                }
                s.geom = match s.geom {
                    Geometry::Footprint { poly, z } | Geometry::Top { poly, z } | Geometry::Bottom { poly, z } => {
                        Geometry::Mass { poly, base: z, height: h }
                    }
                    Geometry::Mass { poly, base, .. } => Geometry::Mass { poly, base, height: h },
                    g => return Err(DeriveError::InvalidScope { op: "extrude", scope: g.kind() }),
                };
            }
            Operation::Setback(d) => {
                let d = self.eval(d, rng)?;
                if d < 0.0 {
                    return Err(DeriveError::InvalidArgument { op: "setback", value: d });
                }
                let Some(poly) = s.geom.polygon() else {
                    return Err(DeriveError::InvalidScope { op: "setback", scope: s.geom.kind() });
                };
                if d > 0.0 {
                    match inset_polygon(poly, &vec![d; poly.len()], crate::roadnet::BLOCK_MITER_LIMIT) {
                        Some(p) => s.geom = s.geom.with_poly(p),
                        None => return Ok(None),
                    }
                }
            }
            Operation::Roof { kind, pitch } => {
                let pitch = match pitch {
                    Some(p) => self.eval(p, rng)?,
                    None => DEFAULT_PITCH_DEG,
                };
                if *kind != RoofKind::Flat && !(pitch > 0.0 && pitch < MAX_PITCH_DEG) {
                    return Err(DeriveError::InvalidArgument { op: "roof", value: pitch });
                }
                let (poly, z) = match &s.geom {
                    Geometry::Mass { poly, base, height } => {
                        self.emit_mass_body(&s, poly, *base, *height);
                        (poly.clone(), base + height)
                    }
                    g => match g.flat() {
                        Some((p, z)) => (p.to_vec(), z),
                        None => return Err(DeriveError::InvalidScope { op: "roof", scope: g.kind() }),
                    },
                };
                s.geom = Geometry::Roof { tris: roof_triangles(&poly, z, *kind, pitch)? };
            }
            Operation::Color(r, g, b) => {
                let (r, g, b) = (self.eval(r, rng)?, self.eval(g, rng)?, self.eval(b, rng)?);
                s.material = Some(Material::from_unit(r, g, b));
            }
            Operation::Texture(name) => {
                let m = self
                    .ctx
                    .palette
                    .and_then(|p| p.get(name))
                    .ok_or_else(|| DeriveError::UnknownTexture(name.clone()))?;
                s.material = Some(*m);
            }
            Operation::Split { .. } | Operation::Comp(_) => unreachable!("handled by apply"),
        }
        Ok(Some(s))
    }

    fn split(
        &mut self,
        s: &Shape<'p>,
        axis: Axis,
        entries: &'p [SplitEntry],
        depth: usize,
        rng: &mut Stream,
    ) -> Result<Vec<Shape<'p>>, DeriveError> {
        let spec = entries
            .iter()
            .map(|e| {
                Ok(match &e.size {
                    SplitSizeExpr::Absolute(x) => SplitSize::Absolute(self.eval(x, rng)?),
                    SplitSizeExpr::Relative(x) => SplitSize::Relative(self.eval(x, rng)?),
                })
            })
            .collect::<Result<Vec<_>, DeriveError>>()?;
        let scope = s.geom.scope();
        let len = match (&s.geom, axis) {
            (Geometry::Facade { .. }, Axis::X) => scope.size.x,
            (Geometry::Facade { .. }, _) => scope.size.y,
            (Geometry::Mass { .. }, Axis::Z) => scope.size.z,
            (Geometry::Roof { .. }, _) | (_, Axis::Z) => {
                return Err(DeriveError::InvalidScope { op: "split", scope: s.geom.kind() })
            }
            (_, Axis::X) => scope.size.x,
            (_, Axis::Y) => scope.size.y,
        };
        if !(len > 0.0) {
            return Ok(Vec::new());
        }
        let sizes = apply_split(len, &spec)?;
        let tiny = 1e-9 * len;
        let mut out = Vec::new();
        let mut offset = 0.0;
        let n = sizes.len();
        for (k, (&size, entry)) in sizes.iter().zip(entries).enumerate() {
            let (lo, hi) = (offset, offset + size);
            offset = hi;
            if size <= tiny {
                continue;
            }
            let child = |geom: Geometry| Shape { symbol: entry.symbol.as_str(), geom, material: s.material, depth };
            match &s.geom {
                Geometry::Facade { origin, along, height, .. } => {
                    let (origin, width, h) = if axis == Axis::X {
                        (*origin + along.extend(0.0) * lo, size, *height)
                    } else {
                        (*origin + Vec3::Z * lo, scope.size.x, size)
                    };
                    out.push(child(Geometry::Facade { origin, along: *along, width, height: h }));
                }
                Geometry::Mass { poly, base, .. } if axis == Axis::Z => {
                    out.push(child(Geometry::Mass { poly: poly.clone(), base: base + lo, height: size }));
                }
                g => {
                    let poly = g.polygon().expect("polygonal");
                    let a = if axis == Axis::X { scope.axes[0].xy() } else { scope.axes[1].xy() };
                    let o = scope.origin.xy();
                    let pieces = slab(poly, o, a, (k > 0).then_some(lo), (k + 1 < n).then_some(hi));
                    for p in pieces {
                        out.push(child(g.with_poly(p)));
                    }
                }
            }
        }
        Ok(out)
    }

    fn comp(
        &mut self,
        s: &Shape<'p>,
        parts: &'p [(CompSelector, String)],
        depth: usize,
    ) -> Result<Vec<Shape<'p>>, DeriveError> {
        let Geometry::Mass { poly, base, height } = &s.geom else {
            return Err(DeriveError::InvalidScope { op: "comp", scope: s.geom.kind() });
        };
        let mut out = Vec::new();
        for (sel, sym) in parts {
            let child = |geom: Geometry| Shape { symbol: sym.as_str(), geom, material: s.material, depth };
            match sel {
                CompSelector::Top => out.push(child(Geometry::Top { poly: poly.clone(), z: base + height })),
                CompSelector::Bottom => out.push(child(Geometry::Bottom { poly: poly.clone(), z: *base })),
                CompSelector::Side => {
                    for i in 0..poly.len() {
                        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
                        let width = p.distance(q);
                        if width <= 1e-9 {
                            continue;
                        }
                        out.push(child(Geometry::Facade {
                            origin: p.extend(*base),
                            along: (q - p).normalized(),
                            width,
                            height: *height,
                        }));
                    }
                }
            }
        }
        Ok(out)
    }

    fn emit_polygon(&mut self, poly: &[Vec2], z: f64, up: bool, class: SemanticClass, m: Material) {
        // polygons reaching here are simple; a failure leaves a hole rather
        // than aborting the lot
        let Ok(tris) = triangulate(poly) else { return };
        for [a, b, c] in tris {
            let (a, b, c) = (poly[a].extend(z), poly[b].extend(z), poly[c].extend(z));
            let t = if up { [a, b, c] } else { [a, c, b] };
            self.mesh.push(t, class, m);
        }
    }

    fn emit_mass_body(&mut self, s: &Shape<'_>, poly: &[Vec2], base: f64, height: f64) {
        let wall = self.material(s, SemanticClass::Building);
        for i in 0..poly.len() {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            self.mesh.push_quad(
                [p.extend(base), q.extend(base), q.extend(base + height), p.extend(base + height)],
                SemanticClass::Building,
                wall,
            );
        }
        self.emit_polygon(poly, base, false, SemanticClass::Building, wall);
    }

    /// Triangulates a terminal shape into the mesh.
    fn emit(&mut self, s: &Shape<'_>) {
        match &s.geom {
            Geometry::Footprint { poly, z } => {
                let m = self.material(s, SemanticClass::Ground);
                self.emit_polygon(poly, z + FOOTPRINT_LIFT, true, SemanticClass::Ground, m);
            }
            Geometry::Top { poly, z } => {
                let m = self.material(s, SemanticClass::Roof);
                self.emit_polygon(poly, *z, true, SemanticClass::Roof, m);
            }
            Geometry::Bottom { poly, z } => {
                let m = self.material(s, SemanticClass::Building);
                self.emit_polygon(poly, *z, false, SemanticClass::Building, m);
            }
            Geometry::Mass { poly, base, height } => {
                self.emit_mass_body(s, poly, *base, *height);
                let m = self.material(s, SemanticClass::Roof);
                self.emit_polygon(poly, base + height, true, SemanticClass::Roof, m);
            }
            Geometry::Facade { origin, along, width, height } => {
                let m = self.material(s, SemanticClass::Building);
                let a = along.extend(0.0) * *width;
                let h = Vec3::Z * *height;
                self.mesh.push_quad([*origin, *origin + a, *origin + a + h, *origin + h], SemanticClass::Building, m);
            }
            Geometry::Roof { tris } => {
                for (t, class) in tris {
                    let m = self.material(s, *class);
                    self.mesh.push(*t, *class, m);
                }
            }
        }
    }
}

/// Parts of `poly` with `lo <= (p − o)·a <= hi`.
fn slab(poly: &[Vec2], o: Vec2, a: Vec2, lo: Option<f64>, hi: Option<f64>) -> Vec<Vec<Vec2>> {
    // the left side of a line along −a.perp() is the side where (p − q)·a ≥ 0
    let dir = -a.perp();
    let mut pieces = vec![poly.to_vec()];
    if let Some(c) = lo {
        pieces = pieces.iter().flat_map(|p| split_polygon(p, o + a * c, dir).0).collect();
    }
    if let Some(c) = hi {
        pieces = pieces.iter().flat_map(|p| split_polygon(p, o + a * c, dir).1).collect();
    }
    pieces
}

/// Drops vertices whose neighbours are collinear with them.
fn simplify(poly: &[Vec2]) -> Vec<Vec2> {
    let n = poly.len();
    let scale = poly.iter().fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs())).max(1.0);
    (0..n)
        .filter(|&i| {
            let (a, b, c) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
            (b - a).cross(c - b).abs() > 1e-9 * scale * scale
        })
        .map(|i| poly[i])
        .collect()
}

fn is_convex(poly: &[Vec2]) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b, c) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        (b - a).cross(c - b) >= 0.0
    })
}

fn roof_triangles(
    poly: &[Vec2],
    z: f64,
    kind: RoofKind,
    pitch_deg: f64,
) -> Result<Vec<([Vec3; 3], SemanticClass)>, DeriveError> {
    let mut out = Vec::new();
    let flat = |out: &mut Vec<([Vec3; 3], SemanticClass)>| -> Result<(), DeriveError> {
        for [a, b, c] in triangulate(poly)? {
            out.push(([poly[a].extend(z), poly[b].extend(z), poly[c].extend(z)], SemanticClass::Roof));
        }
        Ok(())
    };
    if kind == RoofKind::Flat {
        flat(&mut out)?;
        return Ok(out);
    }
    let slope = math::tan(math::to_radians(pitch_deg));
    let core = simplify(poly);
    let rect = min_area_rect(&core).filter(|r| core.len() == 4 && polygon_area(&core) >= 0.999 * r.area());
    if let Some(r) = rect {
        let (u, v) = (r.major, r.minor);
        let (l, w) = (2.0 * r.half_major, 2.0 * r.half_minor);
        let a = r.origin();
        let at = |s: f64, t: f64, h: f64| (a + u * s + v * t).extend(z + h);
        let rise = 0.5 * w * slope;
        let (c0, c1, c2, c3) = (at(0.0, 0.0, 0.0), at(l, 0.0, 0.0), at(l, w, 0.0), at(0.0, w, 0.0));
        let inset = if kind == RoofKind::Gable { 0.0 } else { 0.5 * w };
        let (r0, r1) = (at(inset, 0.5 * w, rise), at(l - inset, 0.5 * w, rise));
        let roof = SemanticClass::Roof;
        out.push(([c0, c1, r1], roof));
        out.push(([c0, r1, r0], roof));
        out.push(([r0, r1, c2], roof));
        out.push(([r0, c2, c3], roof));
        let end = if kind == RoofKind::Gable { SemanticClass::Building } else { roof };
        out.push(([c0, r0, c3], end));
        out.push(([c1, c2, r1], end));
        return Ok(out);
    }
    if is_convex(&core) && core.len() >= 3 {
        let n = core.len() as f64;
        let c = core.iter().fold(Vec2::ZERO, |s, &p| s + p) * (1.0 / n);
        let reach = (0..core.len())
            .map(|i| crate::geom::point_segment_distance(c, core[i], core[(i + 1) % core.len()]))
            .fold(f64::INFINITY, f64::min);
        let apex = c.extend(z + reach * slope);
        for i in 0..core.len() {
            let (p, q) = (core[i], core[(i + 1) % core.len()]);
            out.push(([p.extend(z), q.extend(z), apex], SemanticClass::Roof));
        }
        return Ok(out);
    }
    flat(&mut out)?;
    Ok(out)
}
