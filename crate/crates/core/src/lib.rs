//! Core of the synthcity generator.
//!
//! Everything in this crate is a pure function of its inputs and needs only
//! `alloc`: road-network synthesis and block extraction ([`roadnet`]), the
//! shape-grammar language and its interpreter ([`grammar`]), lot subdivision
//! and scene population ([`citygen`]), the nadir tile rasterizer ([`render`]),
//! sweep / sampling / batching logic for datasets ([`dataset`]) and the IoU
//! evaluation protocol ([`eval`]). File formats, parallel scheduling and the
//! command line live in the `synthcity` companion crate.
#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod citygen;
pub mod dataset;
pub mod eval;
pub mod geom;
pub mod grammar;
pub mod image;
pub(crate) mod math;
pub mod render;
pub mod rng;
pub mod roadnet;

pub use citygen::{build_world, populate, subdivide_block, Scene, StyleConfig, WorldConfig};
pub use geom::{Extent, Vec2, Vec3};
pub use grammar::{derive, parse_grammar, GrammarProgram, LabeledMesh, SemanticClass};
pub use render::{extract_mask, plan_camera, render_tile, CameraSpec, IdBuffer};
pub use roadnet::{extract_blocks, generate_roads, validate_graph, CityBlock, RoadConfig, RoadGraph};
