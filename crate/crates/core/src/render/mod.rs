//! Overhead tile rendering.
//!
//! [`plan_camera`] solves a nadir camera for a ground sample distance,
//! [`render_tile`] rasterizes a scene into an RGB image and an [`IdBuffer`]
//! of hard per-pixel labels, and [`extract_mask`] turns the labels into the
//! binary building mask.

mod camera;
pub mod raster;
mod tile;

#[cfg(test)]
mod tests;

pub use camera::{
    plan_camera, CameraError, CameraMode, CameraSpec, Sun, DEFAULT_GSD_M, DEFAULT_IMAGE_PX, ORTHO_ALTITUDE_M,
};
pub use tile::{
    class_coverage, extract_mask, render_tile, IdBuffer, Rendered, Tile, TileMeta, AMBIENT, BACKGROUND_RGB,
};
