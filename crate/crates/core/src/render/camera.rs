use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Rect, Vec2, Vec3};
use crate::math;

/// Default tile width in pixels.
pub const DEFAULT_IMAGE_PX: u32 = 572;
/// Default ground sample distance in meters per pixel.
pub const DEFAULT_GSD_M: f64 = 0.3;
/// Nominal altitude recorded for orthographic cameras; it has no effect on
/// the image.
pub const ORTHO_ALTITUDE_M: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CameraMode {
    #[default]
    Orthographic,
    Perspective,
}

/// Sun position; azimuth clockwise from north.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sun {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
}

impl Default for Sun {
    fn default() -> Self {
        Sun { azimuth_deg: 135.0, elevation_deg: 45.0 }
    }
}

impl Sun {
    /// Unit vector pointing towards the sun.
    pub fn direction(&self) -> Vec3 {
        let az = math::to_radians(self.azimuth_deg);
        let el = math::to_radians(self.elevation_deg);
        let c = math::cos(el);
        Vec3::new(math::sin(az) * c, math::cos(az) * c, math::sin(el))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CameraError {
    #[error("field of view must lie strictly between 0 and 180 degrees, got {0}")]
    InvalidFov(f64),
    #[error("ground sample distance must be positive, got {0}")]
    InvalidGsd(f64),
    #[error("image size must be positive")]
    InvalidImageSize,
}

/// A nadir camera whose footprint is `image_px · gsd_m` meters square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraSpec {
    pub mode: CameraMode,
    pub center_xy: Vec2,
    pub height_m: f64,
    /// Full field of view; perspective only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fov_deg: Option<f64>,
    pub image_px: u32,
    pub gsd_m: f64,
    #[serde(default)]
    pub sun: Sun,
    /// Darken pixels the sun cannot reach, using the tile's own height field.
    #[serde(default)]
    pub shadows: bool,
}

/// Solves the camera for a target ground sample distance. A perspective
/// camera gets the altitude `h = W·g / (2·tan(θ/2))` at which its ground
/// footprint spans `W·g` meters.
pub fn plan_camera(
    gsd_m: f64,
    image_px: u32,
    mode: CameraMode,
    fov_deg: Option<f64>,
) -> Result<CameraSpec, CameraError> {
    if !(gsd_m > 0.0 && gsd_m.is_finite()) {
        return Err(CameraError::InvalidGsd(gsd_m));
    }
    if image_px == 0 {
        return Err(CameraError::InvalidImageSize);
    }
    let footprint = image_px as f64 * gsd_m;
    let (height_m, fov_deg) = match mode {
        CameraMode::Orthographic => (ORTHO_ALTITUDE_M, None),
        CameraMode::Perspective => {
            let fov = fov_deg.unwrap_or(f64::NAN);
            if !(fov > 0.0 && fov < 180.0) {
                return Err(CameraError::InvalidFov(fov));
            }
            (footprint / (2.0 * math::tan(math::to_radians(fov) / 2.0)), Some(fov))
        }
    };
    Ok(CameraSpec {
        mode,
        center_xy: Vec2::ZERO,
        height_m,
        fov_deg,
        image_px,
        gsd_m,
        sun: Sun::default(),
        shadows: false,
    })
}

impl CameraSpec {
    /// Default orthographic camera: 572 px at 0.3 m/px.
    pub fn default_tile() -> CameraSpec {
        plan_camera(DEFAULT_GSD_M, DEFAULT_IMAGE_PX, CameraMode::Orthographic, None).expect("default camera is valid")
    }

    pub fn at(mut self, center: Vec2) -> CameraSpec {
        self.center_xy = center;
        self
    }

    pub fn footprint_m(&self) -> f64 {
        self.image_px as f64 * self.gsd_m
    }

    /// Ground sample distance recovered from the camera geometry.
    pub fn gsd(&self) -> f64 {
        match (self.mode, self.fov_deg) {
            (CameraMode::Perspective, Some(fov)) => {
                2.0 * self.height_m * math::tan(math::to_radians(fov) / 2.0) / self.image_px as f64
            }
            _ => self.gsd_m,
        }
    }

    /// Ground rectangle covered at z = 0.
    pub fn bounds(&self) -> Rect {
        let half = 0.5 * self.footprint_m();
        let c = self.center_xy;
        Rect::new(Vec2::new(c.x - half, c.y - half), Vec2::new(c.x + half, c.y + half))
    }

    pub fn validate(&self) -> Result<(), CameraError> {
        let planned = plan_camera(self.gsd_m, self.image_px, self.mode, self.fov_deg)?;
        if self.mode == CameraMode::Perspective && (planned.height_m - self.height_m).abs() > 1e-9 * planned.height_m {
            return Err(CameraError::InvalidGsd(self.gsd()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ten_degree_altitude() {
        let cam = plan_camera(0.3, 572, CameraMode::Perspective, Some(10.0)).unwrap();
        // 171.6 / (2 tan 5°), tan 5° = 0.087488663525924...
        let oracle = 171.6 / (2.0 * 0.087_488_663_525_924_01);
        assert!((cam.height_m - oracle).abs() < 1e-9);
        assert!((cam.height_m - 980.7).abs() < 0.05);
    }

    #[test]
    fn orthographic_footprint() {
        let cam = plan_camera(0.3, 572, CameraMode::Orthographic, None).unwrap();
        assert!((cam.footprint_m() - 171.6).abs() < 1e-12);
        assert_eq!(cam.gsd(), 0.3);
        assert_eq!(CameraSpec::default_tile(), cam);
    }

    #[test]
    fn invalid_fov() {
        for fov in [Some(0.0), Some(180.0), Some(-5.0), None] {
            assert!(matches!(plan_camera(0.3, 572, CameraMode::Perspective, fov), Err(CameraError::InvalidFov(_))));
        }
        assert!(matches!(plan_camera(0.0, 572, CameraMode::Orthographic, None), Err(CameraError::InvalidGsd(_))));
        assert!(matches!(plan_camera(0.3, 0, CameraMode::Orthographic, None), Err(CameraError::InvalidImageSize)));
    }

    #[test]
    fn sun_points_southeast_and_up() {
        let d = Sun::default().direction();
        assert!(d.x > 0.0 && d.y < 0.0 && d.z > 0.0);
        assert!((d.length() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn gsd_round_trip(g in 0.01..5.0f64, w in 1u32..4096, fov in 0.1..179.9f64) {
            let cam = plan_camera(g, w, CameraMode::Perspective, Some(fov)).unwrap();
            prop_assert!((cam.gsd() - g).abs() <= 1e-9 * g);
        }
    }
}
