//! PNG encoding of tiles: 8-bit RGB images and 8-bit grayscale masks.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ExtendedColorType, ImageFormat};
use synthcity_core::image::{Mask, RgbImage};

use crate::error::CliError;

fn encode(bytes: &[u8], w: usize, h: usize, color: ExtendedColorType) -> Vec<u8> {
    let mut out = Cursor::new(Vec::new());
    image::write_buffer_with_format(&mut out, bytes, w as u32, h as u32, color, ImageFormat::Png)
        .expect("in-memory PNG encoding");
    out.into_inner()
}

pub fn encode_rgb(img: &RgbImage) -> Vec<u8> {
    encode(&img.to_bytes(), img.width(), img.height(), ExtendedColorType::Rgb8)
}

pub fn encode_mask(mask: &Mask) -> Vec<u8> {
    encode(mask.pixels(), mask.width(), mask.height(), ExtendedColorType::L8)
}

pub fn write_rgb(path: &Path, img: &RgbImage) -> Result<(), CliError> {
    fs::write(path, encode_rgb(img)).map_err(CliError::io(path))
}

pub fn write_mask(path: &Path, mask: &Mask) -> Result<(), CliError> {
    fs::write(path, encode_mask(mask)).map_err(CliError::io(path))
}

fn open(path: &Path) -> Result<DynamicImage, CliError> {
    let bytes = fs::read(path).map_err(CliError::io(path))?;
    image::load_from_memory(&bytes).map_err(|e| CliError::format(path, e))
}

/// Any PNG, reduced to one 8-bit channel. Values are kept as stored.
pub fn read_mask(path: &Path) -> Result<Mask, CliError> {
    let img = open(path)?.into_luma8();
    let (w, h) = img.dimensions();
    Mask::from_vec(w as usize, h as usize, img.into_raw()).map_err(|e| CliError::format(path, e))
}

pub fn read_rgb(path: &Path) -> Result<RgbImage, CliError> {
    let img = open(path)?.into_rgb8();
    let (w, h) = img.dimensions();
    RgbImage::from_bytes(w as usize, h as usize, img.as_raw()).map_err(|e| CliError::format(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mask = Mask::from_fn(7, 5, |c, r| (c + r) % 3 == 0);
        let mut rgb = RgbImage::filled(7, 5, [1, 2, 3]);
        rgb.set(6, 4, [250, 0, 9]);
        let (mp, rp) = (dir.path().join("m.png"), dir.path().join("r.png"));
        write_mask(&mp, &mask).unwrap();
        write_rgb(&rp, &rgb).unwrap();
        assert_eq!(read_mask(&mp).unwrap(), mask);
        assert_eq!(read_rgb(&rp).unwrap(), rgb);
        assert_eq!(encode_mask(&mask), fs::read(&mp).unwrap());
    }

    #[test]
    fn unreadable_file_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.png");
        fs::write(&p, b"not a png").unwrap();
        assert!(matches!(read_mask(&p), Err(CliError::Format { .. })));
    }
}
