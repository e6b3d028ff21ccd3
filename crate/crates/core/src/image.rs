//! Row-major pixel grids. Row 0 is the northern edge of a tile.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("image sizes differ: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("pixel buffer holds {actual} values, expected {expected}")]
    BadLength { expected: usize, actual: usize },
    #[error("mask value {0} is not 0 or 255")]
    NonBinary(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Raster<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Copy> Raster<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Raster { width, height, data: vec![value; width * height] }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self, ImageError> {
        if data.len() != width * height {
            return Err(ImageError::BadLength { expected: width * height, actual: data.len() });
        }
        Ok(Raster { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> T {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, col: usize, row: usize, v: T) {
        self.data[row * self.width + col] = v;
    }

    pub fn pixels(&self) -> &[T] {
        &self.data
    }

    pub fn pixels_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Raster<U> {
        Raster { width: self.width, height: self.height, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn same_size<U>(&self, other: &Raster<U>) -> Result<(), ImageError> {
        if self.width != other.width || self.height != other.height {
            return Err(ImageError::SizeMismatch(self.width, self.height, other.width, other.height));
        }
        Ok(())
    }
}

pub type RgbImage = Raster<[u8; 3]>;

/// Binary mask: 255 foreground, 0 background.
pub type Mask = Raster<u8>;

pub const FOREGROUND: u8 = 255;

impl Mask {
    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn check_binary(&self) -> Result<(), ImageError> {
        match self.data.iter().find(|&&v| v != 0 && v != FOREGROUND) {
            Some(&v) => Err(ImageError::NonBinary(v)),
            None => Ok(()),
        }
    }

    /// Foreground wherever `f(col, row)` holds.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Mask {
        let mut m = Mask::filled(width, height, 0);
        for r in 0..height {
            for c in 0..width {
                if f(c, r) {
                    m.set(c, r, FOREGROUND);
                }
            }
        }
        m
    }
}

impl RgbImage {
    /// Pixels as interleaved `R G B` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().flat_map(|p| p.iter().copied()).collect()
    }

    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self, ImageError> {
        if bytes.len() != 3 * width * height {
            return Err(ImageError::BadLength { expected: 3 * width * height, actual: bytes.len() });
        }
        Ok(Raster { width, height, data: bytes.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_check_and_count() {
        let mut m = Mask::from_fn(4, 3, |c, r| c == r);
        assert_eq!(m.count_foreground(), 3);
        assert!(m.check_binary().is_ok());
        m.set(0, 2, 7);
        assert_eq!(m.check_binary(), Err(ImageError::NonBinary(7)));
    }

    #[test]
    fn rgb_bytes_roundtrip() {
        let img = RgbImage::from_bytes(2, 1, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(img.get(1, 0), [4, 5, 6]);
        assert_eq!(img.to_bytes(), [1, 2, 3, 4, 5, 6]);
        assert!(RgbImage::from_bytes(2, 2, &[0; 6]).is_err());
    }
}
