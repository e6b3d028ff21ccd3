//! Lattice value noise.

use crate::math;
use crate::rng::mix64;

#[derive(Debug, Clone, Copy)]
pub(super) struct ValueNoise {
    seed: u64,
    /// Lattice period in meters.
    scale: f64,
}

impl ValueNoise {
    pub(super) fn new(seed: u64, scale: f64) -> Self {
        ValueNoise { seed, scale }
    }

    fn lattice(&self, i: i64, j: i64) -> f64 {
        let h = mix64(self.seed ^ mix64(i as u64 ^ mix64(j as u64).rotate_left(17)));
        // top 53 bits to [-1, 1)
        (h >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }

    /// Smoothly interpolated value in `[-1, 1]`.
    pub(super) fn sample(&self, x: f64, y: f64) -> f64 {
        let (fx, fy) = (x / self.scale, y / self.scale);
        let (x0, y0) = (math::floor(fx), math::floor(fy));
        let (tx, ty) = (fx - x0, fy - y0);
        let (sx, sy) = (smooth(tx), smooth(ty));
        let (i, j) = (x0 as i64, y0 as i64);
        let a = self.lattice(i, j);
        let b = self.lattice(i + 1, j);
        let c = self.lattice(i, j + 1);
        let d = self.lattice(i + 1, j + 1);
        let top = a + (b - a) * sx;
        let bottom = c + (d - c) * sx;
        top + (bottom - top) * sy
    }
}

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_and_continuous() {
        let n = ValueNoise::new(3, 100.0);
        let mut prev = n.sample(0.0, 0.0);
        for k in 1..2000 {
            let v = n.sample(k as f64 * 0.5, 10.0);
            assert!((-1.0..=1.0).contains(&v));
            assert!((v - prev).abs() < 0.05);
            prev = v;
        }
    }

    #[test]
    fn matches_lattice_at_integer_points() {
        let n = ValueNoise::new(9, 10.0);
        assert_eq!(n.sample(20.0, 30.0), n.lattice(2, 3));
    }
}
