//! Random sprays: 2-D point sets around a pixel that replace Retinex paths.
//!
//! A spray of size `n` draws `n` candidates at polar offsets `(ρ, θ)` with
//! `ρ = radius * u`, `u` and `θ / 2π` uniform. Points are therefore denser
//! near the centre. Candidates are rounded to the nearest pixel
//! (`floor(x + 0.5)`); those outside the image are dropped, and the centre
//! pixel is always a member.
//!
//! Every `(seed, pixel, spray index)` triple owns an independent random
//! stream, so results never depend on the order in which pixels are visited.

use alloc::vec::Vec;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::math;

/// Integer pixel coordinate, `x` is the column and `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub x: usize,
    pub y: usize,
}

impl Pixel {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn index(&self, width: usize) -> usize {
        self.y * width + self.x
    }
}

/// Spray configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprayParams {
    /// Number of sprays `N` averaged per pixel.
    pub num_sprays: usize,
    /// Candidate points `n` drawn per spray.
    pub points_per_spray: usize,
    /// Spray radius in pixels; `None` uses the image diagonal.
    pub radius: Option<f64>,
    pub seed: u64,
}

impl SprayParams {
    /// The settings commonly used for image enhancement: `N = 20`, `n = 400`.
    pub const ENHANCEMENT: SprayParams = SprayParams {
        num_sprays: 20,
        points_per_spray: 400,
        radius: None,
        seed: 0,
    };

    pub fn new(num_sprays: usize, points_per_spray: usize) -> Self {
        Self {
            num_sprays,
            points_per_spray,
            radius: None,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_sprays == 0 {
            return Err(Error::InvalidParameter(
                "number of sprays must be at least 1",
            ));
        }
        if self.points_per_spray == 0 {
            return Err(Error::InvalidParameter("spray size must be at least 1"));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter("spray radius must be positive"));
            }
        }
        Ok(())
    }

    /// Radius used for an image of the given size.
    pub fn radius_for(&self, width: usize, height: usize) -> f64 {
        self.radius.unwrap_or_else(|| diagonal(width, height))
    }
}

impl Default for SprayParams {
    fn default() -> Self {
        Self::ENHANCEMENT
    }
}

pub(crate) fn diagonal(width: usize, height: usize) -> f64 {
    let (w, h) = (width as f64, height as f64);
    math::sqrt(w * w + h * h)
}

/// The pixels of one spray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spray {
    /// In-bounds candidates in draw order, followed by the centre.
    pub points: Vec<Pixel>,
}

impl Spray {
    pub fn center(&self) -> Pixel {
        *self.points.last().expect("spray always holds its centre")
    }
}

/// Random stream for one `(seed, pixel, spray)` triple.
#[derive(Debug, Clone)]
pub struct SpraySampler {
    rng: Xoshiro256PlusPlus,
    radius: f64,
}

impl SpraySampler {
    pub fn new(seed: u64, pixel_index: u64, spray_index: u64, radius: f64) -> Self {
        let key = mix(mix(mix(seed) ^ pixel_index) ^ spray_index.rotate_left(32));
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(key),
            radius,
        }
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        // Through i64: the value fits in 53 bits and the signed conversion is
        // a single instruction.
        ((self.rng.next_u64() >> 11) as i64) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Next radial distance, uniform on `[0, radius)`.
    #[inline]
    pub fn next_radius(&mut self) -> f64 {
        self.radius * self.next_unit()
    }

    /// Next direction `(cos θ, sin θ)` with θ uniform on the circle.
    ///
    /// Drawn by rejection from the unit disk, which gives an exactly uniform
    /// angle without evaluating trigonometric functions. Each trial takes
    /// both coordinates from one 64-bit draw.
    #[inline]
    pub fn next_direction(&mut self) -> (f64, f64) {
        let (a, b, s) = self.disk_point();
        let inv = 1.0 / math::sqrt(s);
        (a * inv, b * inv)
    }

    /// Uniform point `(a, b)` in the punctured unit disk, with `s = a² + b²`.
    #[inline]
    fn disk_point(&mut self) -> (f64, f64, f64) {
        const SCALE: f64 = 2.0 / (1u64 << 32) as f64;
        loop {
            let bits = self.rng.next_u64();
            let a = ((bits >> 32) as u32) as f64 * SCALE - 1.0;
            let b = (bits as u32) as f64 * SCALE - 1.0;
            let s = a * a + b * b;
            if s <= 1.0 && s > 0.0 {
                return (a, b, s);
            }
        }
    }

    /// Next candidate as a real-valued offset `(ρ cos θ, ρ sin θ)` from the
    /// spray centre.
    #[inline]
    pub fn next_offset(&mut self) -> (f64, f64) {
        let rho = self.next_radius();
        let (a, b, s) = self.disk_point();
        let scale = rho / math::sqrt(s);
        (a * scale, b * scale)
    }
}

// SplitMix64 finaliser.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Replaces the contents of `out` with the linear indices of the in-bounds
/// candidates of spray `spray_index` around `center`, in draw order. The
/// centre itself is not included.
#[inline]
pub(crate) fn fill_candidates(
    center: Pixel,
    width: usize,
    height: usize,
    params: &SprayParams,
    radius: f64,
    spray_index: usize,
    out: &mut Vec<usize>,
) {
    let n = params.points_per_spray;
    out.clear();
    out.resize(n, 0);
    let mut sampler = SpraySampler::new(
        params.seed,
        center.index(width) as u64,
        spray_index as u64,
        radius,
    );
    // Shift by one half so truncation rounds to the nearest pixel.
    let (cx, cy) = (center.x as f64 + 0.5, center.y as f64 + 0.5);
    let (w, h) = (width as f64, height as f64);
    let mut len = 0;
    for _ in 0..n {
        let (dx, dy) = sampler.next_offset();
        let x = cx + dx;
        let y = cy + dy;
        let inside = x >= 0.0 && y >= 0.0 && x < w && y < h;
        let (x, y) = (x.max(-1.0).min(w), y.max(-1.0).min(h));
        // SAFETY: clamped to [-1, size], finite and well inside the i64 range.
        let (xi, yi) = unsafe { (x.to_int_unchecked::<i64>(), y.to_int_unchecked::<i64>()) };
        // Branch-free compaction: always write, only advance when inside.
        out[len] = (yi as usize).wrapping_mul(width).wrapping_add(xi as usize);
        len += inside as usize;
    }
    out.truncate(len);
}

/// Draws spray `spray_index` around `center` in a `width x height` image.
///
/// # Panics
///
/// If `center` lies outside the image.
pub fn generate_spray(
    center: Pixel,
    (width, height): (usize, usize),
    params: &SprayParams,
    spray_index: usize,
) -> Spray {
    assert!(
        center.x < width && center.y < height,
        "spray centre out of bounds"
    );
    let radius = params.radius_for(width, height);
    let mut indices = Vec::with_capacity(params.points_per_spray);
    fill_candidates(
        center,
        width,
        height,
        params,
        radius,
        spray_index,
        &mut indices,
    );
    let mut points: Vec<Pixel> = indices
        .iter()
        .map(|&i| Pixel::new(i % width, i / width))
        .collect();
    points.push(center);
    Spray { points }
}
