//! Synthetic Mondrian scenes with a known illuminant.
//!
//! A scene is a set of flat, randomly coloured rectangles over a random
//! background, lit by a single diagonal illuminant. One near-white patch
//! is always painted last so that it is fully visible.

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::image::LinearImage;
use crate::Rgb;

/// Shape of the generated scenes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MondrianSpec {
    pub width: usize,
    pub height: usize,
    /// Coloured rectangles painted over the background.
    pub patches: usize,
    /// Minimum fraction of the image covered by the white patch.
    pub white_fraction: f64,
    /// Reflectance range of coloured surfaces.
    pub reflectance: (f64, f64),
    /// Largest per-channel illuminant ratio, so components lie within
    /// `[1 / spread, spread]` of the green channel.
    pub spread: f64,
}

impl Default for MondrianSpec {
    fn default() -> Self {
        Self {
            width: 160,
            height: 120,
            patches: 40,
            white_fraction: 0.02,
            reflectance: (0.05, 0.85),
            spread: 2.0,
        }
    }
}

/// A rendered scene and the illuminant that lit it.
#[derive(Debug, Clone)]
pub struct Mondrian {
    pub image: LinearImage,
    /// Illuminant with green normalised to one.
    pub illuminant: Rgb,
    /// Reflectances before lighting.
    pub reflectance: LinearImage,
}

struct Rng(Xoshiro256PlusPlus);

impl Rng {
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    fn below(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }
}

/// Illuminant with green at one and red/blue log-uniform in
/// `[1 / spread, spread]`.
pub fn random_illuminant(seed: u64, spread: f64) -> Rgb {
    let mut rng = Rng(Xoshiro256PlusPlus::seed_from_u64(seed ^ 0x5eed_1111));
    let ln = libm::log(spread);
    let r = libm::exp(rng.range(-ln, ln));
    let b = libm::exp(rng.range(-ln, ln));
    [r, 1.0, b]
}

/// Renders scene number `seed` under `illuminant`.
///
/// Intensities are `reflectance * illuminant / max(illuminant)`, so every
/// value stays at or below one.
pub fn mondrian_with(spec: &MondrianSpec, seed: u64, illuminant: Rgb) -> Mondrian {
    let mut rng = Rng(Xoshiro256PlusPlus::seed_from_u64(seed));
    let (w, h) = (spec.width, spec.height);
    let (lo, hi) = spec.reflectance;
    let mut refl: Vec<Rgb> = Vec::with_capacity(w * h);
    let background = [rng.range(lo, hi), rng.range(lo, hi), rng.range(lo, hi)];
    refl.resize(w * h, background);

    let mut paint = |x0: usize, y0: usize, pw: usize, ph: usize, colour: Rgb| {
        for y in y0..(y0 + ph).min(h) {
            for x in x0..(x0 + pw).min(w) {
                refl[y * w + x] = colour;
            }
        }
    };
    for _ in 0..spec.patches {
        let pw = 1 + rng.below(w / 3);
        let ph = 1 + rng.below(h / 3);
        let x0 = rng.below(w);
        let y0 = rng.below(h);
        let colour = [rng.range(lo, hi), rng.range(lo, hi), rng.range(lo, hi)];
        paint(x0, y0, pw, ph, colour);
    }

    // Square-ish white patch covering at least the requested fraction.
    let area = libm::ceil(spec.white_fraction * (w * h) as f64) as usize;
    let side = (libm::ceil(libm::sqrt(area as f64)) as usize).max(1);
    let (pw, ph) = (side.min(w), side.min(h));
    let ph = ph.max(area.div_ceil(pw)).min(h);
    let x0 = rng.below(w - pw + 1);
    let y0 = rng.below(h - ph + 1);
    let white = [rng.range(0.9, 0.95); 3];
    paint(x0, y0, pw, ph, white);

    let top = illuminant[0].max(illuminant[1]).max(illuminant[2]);
    let light = [
        illuminant[0] / top,
        illuminant[1] / top,
        illuminant[2] / top,
    ];
    let image = LinearImage::from_fn(w, h, |x, y| {
        let r = refl[y * w + x];
        [r[0] * light[0], r[1] * light[1], r[2] * light[2]]
    });
    let reflectance = LinearImage::from_fn(w, h, |x, y| refl[y * w + x]);
    Mondrian {
        image,
        illuminant,
        reflectance,
    }
}

/// Scene number `seed` under a random illuminant drawn from the same seed.
pub fn mondrian(spec: &MondrianSpec, seed: u64) -> Mondrian {
    mondrian_with(spec, seed, random_illuminant(seed, spec.spread))
}
