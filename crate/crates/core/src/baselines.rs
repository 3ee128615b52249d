//! Unsupervised reference estimators: gray-world, standard-deviation
//! weighted gray-world (SDWGW) and shades of gray.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimator::IlluminantEstimate;
use crate::image::{LinearImage, PixelMask};
use crate::math;
use crate::Rgb;

/// Block count used by [`sdwgw`] when none is given.
pub const DEFAULT_SDWGW_BLOCKS: usize = 100;

/// Minkowski exponent commonly used for shades of gray.
pub const DEFAULT_SHADES_OF_GRAY_P: f64 = 6.0;

/// Per-channel mean over unmasked pixels.
pub fn gray_world(img: &LinearImage, mask: &PixelMask) -> Result<IlluminantEstimate> {
    mask.check_matches(img)?;
    let stats =
        region_stats(img, mask, 0..img.width(), 0..img.height()).ok_or(Error::NothingSampled)?;
    IlluminantEstimate::new(stats.mean)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct BlockStats {
    mean: Rgb,
    /// Population standard deviation.
    sigma: Rgb,
}

fn region_stats(
    img: &LinearImage,
    mask: &PixelMask,
    xs: core::ops::Range<usize>,
    ys: core::ops::Range<usize>,
) -> Option<BlockStats> {
    let mut sum = [0.0; 3];
    let mut count = 0usize;
    for y in ys.clone() {
        for x in xs.clone() {
            if mask.is_excluded(x, y) {
                continue;
            }
            let p = img.pixel(x, y);
            for c in 0..3 {
                sum[c] += p[c];
            }
            count += 1;
        }
    }
    if count == 0 {
        return None;
    }
    let n = count as f64;
    let mean = [sum[0] / n, sum[1] / n, sum[2] / n];

    // Second pass for a numerically stable deviation.
    let mut sq = [0.0; 3];
    for y in ys {
        for x in xs.clone() {
            if mask.is_excluded(x, y) {
                continue;
            }
            let p = img.pixel(x, y);
            for c in 0..3 {
                let d = p[c] - mean[c];
                sq[c] += d * d;
            }
        }
    }
    let sigma = [
        math::sqrt(sq[0] / n),
        math::sqrt(sq[1] / n),
        math::sqrt(sq[2] / n),
    ];
    Some(BlockStats { mean, sigma })
}

/// Per channel, the block means weighted by the block deviations. `None` for
/// channels whose deviations are all zero.
fn deviation_weighted_mean(blocks: &[BlockStats]) -> [Option<f64>; 3] {
    let mut out = [None; 3];
    for (c, slot) in out.iter_mut().enumerate() {
        let total: f64 = blocks.iter().map(|b| b.sigma[c]).sum();
        if total > 0.0 {
            *slot = Some(
                blocks
                    .iter()
                    .map(|b| (b.sigma[c] / total) * b.mean[c])
                    .sum(),
            );
        }
    }
    out
}

/// Standard-deviation weighted gray-world.
///
/// The image is split into a `ceil(sqrt(B)) x ceil(sqrt(B))` grid of
/// near-equal blocks. Each channel's estimate is the mean of the block means
/// weighted by the block standard deviations. Blocks with no unmasked pixel
/// are skipped; a channel whose deviations are all zero falls back to its
/// gray-world mean.
pub fn sdwgw(img: &LinearImage, mask: &PixelMask, num_blocks: usize) -> Result<IlluminantEstimate> {
    mask.check_matches(img)?;
    if num_blocks == 0 {
        return Err(Error::InvalidParameter("block count must be at least 1"));
    }
    let side = ceil_sqrt(num_blocks);
    let (w, h) = (img.width(), img.height());
    if side > w || side > h {
        return Err(Error::InvalidParameter(
            "image too small for the block grid",
        ));
    }
    let fallback = region_stats(img, mask, 0..w, 0..h)
        .ok_or(Error::NothingSampled)?
        .mean;

    let mut blocks = Vec::with_capacity(side * side);
    for by in 0..side {
        for bx in 0..side {
            let xs = bx * w / side..(bx + 1) * w / side;
            let ys = by * h / side..(by + 1) * h / side;
            if let Some(stats) = region_stats(img, mask, xs, ys) {
                blocks.push(stats);
            }
        }
    }
    let weighted = deviation_weighted_mean(&blocks);
    IlluminantEstimate::new([
        weighted[0].unwrap_or(fallback[0]),
        weighted[1].unwrap_or(fallback[1]),
        weighted[2].unwrap_or(fallback[2]),
    ])
}

fn ceil_sqrt(n: usize) -> usize {
    let mut s = 0;
    while s * s < n {
        s += 1;
    }
    s
}

/// Shades of gray: per channel, the Minkowski `p`-mean of unmasked pixels.
///
/// `p = 1` is gray-world; large `p` approaches the per-channel maximum.
pub fn shades_of_gray(img: &LinearImage, mask: &PixelMask, p: f64) -> Result<IlluminantEstimate> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(
            "Minkowski exponent must be finite and at least 1",
        ));
    }
    if p == 1.0 {
        return gray_world(img, mask);
    }
    mask.check_matches(img)?;

    let mut top = [0.0f64; 3];
    let mut count = 0usize;
    for (i, px) in img.pixels().enumerate() {
        if mask.flags()[i] {
            continue;
        }
        for c in 0..3 {
            top[c] = top[c].max(px[c]);
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::NothingSampled);
    }
    // Normalise by the channel maximum so large exponents cannot underflow.
    let mut acc = [0.0; 3];
    for (i, px) in img.pixels().enumerate() {
        if mask.flags()[i] {
            continue;
        }
        for c in 0..3 {
            if top[c] > 0.0 {
                acc[c] += math::powf(px[c] / top[c], p);
            }
        }
    }
    let n = count as f64;
    let mut e = [0.0; 3];
    for c in 0..3 {
        e[c] = top[c] * math::powf(acc[c] / n, 1.0 / p);
    }
    IlluminantEstimate::new(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Rect;

    fn angle(a: Rgb, b: Rgb) -> f64 {
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        (dot / (math::norm(&a) * math::norm(&b)))
            .clamp(-1.0, 1.0)
            .acos()
            .to_degrees()
    }

    fn textured(w: usize, h: usize) -> LinearImage {
        LinearImage::from_fn(w, h, |x, y| {
            let t = ((x * 13 + y * 29) % 31) as f64 / 31.0;
            [
                0.1 + 0.8 * t,
                0.3 + 0.4 * ((x % 5) as f64 / 5.0),
                0.05 + 0.6 * ((y % 7) as f64 / 7.0),
            ]
        })
    }

    #[test]
    fn gray_world_of_constant() {
        let img = LinearImage::filled(4, 3, [0.8, 0.4, 0.4]);
        let e = gray_world(&img, &PixelMask::none(4, 3)).unwrap();
        assert!(angle(e.rgb(), [2.0, 1.0, 1.0]) < 1e-9);
    }

    #[test]
    fn gray_world_two_pixels() {
        let img = LinearImage::new(2, 1, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            gray_world(&img, &PixelMask::none(2, 1)).unwrap().rgb(),
            [0.5, 0.5, 0.0]
        );
    }

    #[test]
    fn gray_world_ignores_masked_pixels() {
        let img = LinearImage::new(2, 1, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        let mask = PixelMask::from_rects(2, 1, &[Rect::new(1, 0, 1, 1)]).unwrap();
        assert_eq!(gray_world(&img, &mask).unwrap().rgb(), [1.0, 0.0, 0.0]);
        let all = PixelMask::from_rects(2, 1, &[Rect::new(0, 0, 2, 1)]).unwrap();
        assert_eq!(gray_world(&img, &all), Err(Error::NothingSampled));
        assert_eq!(sdwgw(&img, &all, 1), Err(Error::NothingSampled));
        assert_eq!(shades_of_gray(&img, &all, 2.0), Err(Error::NothingSampled));
    }

    #[test]
    fn sdwgw_constant_falls_back() {
        let img = LinearImage::filled(20, 20, [0.2, 0.5, 0.1]);
        let mask = PixelMask::none(20, 20);
        assert_eq!(
            sdwgw(&img, &mask, 100).unwrap(),
            gray_world(&img, &mask).unwrap()
        );
    }

    #[test]
    fn sdwgw_single_block_is_gray_world() {
        let img = textured(23, 17);
        let mask = PixelMask::from_rects(23, 17, &[Rect::new(3, 4, 5, 6)]).unwrap();
        assert_eq!(
            sdwgw(&img, &mask, 1).unwrap(),
            gray_world(&img, &mask).unwrap()
        );
    }

    #[test]
    fn sdwgw_two_block_hand_case() {
        let blocks = [
            BlockStats {
                mean: [1.0, 0.0, 0.0],
                sigma: [0.5; 3],
            },
            BlockStats {
                mean: [0.0, 1.0, 0.0],
                sigma: [0.1; 3],
            },
        ];
        let e = deviation_weighted_mean(&blocks);
        assert!((e[0].unwrap() - 0.5 / 0.6).abs() < 1e-15);
        assert!((e[1].unwrap() - 0.1 / 0.6).abs() < 1e-15);
        assert_eq!(e[2], Some(0.0));
        assert_eq!(
            deviation_weighted_mean(&[BlockStats {
                mean: [0.3; 3],
                sigma: [0.0; 3]
            }]),
            [None; 3]
        );
    }

    #[test]
    fn sdwgw_equal_deviations_reduce_to_gray_world() {
        // 2x2 blocks of a 4x4 image, each a checkerboard with the same contrast
        // but a different mean.
        let img = LinearImage::from_fn(4, 4, |x, y| {
            let base = [0.2, 0.4, 0.1][(x / 2 + y / 2) % 3];
            let d = if (x + y) % 2 == 0 { 0.05 } else { -0.05 };
            [base + d, base + 0.3 + d, base + 0.1 + d]
        });
        let mask = PixelMask::none(4, 4);
        let e = sdwgw(&img, &mask, 4).unwrap().rgb();
        let g = gray_world(&img, &mask).unwrap().rgb();
        for c in 0..3 {
            assert!((e[c] - g[c]).abs() < 1e-12);
        }
    }

    #[test]
    fn sdwgw_rejects_tiny_images() {
        let img = LinearImage::filled(9, 30, [0.5; 3]);
        assert!(sdwgw(&img, &PixelMask::none(9, 30), 100).is_err());
        assert!(sdwgw(&img, &PixelMask::none(9, 30), 81).is_ok());
        assert!(sdwgw(&img, &PixelMask::none(9, 30), 0).is_err());
    }

    #[test]
    fn shades_of_gray_p1_is_gray_world() {
        let img = textured(11, 9);
        let mask = PixelMask::none(11, 9);
        assert_eq!(
            shades_of_gray(&img, &mask, 1.0).unwrap(),
            gray_world(&img, &mask).unwrap()
        );
    }

    #[test]
    fn shades_of_gray_large_p_approaches_max_rgb() {
        let img = LinearImage::from_fn(10, 10, |x, y| {
            let t = ((x * 3 + y * 7) % 10) as f64 / 10.0;
            [0.9 * t, 0.5 * t + 0.05, 0.3 * (1.0 - t) + 0.1]
        });
        let mask = PixelMask::none(10, 10);
        let mut top = [0.0f64; 3];
        for p in img.pixels() {
            for c in 0..3 {
                top[c] = top[c].max(p[c]);
            }
        }
        let e = shades_of_gray(&img, &mask, 64.0).unwrap();
        assert!(angle(e.rgb(), top) < 1.0);
    }

    #[test]
    fn shades_of_gray_two_pixels_p2() {
        let img = LinearImage::new(2, 1, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        let e = shades_of_gray(&img, &PixelMask::none(2, 1), 2.0)
            .unwrap()
            .rgb();
        let h = 0.5f64.sqrt();
        assert!((e[0] - h).abs() < 1e-15 && (e[1] - h).abs() < 1e-15 && e[2] == 0.0);
        assert!(shades_of_gray(&img, &PixelMask::none(2, 1), 0.5).is_err());
    }

    #[test]
    fn exposure_scales_linearly() {
        let img = textured(12, 12);
        let mask = PixelMask::none(12, 12);
        let doubled = img.scaled(2.0).unwrap();
        let g = gray_world(&img, &mask).unwrap().rgb();
        assert_eq!(
            gray_world(&doubled, &mask).unwrap().rgb(),
            [2.0 * g[0], 2.0 * g[1], 2.0 * g[2]]
        );
        let s = shades_of_gray(&img, &mask, 6.0).unwrap().rgb();
        let s2 = shades_of_gray(&doubled, &mask, 6.0).unwrap().rgb();
        for c in 0..3 {
            assert!((s2[c] - 2.0 * s[c]).abs() <= 1e-15 * s2[c]);
        }
    }
}
