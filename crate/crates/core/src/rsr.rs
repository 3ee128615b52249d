//! Random Sprays Retinex lightness.
//!
//! For a pixel `i` and channel `c`, the lightness is the mean over `N` sprays
//! of `I_c(i) / max_{j in spray} I_c(j)`. The centre belongs to every spray,
//! so each ratio lies in `(0, 1]`. Intensities are floored at
//! [`EPSILON`](crate::EPSILON) before any ratio is taken.

use alloc::vec::Vec;

use crate::error::Result;
use crate::image::{LinearImage, PixelMask};
use crate::spray::{fill_candidates, Pixel, SprayParams};
use crate::{Rgb, EPSILON};

/// Lightness of `pixel` in each channel.
///
/// # Panics
///
/// If `pixel` lies outside the image.
pub fn rsr_lightness(img: &LinearImage, pixel: Pixel, params: &SprayParams) -> Rgb {
    rsr_lightness_masked(img, None, pixel, params)
}

/// Like [`rsr_lightness`], but spray candidates on excluded pixels are
/// dropped the same way out-of-bounds candidates are.
pub fn rsr_lightness_masked(
    img: &LinearImage,
    mask: Option<&PixelMask>,
    pixel: Pixel,
    params: &SprayParams,
) -> Rgb {
    assert!(
        pixel.x < img.width() && pixel.y < img.height(),
        "pixel out of bounds"
    );
    let radius = params.radius_for(img.width(), img.height());
    lightness(img, mask, pixel, params, radius)
}

#[inline]
pub(crate) fn lightness(
    img: &LinearImage,
    mask: Option<&PixelMask>,
    pixel: Pixel,
    params: &SprayParams,
    radius: f64,
) -> Rgb {
    let mut out = [[0.0; 3]];
    SprayBatch::new(params.points_per_spray).lightness(
        img,
        mask,
        &[pixel],
        params,
        radius,
        &mut out,
    );
    out[0]
}

/// Scratch space for evaluating the lightness of many pixels.
///
/// Sprays are processed as a two-stage pipeline: while the candidates of
/// one spray are being drawn, the pixels of the previous spray are already
/// prefetched, so the scattered reads overlap with the sampling work.
pub(crate) struct SprayBatch {
    buffers: [Vec<usize>; 2],
}

impl SprayBatch {
    pub(crate) fn new(points_per_spray: usize) -> Self {
        Self {
            buffers: [
                Vec::with_capacity(points_per_spray),
                Vec::with_capacity(points_per_spray),
            ],
        }
    }

    /// Writes the lightness of `pixels[i]` to `out[i]`.
    pub(crate) fn lightness(
        &mut self,
        img: &LinearImage,
        mask: Option<&PixelMask>,
        pixels: &[Pixel],
        params: &SprayParams,
        radius: f64,
        out: &mut [Rgb],
    ) {
        debug_assert_eq!(pixels.len(), out.len());
        let (w, h) = (img.width(), img.height());
        let data = img.data();
        let sprays = params.num_sprays;
        let jobs = pixels.len() * sprays;
        if jobs == 0 {
            return;
        }

        let fill = |job: usize, buf: &mut Vec<usize>| {
            fill_candidates(
                pixels[job / sprays],
                w,
                h,
                params,
                radius,
                job % sprays,
                buf,
            );
            if let Some(m) = mask {
                let flags = m.flags();
                buf.retain(|&idx| !flags[idx]);
            }
            for &idx in buf.iter() {
                prefetch(data, idx * 3);
            }
        };

        for o in out.iter_mut() {
            *o = [0.0; 3];
        }
        let [even, odd] = &mut self.buffers;
        fill(0, even);
        for job in 0..jobs {
            let (current, next) = if job % 2 == 0 {
                (&*even, &mut *odd)
            } else {
                (&*odd, &mut *even)
            };
            if job + 1 < jobs {
                fill(job + 1, next);
            }
            let slot = job / sprays;
            let p = pixels[slot];
            let own = img.pixel(p.x, p.y);
            let own = [
                own[0].max(EPSILON),
                own[1].max(EPSILON),
                own[2].max(EPSILON),
            ];
            let mut top = own;
            for &idx in current.iter() {
                let i = idx * 3;
                top[0] = top[0].max(data[i]);
                top[1] = top[1].max(data[i + 1]);
                top[2] = top[2].max(data[i + 2]);
            }
            let acc = &mut out[slot];
            acc[0] += own[0] / top[0];
            acc[1] += own[1] / top[1];
            acc[2] += own[2] / top[2];
        }
        let n = sprays as f64;
        for o in out.iter_mut() {
            *o = [o[0] / n, o[1] / n, o[2] / n];
        }
    }
}

#[inline(always)]
fn prefetch(data: &[f64], i: usize) {
    #[cfg(target_arch = "x86_64")]
    if i < data.len() {
        // SAFETY: prefetching is a hint and the pointer stays in bounds.
        unsafe {
            core::arch::x86_64::_mm_prefetch(
                data.as_ptr().add(i) as *const i8,
                core::arch::x86_64::_MM_HINT_T0,
            );
        }
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = (data, i);
}

/// Replaces every pixel with its spray lightness, producing the locally
/// white-balanced and brightened Retinex image.
pub fn rsr_render(img: &LinearImage, params: &SprayParams) -> Result<LinearImage> {
    params.validate()?;
    let radius = params.radius_for(img.width(), img.height());
    let mut data = Vec::with_capacity(img.data().len());
    let mut batch = SprayBatch::new(params.points_per_spray);
    let mut row = alloc::vec![[0.0; 3]; img.width()];
    let mut pixels = Vec::with_capacity(img.width());
    for y in 0..img.height() {
        pixels.clear();
        pixels.extend((0..img.width()).map(|x| Pixel::new(x, y)));
        batch.lightness(img, None, &pixels, params, radius, &mut row);
        data.extend(row.iter().flatten());
    }
    LinearImage::with_bit_depth(img.width(), img.height(), data, img.bit_depth())
}
