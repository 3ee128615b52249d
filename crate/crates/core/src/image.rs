//! Linear RGB rasters, exclusion masks, box filtering and diagonal correction.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::Rgb;

/// A `width x height` raster of non-negative linear RGB intensities.
///
/// Samples are stored interleaved, row-major, `R G B` per pixel. The nominal
/// range is `[0, 1]`; values above one are allowed so intermediate results
/// can exist before clipping.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
    bit_depth: u8,
}

impl LinearImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        Self::with_bit_depth(width, height, data, 16)
    }

    /// Builds an image and records the integer bit depth it was decoded from.
    pub fn with_bit_depth(
        width: usize,
        height: usize,
        data: Vec<f64>,
        bit_depth: u8,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let expected = width * height * 3;
        if data.len() != expected {
            return Err(Error::DataLength {
                expected,
                actual: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidIntensity(bad));
        }
        Ok(Self {
            width,
            height,
            data,
            bit_depth,
        })
    }

    /// A constant-colour image.
    ///
    /// # Panics
    ///
    /// If either dimension is zero or the colour is negative.
    pub fn filled(width: usize, height: usize, rgb: Rgb) -> Self {
        Self::from_fn(width, height, |_, _| rgb)
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    ///
    /// # Panics
    ///
    /// If either dimension is zero or `f` yields a negative or non-finite value.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> Rgb) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data).expect("invalid image")
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of pixels.
    #[inline]
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    /// Interleaved `R G B` samples.
    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// Iterates pixels in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = Rgb> + '_ {
        self.data.chunks_exact(3).map(|p| [p[0], p[1], p[2]])
    }

    /// Applies `f` to every pixel.
    pub fn map(&self, mut f: impl FnMut(Rgb) -> Rgb) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for p in self.pixels() {
            data.extend_from_slice(&f(p));
        }
        Self::with_bit_depth(self.width, self.height, data, self.bit_depth)
    }

    /// Reorders channels: output channel `c` takes input channel `order[c]`.
    pub fn permute_channels(&self, order: [usize; 3]) -> Self {
        self.map(|p| [p[order[0]], p[order[1]], p[order[2]]])
            .expect("permutation keeps values valid")
    }

    /// Multiplies every sample by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        self.map(|p| [p[0] * s, p[1] * s, p[2] * s])
    }
}

/// Axis-aligned pixel rectangle: top-left corner plus extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.x.checked_add(self.w).is_some_and(|r| r <= width)
            && self.y.checked_add(self.h).is_some_and(|b| b <= height)
    }
}

/// Per-pixel exclusion flags, e.g. covering a colour checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelMask {
    width: usize,
    height: usize,
    excluded: Vec<bool>,
}

impl PixelMask {
    /// A mask that excludes nothing.
    pub fn none(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            excluded: vec![false; width * height],
        }
    }

    /// Excludes the union of `rects`; every rectangle must lie inside the image.
    pub fn from_rects(width: usize, height: usize, rects: &[Rect]) -> Result<Self> {
        let mut mask = Self::none(width, height);
        for r in rects {
            mask.exclude(*r)?;
        }
        Ok(mask)
    }

    pub fn exclude(&mut self, r: Rect) -> Result<()> {
        if !r.fits(self.width, self.height) {
            return Err(Error::RectOutOfBounds(r));
        }
        for y in r.y..r.y + r.h {
            let row = y * self.width;
            self.excluded[row + r.x..row + r.x + r.w].fill(true);
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn is_excluded(&self, x: usize, y: usize) -> bool {
        self.excluded[y * self.width + x]
    }

    /// Row-major exclusion flags.
    pub fn flags(&self) -> &[bool] {
        &self.excluded
    }

    pub fn excluded_count(&self) -> usize {
        self.excluded.iter().filter(|&&e| e).count()
    }

    pub(crate) fn check_matches(&self, img: &LinearImage) -> Result<()> {
        if self.width != img.width() || self.height != img.height() {
            return Err(Error::MaskMismatch {
                image: (img.width(), img.height()),
                mask: (self.width, self.height),
            });
        }
        Ok(())
    }
}

/// Square averaging kernel of odd side length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Kernel {
    size: usize,
}

impl Kernel {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("kernel size must be at least 1"));
        }
        if size % 2 == 0 {
            return Err(Error::EvenKernel(size));
        }
        Ok(Self { size })
    }

    pub fn identity() -> Self {
        Self { size: 1 }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.size / 2
    }

    /// Weight of every tap; `size * size` of them sum to one.
    pub fn weight(&self) -> f64 {
        1.0 / (self.size * self.size) as f64
    }
}

/// Convolves every channel with an averaging kernel, replicating edge pixels.
pub fn box_blur(img: &LinearImage, kernel: Kernel) -> Result<LinearImage> {
    let max = 2 * img.width().min(img.height()) - 1;
    if kernel.size() > max {
        return Err(Error::KernelTooLarge {
            size: kernel.size(),
            max,
        });
    }
    if kernel.size() == 1 {
        return Ok(img.clone());
    }

    let (w, h) = (img.width(), img.height());
    let r = kernel.radius() as isize;
    let norm = 1.0 / kernel.size() as f64;
    let src = img.data();

    // Separable: horizontal then vertical, each a 1-D mean.
    let mut tmp = vec![0.0; src.len()];
    for y in 0..h {
        let row = y * w;
        for x in 0..w {
            let mut acc = [0.0; 3];
            for dx in -r..=r {
                let xs = clamp(x as isize + dx, w);
                let i = (row + xs) * 3;
                acc[0] += src[i];
                acc[1] += src[i + 1];
                acc[2] += src[i + 2];
            }
            let o = (row + x) * 3;
            tmp[o] = acc[0] * norm;
            tmp[o + 1] = acc[1] * norm;
            tmp[o + 2] = acc[2] * norm;
        }
    }

    let mut out = vec![0.0; src.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0; 3];
            for dy in -r..=r {
                let ys = clamp(y as isize + dy, h);
                let i = (ys * w + x) * 3;
                acc[0] += tmp[i];
                acc[1] += tmp[i + 1];
                acc[2] += tmp[i + 2];
            }
            let o = (y * w + x) * 3;
            out[o] = acc[0] * norm;
            out[o + 1] = acc[1] * norm;
            out[o + 2] = acc[2] * norm;
        }
    }
    LinearImage::with_bit_depth(w, h, out, img.bit_depth())
}

#[inline]
pub(crate) fn clamp(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// Von Kries correction towards a neutral illuminant.
///
/// Channel `c` is multiplied by `min(e) / e_c`, so the largest gain is one,
/// and the result is clipped to `[0, 1]`.
pub fn diagonal_correct(img: &LinearImage, e: &Rgb) -> Result<LinearImage> {
    diagonal_correct_to(img, e, &[1.0, 1.0, 1.0])
}

/// Von Kries correction from illuminant `e` towards `target`.
///
/// Gains are `target_c / e_c`, rescaled so the largest gain is one.
pub fn diagonal_correct_to(img: &LinearImage, e: &Rgb, target: &Rgb) -> Result<LinearImage> {
    if e.iter()
        .chain(target.iter())
        .any(|&v| !(v > 0.0 && v.is_finite()))
    {
        return Err(Error::NonPositiveIlluminant);
    }
    let mut gains = [target[0] / e[0], target[1] / e[1], target[2] / e[2]];
    let top = gains[0].max(gains[1]).max(gains[2]);
    for g in &mut gains {
        *g /= top;
    }
    img.map(|p| {
        [
            (p[0] * gains[0]).clamp(0.0, 1.0),
            (p[1] * gains[1]).clamp(0.0, 1.0),
            (p[2] * gains[2]).clamp(0.0, 1.0),
        ]
    })
}
