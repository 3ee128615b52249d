//! The Color Sparrow global illuminant estimator.
//!
//! For a pixel `i` the ratio between its original intensity and its RSR
//! lightness, `p_c(i) = I_c(i) / R_c(i)`, is a local illuminant estimate whose
//! norm doubles as a brightness weight. With an averaging kernel both `I` and
//! `R` are box-averaged over the `k x k` window around `i` before the ratio
//! is taken. Local estimates are computed on a sparse grid (every `c`-th
//! column of every `r`-th row) and summed into a single direction.
//!
//! Only the RSR values inside each sampled pixel's window are evaluated, which
//! is what keeps the estimator close to gray-world in cost.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{clamp, Kernel, LinearImage, PixelMask};
use crate::math;
use crate::rsr::SprayBatch;
use crate::spray::{Pixel, SprayParams};
use crate::{Rgb, EPSILON};

/// How local estimates are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Sum the raw local vectors, so brighter regions count more.
    #[default]
    Weighted,
    /// Sum unit-length local vectors.
    Unit,
}

/// Full parameter set of the estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsParams {
    pub spray: SprayParams,
    /// Side of the averaging window; 1 disables smoothing.
    pub kernel_size: usize,
    pub row_step: usize,
    pub col_step: usize,
    pub weighting: Weighting,
}

impl Default for CsParams {
    /// `N = 1`, `n = 225`, 5x5 averaging, `r = c = 50`, weighted sum.
    fn default() -> Self {
        Self {
            spray: SprayParams {
                num_sprays: 1,
                points_per_spray: 225,
                radius: None,
                seed: 0,
            },
            kernel_size: 5,
            row_step: 50,
            col_step: 50,
            weighting: Weighting::Weighted,
        }
    }
}

impl CsParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.spray.seed = seed;
        self
    }

    pub fn with_steps(mut self, row_step: usize, col_step: usize) -> Self {
        self.row_step = row_step;
        self.col_step = col_step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spray.validate()?;
        Kernel::new(self.kernel_size)?;
        if self.row_step == 0 || self.col_step == 0 {
            return Err(Error::InvalidParameter(
                "row and column steps must be at least 1",
            ));
        }
        Ok(())
    }
}

/// A local illuminant estimate at one pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalChange {
    pub position: Pixel,
    /// Per-channel ratio of original to Retinex intensity.
    pub p: Rgb,
    /// Euclidean norm of `p`.
    pub w: f64,
}

/// A global illuminant estimate. Only its direction carries meaning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IlluminantEstimate {
    e: Rgb,
}

impl IlluminantEstimate {
    /// Wraps a non-negative, finite vector with non-zero norm.
    pub fn new(e: Rgb) -> Result<Self> {
        if let Some(&bad) = e.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidIntensity(bad));
        }
        if math::norm(&e) == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { e })
    }

    #[inline]
    pub fn rgb(&self) -> Rgb {
        self.e
    }

    pub fn norm(&self) -> f64 {
        math::norm(&self.e)
    }

    /// Direction as a unit vector.
    pub fn unit(&self) -> Rgb {
        let n = self.norm();
        [self.e[0] / n, self.e[1] / n, self.e[2] / n]
    }
}

/// Local estimate at `pixel`, ignoring any mask.
///
/// # Panics
///
/// If `pixel` lies outside the image.
pub fn local_change(img: &LinearImage, pixel: Pixel, params: &CsParams) -> LocalChange {
    local_change_masked(img, None, pixel, params)
}

/// Local estimate at `pixel`; spray candidates on excluded pixels are skipped.
///
/// The averaging window is clamped at the image border, matching a full-image
/// box blur with replicated edges.
pub fn local_change_masked(
    img: &LinearImage,
    mask: Option<&PixelMask>,
    pixel: Pixel,
    params: &CsParams,
) -> LocalChange {
    let (w, h) = (img.width(), img.height());
    assert!(pixel.x < w && pixel.y < h, "pixel out of bounds");
    let radius = params.spray.radius_for(w, h);
    let half = (params.kernel_size / 2) as isize;

    let mut window = Vec::with_capacity(params.kernel_size * params.kernel_size);
    for dy in -half..=half {
        let y = clamp(pixel.y as isize + dy, h);
        for dx in -half..=half {
            window.push(Pixel::new(clamp(pixel.x as isize + dx, w), y));
        }
    }
    let mut retinex = alloc::vec![[0.0; 3]; window.len()];
    SprayBatch::new(params.spray.points_per_spray).lightness(
        img,
        mask,
        &window,
        &params.spray,
        radius,
        &mut retinex,
    );

    let mut sum_i = [0.0; 3];
    let mut sum_r = [0.0; 3];
    for (q, r) in window.iter().zip(&retinex) {
        let own = img.pixel(q.x, q.y);
        for c in 0..3 {
            sum_i[c] += own[c].max(EPSILON);
            sum_r[c] += r[c];
        }
    }
    // Window averages share the same divisor, so it cancels in the ratio.
    let p = [
        sum_i[0] / sum_r[0],
        sum_i[1] / sum_r[1],
        sum_i[2] / sum_r[2],
    ];
    LocalChange {
        position: pixel,
        p,
        w: math::norm(&p),
    }
}

/// Pixels visited by the estimator: rows `0, r, 2r, ...`, and within each of
/// them columns `0, c, 2c, ...`, minus excluded pixels. Row-major order.
///
/// # Panics
///
/// If `row_step` or `col_step` is zero.
pub fn sample_grid(
    (width, height): (usize, usize),
    mask: &PixelMask,
    row_step: usize,
    col_step: usize,
) -> Vec<Pixel> {
    assert!(
        row_step > 0 && col_step > 0,
        "sampling steps must be positive"
    );
    (0..height)
        .step_by(row_step)
        .flat_map(|y| (0..width).step_by(col_step).map(move |x| Pixel::new(x, y)))
        .filter(|p| !mask.is_excluded(p.x, p.y))
        .collect()
}

/// Sums local estimates in order. Zero-norm entries are skipped in unit mode.
pub fn accumulate(changes: &[LocalChange], weighting: Weighting) -> Result<IlluminantEstimate> {
    let mut e = [0.0; 3];
    for lc in changes {
        match weighting {
            Weighting::Weighted => {
                for c in 0..3 {
                    e[c] += lc.p[c];
                }
            }
            Weighting::Unit => {
                if lc.w == 0.0 {
                    continue;
                }
                for c in 0..3 {
                    e[c] += lc.p[c] / lc.w;
                }
            }
        }
    }
    IlluminantEstimate::new(e)
}

/// Estimates the global illuminant of `img`, skipping excluded pixels both as
/// sample positions and as spray members.
pub fn estimate(
    img: &LinearImage,
    mask: &PixelMask,
    params: &CsParams,
) -> Result<IlluminantEstimate> {
    params.validate()?;
    mask.check_matches(img)?;
    let grid = sample_grid(
        (img.width(), img.height()),
        mask,
        params.row_step,
        params.col_step,
    );
    if grid.is_empty() {
        return Err(Error::NothingSampled);
    }
    let changes: Vec<LocalChange> = grid
        .into_iter()
        .map(|p| local_change_masked(img, Some(mask), p, params))
        .collect();
    accumulate(&changes, params.weighting)
}
