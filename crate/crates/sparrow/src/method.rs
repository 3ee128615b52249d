//! Named estimators and their rayon-parallel drivers.

use std::fmt;

use rayon::prelude::*;
use sparrow_core::{
    accumulate, gray_world, local_change_masked, rsr_lightness, sample_grid, sdwgw, shades_of_gray,
    CsParams, IlluminantEstimate, LinearImage, Pixel, PixelMask, SprayParams, DEFAULT_SDWGW_BLOCKS,
    DEFAULT_SHADES_OF_GRAY_P,
};

use crate::error::Result;

/// A global illuminant estimator together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Cs(CsParams),
    GrayWorld,
    Sdwgw { blocks: usize },
    ShadesOfGray { p: f64 },
}

impl Default for Method {
    fn default() -> Self {
        Method::Cs(CsParams::default())
    }
}

impl Method {
    pub fn sdwgw() -> Self {
        Method::Sdwgw {
            blocks: DEFAULT_SDWGW_BLOCKS,
        }
    }

    pub fn shades_of_gray() -> Self {
        Method::ShadesOfGray {
            p: DEFAULT_SHADES_OF_GRAY_P,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Cs(_) => "cs",
            Method::GrayWorld => "gray-world",
            Method::Sdwgw { .. } => "sdwgw",
            Method::ShadesOfGray { .. } => "shades-of-gray",
        }
    }

    /// Checks parameters that do not depend on the image.
    pub fn validate(&self) -> Result<()> {
        match self {
            Method::Cs(params) => params.validate()?,
            Method::Sdwgw { blocks: 0 } => {
                return Err(sparrow_core::Error::InvalidParameter(
                    "number of blocks must be at least 1",
                )
                .into())
            }
            Method::ShadesOfGray { p } if !(*p >= 1.0 && p.is_finite()) => {
                return Err(sparrow_core::Error::InvalidParameter(
                    "Minkowski exponent must be finite and >= 1",
                )
                .into())
            }
            _ => {}
        }
        Ok(())
    }

    /// Estimates on the calling thread.
    pub fn estimate(&self, img: &LinearImage, mask: &PixelMask) -> Result<IlluminantEstimate> {
        Ok(match self {
            Method::Cs(params) => sparrow_core::estimate(img, mask, params)?,
            Method::GrayWorld => gray_world(img, mask)?,
            Method::Sdwgw { blocks } => sdwgw(img, mask, *blocks)?,
            Method::ShadesOfGray { p } => shades_of_gray(img, mask, *p)?,
        })
    }

    /// Like [`Method::estimate`], spreading the sampled pixels of CS over the
    /// current rayon pool. The result is bit-identical to the serial one.
    pub fn par_estimate(&self, img: &LinearImage, mask: &PixelMask) -> Result<IlluminantEstimate> {
        match self {
            Method::Cs(params) => par_estimate(img, mask, params),
            other => other.estimate(img, mask),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Cs(p) => write!(
                f,
                "cs(N={}, n={}, k={}, r={}, c={}, {:?})",
                p.spray.num_sprays,
                p.spray.points_per_spray,
                p.kernel_size,
                p.row_step,
                p.col_step,
                p.weighting
            ),
            Method::GrayWorld => f.write_str("gray-world"),
            Method::Sdwgw { blocks } => write!(f, "sdwgw(blocks={blocks})"),
            Method::ShadesOfGray { p } => write!(f, "shades-of-gray(p={p})"),
        }
    }
}

/// Parallel CS estimate. Local changes are gathered in grid order and summed
/// serially, so the sum is the same as in [`sparrow_core::estimate`].
pub fn par_estimate(
    img: &LinearImage,
    mask: &PixelMask,
    params: &CsParams,
) -> Result<IlluminantEstimate> {
    params.validate()?;
    if (mask.width(), mask.height()) != (img.width(), img.height()) {
        // Let the core routine produce the mismatch error.
        return Ok(sparrow_core::estimate(img, mask, params)?);
    }
    let grid = sample_grid(
        (img.width(), img.height()),
        mask,
        params.row_step,
        params.col_step,
    );
    if grid.is_empty() {
        return Err(sparrow_core::Error::NothingSampled.into());
    }
    let changes: Vec<_> = grid
        .par_iter()
        .map(|&p| local_change_masked(img, Some(mask), p, params))
        .collect();
    Ok(accumulate(&changes, params.weighting)?)
}

/// Parallel [`sparrow_core::rsr_render`]; rows are processed independently.
pub fn par_rsr_render(img: &LinearImage, params: &SprayParams) -> Result<LinearImage> {
    params.validate()?;
    let width = img.width();
    let rows: Vec<Vec<f64>> = (0..img.height())
        .into_par_iter()
        .map(|y| {
            (0..width)
                .flat_map(|x| rsr_lightness(img, Pixel::new(x, y), params))
                .collect()
        })
        .collect();
    Ok(LinearImage::with_bit_depth(
        width,
        img.height(),
        rows.concat(),
        img.bit_depth(),
    )?)
}
