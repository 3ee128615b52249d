//! Global illuminant estimation from Random Sprays Retinex (RSR) local
//! estimates.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! pieces: the linear image raster, box filtering and diagonal correction,
//! random spray generation and spray lightness, the "Color Sparrow" estimator
//! built on top of it, the gray-world family of baselines, and angular error
//! statistics. File formats, dataset handling and the command line live in the
//! `sparrow` crate.
//!
//! ```
//! use sparrow_core::{estimate, CsParams, LinearImage, PixelMask};
//!
//! let img = LinearImage::filled(64, 48, [0.8, 0.4, 0.4]);
//! let mask = PixelMask::none(64, 48);
//! let e = estimate(&img, &mask, &CsParams::default()).unwrap();
//! let unit = e.unit();
//! assert!((unit[0] - 2.0 * unit[1]).abs() < 1e-9);
//! ```
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod baselines;
mod error;
pub mod estimator;
pub mod image;
mod math;
pub mod metrics;
pub mod rsr;
pub mod spray;
pub mod synthetic;

pub use crate::baselines::{
    gray_world, sdwgw, shades_of_gray, DEFAULT_SDWGW_BLOCKS, DEFAULT_SHADES_OF_GRAY_P,
};
pub use crate::error::{Error, Result};
pub use crate::estimator::{
    accumulate, estimate, local_change, local_change_masked, sample_grid, CsParams,
    IlluminantEstimate, LocalChange, Weighting,
};
pub use crate::image::{
    box_blur, diagonal_correct, diagonal_correct_to, Kernel, LinearImage, PixelMask, Rect,
};
pub use crate::metrics::{angular_error, summarize, ErrorStats};
pub use crate::rsr::{rsr_lightness, rsr_lightness_masked, rsr_render};
pub use crate::spray::{generate_spray, Pixel, Spray, SprayParams, SpraySampler};

/// An RGB triple of linear intensities or illuminant components.
pub type Rgb = [f64; 3];

/// Floor applied to intensities wherever a ratio is formed, one 16-bit code.
pub const EPSILON: f64 = 1.0 / 65535.0;
