use core::fmt;

/// Errors produced by the estimation core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Width or height of zero.
    EmptyImage,
    /// Raster length does not match `width * height * 3`.
    DataLength { expected: usize, actual: usize },
    /// A negative or non-finite intensity.
    InvalidIntensity(f64),
    /// Mask dimensions differ from the image it annotates.
    MaskMismatch {
        image: (usize, usize),
        mask: (usize, usize),
    },
    /// Rectangle extends past the image bounds.
    RectOutOfBounds(crate::image::Rect),
    /// Kernel size must be odd.
    EvenKernel(usize),
    /// Kernel larger than `2 * min(width, height) - 1`.
    KernelTooLarge { size: usize, max: usize },
    /// A parameter outside of its valid range.
    InvalidParameter(&'static str),
    /// Illuminant components must be strictly positive for correction.
    NonPositiveIlluminant,
    /// A vector with zero norm where a direction is required.
    ZeroVector,
    /// Every candidate pixel is excluded by the mask.
    NothingSampled,
    /// Statistics over an empty sample.
    EmptySample,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyImage => write!(f, "image has zero width or height"),
            Error::DataLength { expected, actual } => {
                write!(f, "expected {expected} samples, got {actual}")
            }
            Error::InvalidIntensity(v) => {
                write!(f, "intensity must be finite and non-negative, got {v}")
            }
            Error::MaskMismatch { image, mask } => write!(
                f,
                "mask is {}x{} but image is {}x{}",
                mask.0, mask.1, image.0, image.1
            ),
            Error::RectOutOfBounds(r) => write!(
                f,
                "rectangle {}:{}:{}:{} lies outside the image",
                r.x, r.y, r.w, r.h
            ),
            Error::EvenKernel(_) => write!(f, "kernel size must be odd"),
            Error::KernelTooLarge { size, max } => {
                write!(
                    f,
                    "kernel size {size} exceeds the maximum of {max} for this image"
                )
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NonPositiveIlluminant => {
                write!(
                    f,
                    "illuminant estimate must have strictly positive components"
                )
            }
            Error::ZeroVector => write!(f, "vector has zero norm"),
            Error::NothingSampled => write!(f, "no unmasked pixel was sampled"),
            Error::EmptySample => write!(f, "cannot summarize an empty sample"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
