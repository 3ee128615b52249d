// Thin shims so the same code builds with and without std.

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline]
    pub fn atan2(y: f64, x: f64) -> f64 {
        y.atan2(x)
    }
    #[inline]
    pub fn powf(x: f64, y: f64) -> f64 {
        x.powf(y)
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[inline]
    pub fn atan2(y: f64, x: f64) -> f64 {
        libm::atan2(y, x)
    }
    #[inline]
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
}

pub(crate) use imp::*;

/// Euclidean norm. Squares are added smallest first, so the result does not
/// depend on the order of the components.
#[inline]
pub(crate) fn norm(v: &[f64; 3]) -> f64 {
    let (a, b, c) = (v[0] * v[0], v[1] * v[1], v[2] * v[2]);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let (lo, mid, hi) = if c <= lo {
        (c, lo, hi)
    } else if c <= hi {
        (lo, c, hi)
    } else {
        (lo, hi, c)
    };
    sqrt(lo + mid + hi)
}
