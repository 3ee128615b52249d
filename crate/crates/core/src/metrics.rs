//! Angular error and the summary statistics used to compare estimators.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::Rgb;

/// Angle in degrees between two RGB directions.
///
/// Computed as `atan2(|e x t|, e . t)` on the normalised vectors, which stays
/// accurate for nearly parallel inputs where `acos` of the cosine does not.
pub fn angular_error(estimate: &Rgb, truth: &Rgb) -> Result<f64> {
    let (ne, nt) = (math::norm(estimate), math::norm(truth));
    if !(ne > 0.0 && nt > 0.0) || !ne.is_finite() || !nt.is_finite() {
        return Err(Error::ZeroVector);
    }
    let e = estimate.map(|v| v / ne);
    let t = truth.map(|v| v / nt);
    let cross = [
        e[1] * t[2] - e[2] * t[1],
        e[2] * t[0] - e[0] * t[2],
        e[0] * t[1] - e[1] * t[0],
    ];
    let dot = e[0] * t[0] + e[1] * t[1] + e[2] * t[2];
    Ok(math::atan2(math::norm(&cross), dot).to_degrees())
}

/// Mean, median, trimean and maximum of a set of angular errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub mean: f64,
    pub median: f64,
    pub trimean: f64,
    pub max: f64,
    pub count: usize,
    /// Wall time spent producing the errors, in seconds.
    pub total_time: f64,
}

/// Summarises `errors` (degrees).
///
/// Quartiles interpolate linearly between order statistics at rank
/// `(n - 1) * q`; the trimean is `(Q1 + 2 * Q2 + Q3) / 4`.
pub fn summarize(errors: &[f64], total_time: f64) -> Result<ErrorStats> {
    if errors.is_empty() {
        return Err(Error::EmptySample);
    }
    if errors.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidParameter("angular errors must be finite"));
    }
    let mut sorted: Vec<f64> = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    Ok(ErrorStats {
        mean,
        median,
        trimean: (q1 + 2.0 * median + q3) / 4.0,
        max: sorted[sorted.len() - 1],
        count: sorted.len(),
        total_time,
    })
}

/// Linear-interpolation quantile of an ascending, non-empty sample.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_angles() {
        assert!(
            angular_error(&[0.3, 0.5, 0.2], &[0.3, 0.5, 0.2])
                .unwrap()
                .abs()
                < 1e-9
        );
        assert!((angular_error(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap() - 90.0).abs() < 1e-9);
        assert!((angular_error(&[1.0, 1.0, 0.0], &[1.0, 0.0, 0.0]).unwrap() - 45.0).abs() < 1e-9);
        assert_eq!(
            angular_error(&[0.0; 3], &[1.0, 0.0, 0.0]),
            Err(Error::ZeroVector)
        );
        assert_eq!(
            angular_error(&[1.0, 0.0, 0.0], &[0.0; 3]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn singleton() {
        let s = summarize(&[5.0], 0.25).unwrap();
        assert_eq!(
            (s.mean, s.median, s.trimean, s.max, s.count),
            (5.0, 5.0, 5.0, 5.0, 1)
        );
        assert_eq!(s.total_time, 0.25);
    }

    #[test]
    fn four_values() {
        let s = summarize(&[4.0, 1.0, 3.0, 2.0], 0.0).unwrap();
        assert_eq!((s.mean, s.median, s.max), (2.5, 2.5, 4.0));
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.25), 1.75);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.75), 3.25);
        assert_eq!(s.trimean, (1.75 + 5.0 + 3.25) / 4.0);
    }

    #[test]
    fn odd_median() {
        let s = summarize(&[9.0, 1.0, 2.0], 0.0).unwrap();
        assert_eq!(s.median, 2.0);
    }

    #[test]
    fn rejects_empty_and_nan() {
        assert_eq!(summarize(&[], 0.0), Err(Error::EmptySample));
        assert!(summarize(&[1.0, f64::NAN], 0.0).is_err());
    }
}
