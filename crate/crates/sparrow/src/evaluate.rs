//! Dataset evaluation, timing benchmark and parameter sweeps.
//!
//! Images are evaluated on the current rayon pool. Results are always
//! reported in manifest order, so output does not depend on the number of
//! threads.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sparrow_core::{angular_error, summarize, CsParams, ErrorStats, PixelMask, Rgb};

use crate::error::{Error, Result};
use crate::manifest::{Manifest, ManifestEntry};
use crate::method::Method;
use crate::png_io::load_png;

/// Outcome for one manifest entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageResult {
    pub image: PathBuf,
    pub estimate: Rgb,
    pub error_deg: f64,
    /// Load plus estimation time.
    pub time: Duration,
}

#[derive(Debug)]
pub struct Skipped {
    pub image: PathBuf,
    pub error: Error,
}

#[derive(Debug)]
pub struct Evaluation {
    pub method: Method,
    pub results: Vec<ImageResult>,
    pub skipped: Vec<Skipped>,
    pub stats: ErrorStats,
}

/// Loads, masks and estimates one entry.
pub fn evaluate_entry(entry: &ManifestEntry, method: &Method) -> Result<ImageResult> {
    let start = Instant::now();
    let img = load_png(&entry.image)?;
    let mask = PixelMask::from_rects(img.width(), img.height(), &entry.mask)?;
    let e = method.estimate(&img, &mask)?;
    let time = start.elapsed();
    Ok(ImageResult {
        image: entry.image.clone(),
        estimate: e.rgb(),
        error_deg: angular_error(&e.rgb(), &entry.ground_truth)?,
        time,
    })
}

/// Evaluates every entry. Entries that fail are skipped and listed; the call
/// only fails when the manifest is empty or nothing could be evaluated.
pub fn evaluate(manifest: &Manifest, method: &Method) -> Result<Evaluation> {
    method.validate()?;
    if manifest.is_empty() {
        return Err(Error::EmptyManifest);
    }
    let start = Instant::now();
    let outcomes: Vec<Result<ImageResult>> = manifest
        .entries
        .par_iter()
        .map(|entry| evaluate_entry(entry, method))
        .collect();
    let total = start.elapsed();

    let mut results = Vec::with_capacity(outcomes.len());
    let mut skipped = Vec::new();
    for (entry, outcome) in manifest.entries.iter().zip(outcomes) {
        match outcome {
            Ok(r) => results.push(r),
            Err(error) => skipped.push(Skipped {
                image: entry.image.clone(),
                error,
            }),
        }
    }
    if results.is_empty() {
        return Err(Error::NothingEvaluated);
    }
    let errors: Vec<f64> = results.iter().map(|r| r.error_deg).collect();
    let stats = summarize(&errors, total.as_secs_f64())?;
    Ok(Evaluation {
        method: *method,
        results,
        skipped,
        stats,
    })
}

/// Writes the per-image CSV `image,error_deg,time_ms`.
///
/// Timings differ from run to run; the column is left empty unless
/// `timing` is set, keeping the file reproducible by default.
pub fn write_results<W: Write>(results: &[ImageResult], writer: W, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["image", "error_deg", "time_ms"])?;
    for r in results {
        let time = if timing {
            format_ms(r.time)
        } else {
            String::new()
        };
        w.write_record([
            r.image.to_string_lossy().as_ref(),
            &r.error_deg.to_string(),
            &time,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<results>", e))
}

fn format_ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

/// Human-readable statistics in the usual mean / median / trimean / max layout.
pub fn stats_table(rows: &[(String, ErrorStats)]) -> String {
    let width = rows
        .iter()
        .map(|(name, _)| name.len())
        .max()
        .unwrap_or(0)
        .max(6);
    let mut out = format!(
        "{:<width$}  {:>8}  {:>10}  {:>11}  {:>7}  {:>6}  {:>9}\n",
        "method", "mean (°)", "median (°)", "trimean (°)", "max (°)", "images", "time (s)"
    );
    for (name, s) in rows {
        out.push_str(&format!(
            "{:<width$}  {:>8.2}  {:>10.2}  {:>11.2}  {:>7.2}  {:>6}  {:>9.2}\n",
            name, s.mean, s.median, s.trimean, s.max, s.count, s.total_time
        ));
    }
    out
}

/// Average wall time of one estimator over a manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub method: Method,
    pub images: usize,
    /// Total time over all images, one sample per repeat.
    pub samples: Vec<Duration>,
}

impl BenchResult {
    pub fn mean(&self) -> Duration {
        self.samples.iter().sum::<Duration>() / self.samples.len() as u32
    }

    pub fn per_image(&self) -> Duration {
        self.mean() / self.images.max(1) as u32
    }
}

/// Times each method on the calling thread, loading and estimating every
/// image. Repeats are interleaved across methods so drift in the machine's
/// state affects all of them alike.
pub fn bench(manifest: &Manifest, methods: &[Method], repeats: usize) -> Result<Vec<BenchResult>> {
    if repeats == 0 {
        return Err(Error::Usage("repeats must be at least 1".into()));
    }
    if manifest.is_empty() {
        return Err(Error::EmptyManifest);
    }
    for m in methods {
        m.validate()?;
    }
    let mut out: Vec<BenchResult> = methods
        .iter()
        .map(|m| BenchResult {
            method: *m,
            images: manifest.len(),
            samples: Vec::with_capacity(repeats),
        })
        .collect();
    for _ in 0..repeats {
        for (method, result) in methods.iter().zip(&mut out) {
            let start = Instant::now();
            for entry in &manifest.entries {
                let img = load_png(&entry.image)?;
                let mask = PixelMask::from_rects(img.width(), img.height(), &entry.mask)?;
                std::hint::black_box(method.estimate(&img, &mask)?);
            }
            result.samples.push(start.elapsed());
        }
    }
    Ok(out)
}

/// Writes `method,repeats,images,mean_s,per_image_ms`.
pub fn write_bench<W: Write>(results: &[BenchResult], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["method", "repeats", "images", "mean_s", "per_image_ms"])?;
    for r in results {
        w.write_record([
            r.method.name().to_string(),
            r.samples.len().to_string(),
            r.images.to_string(),
            format!("{:.4}", r.mean().as_secs_f64()),
            format_ms(r.per_image()),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<bench>", e))
}

/// Values tried for each CS parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub sprays: Vec<usize>,
    pub spray_size: Vec<usize>,
    pub kernel: Vec<usize>,
    pub row_step: Vec<usize>,
    pub col_step: Vec<usize>,
    /// Use `row_step` for both steps instead of their cross product.
    pub tied_steps: bool,
}

impl SweepGrid {
    /// A single point at `base`.
    pub fn at(base: &CsParams) -> Self {
        Self {
            sprays: vec![base.spray.num_sprays],
            spray_size: vec![base.spray.points_per_spray],
            kernel: vec![base.kernel_size],
            row_step: vec![base.row_step],
            col_step: vec![base.col_step],
            tied_steps: false,
        }
    }

    /// All parameter sets, later axes varying fastest.
    pub fn points(&self, base: &CsParams) -> Vec<CsParams> {
        let steps: Vec<(usize, usize)> = if self.tied_steps {
            self.row_step.iter().map(|&s| (s, s)).collect()
        } else {
            self.row_step
                .iter()
                .flat_map(|&r| self.col_step.iter().map(move |&c| (r, c)))
                .collect()
        };
        let mut out = Vec::new();
        for &sprays in &self.sprays {
            for &size in &self.spray_size {
                for &kernel in &self.kernel {
                    for &(r, c) in &steps {
                        let mut p = *base;
                        p.spray.num_sprays = sprays;
                        p.spray.points_per_spray = size;
                        p.kernel_size = kernel;
                        p.row_step = r;
                        p.col_step = c;
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub params: CsParams,
    pub stats: ErrorStats,
}

/// Evaluates CS at every grid point. All points are validated first.
pub fn sweep(manifest: &Manifest, base: &CsParams, grid: &SweepGrid) -> Result<Vec<SweepPoint>> {
    let points = grid.points(base);
    if points.is_empty() {
        return Err(Error::Usage("sweep grid is empty".into()));
    }
    for p in &points {
        p.validate()?;
    }
    points
        .into_iter()
        .map(|params| {
            let eval = evaluate(manifest, &Method::Cs(params))?;
            Ok(SweepPoint {
                params,
                stats: eval.stats,
            })
        })
        .collect()
}

/// Writes `sprays,spray_size,kernel,row_step,col_step,mean,median,trimean,max,time`.
/// As in [`write_results`], `time` (seconds) is only filled when `timing` is set.
pub fn write_sweep<W: Write>(points: &[SweepPoint], writer: W, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "sprays",
        "spray_size",
        "kernel",
        "row_step",
        "col_step",
        "mean",
        "median",
        "trimean",
        "max",
        "time",
    ])?;
    for pt in points {
        let (p, s) = (&pt.params, &pt.stats);
        let time = if timing {
            format!("{:.4}", s.total_time)
        } else {
            String::new()
        };
        w.write_record([
            p.spray.num_sprays.to_string(),
            p.spray.points_per_spray.to_string(),
            p.kernel_size.to_string(),
            p.row_step.to_string(),
            p.col_step.to_string(),
            s.mean.to_string(),
            s.median.to_string(),
            s.trimean.to_string(),
            s.max.to_string(),
            time,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<sweep>", e))
}
