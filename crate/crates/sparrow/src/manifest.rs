//! Dataset manifests.
//!
//! A manifest is a CSV file with the header `image,gt_r,gt_g,gt_b,mask`.
//! `mask` holds zero or more `x:y:w:h` rectangles separated by `;`. Relative
//! image paths are resolved against the manifest's directory.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sparrow_core::{Rect, Rgb};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub image: PathBuf,
    pub ground_truth: Rgb,
    /// Regions excluded from estimation, e.g. a colour checker.
    pub mask: Vec<Rect>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
struct Record {
    image: String,
    gt_r: f64,
    gt_g: f64,
    gt_b: f64,
    #[serde(default)]
    mask: String,
}

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(file, base, path)
    }

    /// Parses manifest CSV from `reader`. Relative image paths are joined to
    /// `base`; `origin` only appears in error messages.
    pub fn parse<R: Read>(reader: R, base: &Path, origin: &Path) -> Result<Self> {
        let fail = |line: u64, message: String| Error::Manifest {
            path: origin.to_owned(),
            line,
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| fail(1, e.to_string()))?.clone();
        let expected = ["image", "gt_r", "gt_g", "gt_b", "mask"];
        if headers.len() < 4 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(fail(1, format!("header must be `{}`", expected.join(","))));
        }

        let mut entries = Vec::new();
        for record in rdr.deserialize::<Record>() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                fail(line, e.to_string())
            })?;
            let line = entries.len() as u64 + 2;
            let ground_truth = [record.gt_r, record.gt_g, record.gt_b];
            if ground_truth.iter().any(|v| !(v.is_finite() && *v >= 0.0))
                || ground_truth.iter().all(|&v| v == 0.0)
            {
                return Err(fail(
                    line,
                    "ground truth must be non-negative with positive norm".into(),
                ));
            }
            if record.image.is_empty() {
                return Err(fail(line, "empty image path".into()));
            }
            let mask = parse_rects(&record.mask).map_err(|m| fail(line, m))?;
            entries.push(ManifestEntry {
                image: base.join(&record.image),
                ground_truth,
                mask,
            });
        }
        Ok(Self { entries })
    }

    /// Writes the manifest as CSV. Image paths are written as stored.
    pub fn write<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for e in &self.entries {
            w.serialize(Record {
                image: e.image.to_string_lossy().into_owned(),
                gt_r: e.ground_truth[0],
                gt_g: e.ground_truth[1],
                gt_b: e.ground_truth[2],
                mask: format_rects(&e.mask),
            })?;
        }
        w.flush().map_err(|e| Error::io("<manifest>", e))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write(std::io::BufWriter::new(file))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Parses `x:y:w:h;x:y:w:h...`. An empty string is an empty list.
pub fn parse_rects(s: &str) -> std::result::Result<Vec<Rect>, String> {
    s.split(';')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(|part| {
            let fields: Vec<&str> = part.split(':').collect();
            let nums: Vec<usize> = fields
                .iter()
                .map(|f| f.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| format!("bad rectangle `{part}`"))?;
            match nums[..] {
                [x, y, w, h] if w > 0 && h > 0 => Ok(Rect::new(x, y, w, h)),
                [_, _, _, _] => Err(format!("empty rectangle `{part}`")),
                _ => Err(format!("rectangle `{part}` must be x:y:w:h")),
            }
        })
        .collect()
}

pub fn format_rects(rects: &[Rect]) -> String {
    let mut out = String::new();
    for (i, r) in rects.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(out, "{}:{}:{}:{}", r.x, r.y, r.w, r.h);
    }
    out
}
