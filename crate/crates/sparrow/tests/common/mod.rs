#![allow(dead_code)]

use std::path::{Path, PathBuf};

use sparrow::{save_png_with_depth, Manifest, ManifestEntry};
use sparrow_core::synthetic::{mondrian, MondrianSpec};
use sparrow_core::{LinearImage, Rect, Rgb};

pub fn constant_png(dir: &Path, name: &str, rgb: Rgb, bits: u8) -> PathBuf {
    let path = dir.join(name);
    save_png_with_depth(&LinearImage::filled(24, 16, rgb), &path, bits).unwrap();
    path
}

/// Writes `count` Mondrian scenes as 16-bit PNGs plus a manifest and
/// returns the manifest path.
pub fn mondrian_suite(dir: &Path, spec: &MondrianSpec, count: usize, first_seed: u64) -> PathBuf {
    let mut manifest = Manifest::default();
    for i in 0..count {
        let scene = mondrian(spec, first_seed + i as u64);
        let name = format!("scene_{i:03}.png");
        save_png_with_depth(&scene.image, dir.join(&name), 16).unwrap();
        manifest.entries.push(ManifestEntry {
            image: PathBuf::from(name),
            ground_truth: scene.illuminant,
            mask: Vec::new(),
        });
    }
    let path = dir.join("manifest.csv");
    manifest.save(&path).unwrap();
    path
}

pub fn small_spec() -> MondrianSpec {
    MondrianSpec {
        width: 64,
        height: 48,
        patches: 20,
        ..MondrianSpec::default()
    }
}

pub fn write_manifest(dir: &Path, rows: &[(&str, Rgb, Vec<Rect>)]) -> PathBuf {
    let manifest = Manifest {
        entries: rows
            .iter()
            .map(|(name, gt, mask)| ManifestEntry {
                image: PathBuf::from(name),
                ground_truth: *gt,
                mask: mask.clone(),
            })
            .collect(),
    };
    let path = dir.join("manifest.csv");
    manifest.save(&path).unwrap();
    path
}
