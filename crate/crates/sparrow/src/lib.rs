//! IO, dataset evaluation, benchmarking and parameter sweeps around
//! [`sparrow_core`].

pub mod error;
pub mod evaluate;
pub mod manifest;
pub mod method;
pub mod png_io;

pub use error::{Error, Result};
pub use evaluate::{
    bench, evaluate, evaluate_entry, stats_table, sweep, write_bench, write_results, write_sweep,
    BenchResult, Evaluation, ImageResult, Skipped, SweepGrid, SweepPoint,
};
pub use manifest::{Manifest, ManifestEntry};
pub use method::{par_estimate, par_rsr_render, Method};
pub use png_io::{decode_png, encode_png, load_png, save_png, save_png_with_depth};
