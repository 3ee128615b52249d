use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sparrow::manifest::parse_rects;
use sparrow::{
    bench, evaluate, par_rsr_render, save_png_with_depth, stats_table, sweep, write_bench,
    write_results, write_sweep, Error, Manifest, Method, Result, SweepGrid,
};
use sparrow_core::{
    diagonal_correct, CsParams, PixelMask, SprayParams, Weighting, DEFAULT_SDWGW_BLOCKS,
    DEFAULT_SHADES_OF_GRAY_P,
};

/// Global illuminant estimation with random sprays, plus baselines and an
/// evaluation harness.
#[derive(Parser, Debug)]
#[command(name = "sparrow", version)]
struct Cli {
    /// Seed for the spray random streams.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Use 1 for comparable timings.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the illuminant estimate of one image.
    Estimate {
        image: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Excluded regions, `x:y:w:h` separated by `;`.
        #[arg(long, default_value = "")]
        mask: String,
    },
    /// White-balance an image with the estimated illuminant.
    Correct {
        image: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value = "")]
        mask: String,
        /// Output bits per sample (default: same as the input).
        #[arg(long, value_parser = ["8", "16"])]
        bits: Option<String>,
    },
    /// Write the RSR lightness image.
    RsrRender {
        image: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Sprays per pixel.
        #[arg(long, default_value_t = SprayParams::ENHANCEMENT.num_sprays)]
        sprays: usize,
        /// Points per spray.
        #[arg(long, default_value_t = SprayParams::ENHANCEMENT.points_per_spray)]
        spray_size: usize,
        /// Spray radius in pixels (default: image diagonal).
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, value_parser = ["8", "16"])]
        bits: Option<String>,
    },
    /// Evaluate an estimator on a dataset manifest.
    Evaluate {
        manifest: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Per-image CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the time_ms column.
        #[arg(long)]
        timing: bool,
    },
    /// Time estimators single-threaded, image loading included.
    Bench {
        manifest: PathBuf,
        /// Estimators to compare.
        #[arg(long, value_delimiter = ',', default_values = ["gray-world", "cs"])]
        methods: Vec<MethodName>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[command(flatten)]
        cs: CsArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate CS over a grid of parameters given as comma-separated lists.
    Sweep {
        manifest: PathBuf,
        #[arg(long, value_delimiter = ',')]
        sprays: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        spray_size: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        kernel: Vec<usize>,
        #[arg(long, value_delimiter = ',', conflicts_with = "step")]
        row_step: Vec<usize>,
        #[arg(long, value_delimiter = ',', conflicts_with = "step")]
        col_step: Vec<usize>,
        /// Values used for both row and column step.
        #[arg(long, value_delimiter = ',')]
        step: Vec<usize>,
        #[arg(long, value_enum, default_value_t = WeightingArg::Weighted)]
        weighting: WeightingArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the time column.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodName {
    Cs,
    GrayWorld,
    Sdwgw,
    ShadesOfGray,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum WeightingArg {
    Weighted,
    Unit,
}

#[derive(Args, Debug)]
struct CsArgs {
    /// Sprays per pixel (N).
    #[arg(long, default_value_t = 1)]
    sprays: usize,
    /// Points per spray (n).
    #[arg(long, default_value_t = 225)]
    spray_size: usize,
    /// Averaging kernel side (odd).
    #[arg(long, default_value_t = 5)]
    kernel: usize,
    /// Distance between sampled rows (r).
    #[arg(long, default_value_t = 50)]
    row_step: usize,
    /// Distance between sampled columns (c).
    #[arg(long, default_value_t = 50)]
    col_step: usize,
    #[arg(long, value_enum, default_value_t = WeightingArg::Weighted)]
    weighting: WeightingArg,
    /// Number of SDWGW blocks.
    #[arg(long, default_value_t = DEFAULT_SDWGW_BLOCKS)]
    blocks: usize,
    /// Shades-of-gray Minkowski exponent.
    #[arg(long, default_value_t = DEFAULT_SHADES_OF_GRAY_P)]
    minkowski_p: f64,
}

#[derive(Args, Debug)]
struct MethodArgs {
    #[arg(long, value_enum, default_value_t = MethodName::Cs)]
    method: MethodName,
    #[command(flatten)]
    params: CsArgs,
}

impl CsArgs {
    fn cs_params(&self, seed: u64) -> CsParams {
        let mut p = CsParams::default().with_seed(seed);
        p.spray.num_sprays = self.sprays;
        p.spray.points_per_spray = self.spray_size;
        p.kernel_size = self.kernel;
        p.row_step = self.row_step;
        p.col_step = self.col_step;
        p.weighting = self.weighting.into();
        p
    }

    fn method(&self, name: MethodName, seed: u64) -> Result<Method> {
        let m = match name {
            MethodName::Cs => Method::Cs(self.cs_params(seed)),
            MethodName::GrayWorld => Method::GrayWorld,
            MethodName::Sdwgw => Method::Sdwgw {
                blocks: self.blocks,
            },
            MethodName::ShadesOfGray => Method::ShadesOfGray {
                p: self.minkowski_p,
            },
        };
        m.validate()?;
        Ok(m)
    }
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::Weighted => Weighting::Weighted,
            WeightingArg::Unit => Weighting::Unit,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(e.to_string()))?;
    }
    let seed = cli.seed;

    match cli.command {
        Command::Estimate {
            image,
            method,
            mask,
        } => {
            let m = method.params.method(method.method, seed)?;
            let rects = parse_rects(&mask).map_err(Error::Usage)?;
            let img = sparrow::load_png(&image)?;
            let mask = PixelMask::from_rects(img.width(), img.height(), &rects)?;
            let e = m.par_estimate(&img, &mask)?;
            let [r, g, b] = e.unit();
            let [rr, rg, rb] = e.rgb();
            let mut out = io::stdout().lock();
            writeln!(out, "{r:.4} {g:.4} {b:.4}").map_err(stdout_err)?;
            writeln!(out, "raw {rr} {rg} {rb}").map_err(stdout_err)?;
        }
        Command::Correct {
            image,
            out,
            method,
            mask,
            bits,
        } => {
            let m = method.params.method(method.method, seed)?;
            let rects = parse_rects(&mask).map_err(Error::Usage)?;
            let img = sparrow::load_png(&image)?;
            let mask = PixelMask::from_rects(img.width(), img.height(), &rects)?;
            let e = m.par_estimate(&img, &mask)?;
            let corrected = diagonal_correct(&img, &e.rgb())?;
            save_png_with_depth(&corrected, &out, output_bits(bits, img.bit_depth()))?;
        }
        Command::RsrRender {
            image,
            out,
            sprays,
            spray_size,
            radius,
            bits,
        } => {
            let mut params = SprayParams::new(sprays, spray_size).with_seed(seed);
            params.radius = radius;
            params.validate()?;
            let img = sparrow::load_png(&image)?;
            let rendered = par_rsr_render(&img, &params)?;
            save_png_with_depth(&rendered, &out, output_bits(bits, img.bit_depth()))?;
        }
        Command::Evaluate {
            manifest,
            method,
            out,
            timing,
        } => {
            let m = method.params.method(method.method, seed)?;
            let manifest = Manifest::load(&manifest)?;
            let eval = evaluate(&manifest, &m)?;
            for s in &eval.skipped {
                eprintln!("skipped {}: {}", s.image.display(), s.error);
            }
            emit(out.as_deref(), |w| write_results(&eval.results, w, timing))?;
            eprint!("{}", stats_table(&[(m.name().to_string(), eval.stats)]));
            eprintln!(
                "{} evaluated, {} skipped",
                eval.results.len(),
                eval.skipped.len()
            );
        }
        Command::Bench {
            manifest,
            methods,
            repeats,
            cs,
            out,
        } => {
            if repeats == 0 {
                return Err(Error::Usage("--repeats must be at least 1".into()));
            }
            let methods = methods
                .iter()
                .map(|&name| cs.method(name, seed))
                .collect::<Result<Vec<_>>>()?;
            let manifest = Manifest::load(&manifest)?;
            let results = bench(&manifest, &methods, repeats)?;
            emit(out.as_deref(), |w| write_bench(&results, w))?;
            for r in &results {
                eprintln!(
                    "{:<16} {:>10.3} s per pass  {:>9.2} ms per image",
                    r.method.name(),
                    r.mean().as_secs_f64(),
                    r.per_image().as_secs_f64() * 1e3
                );
            }
        }
        Command::Sweep {
            manifest,
            sprays,
            spray_size,
            kernel,
            row_step,
            col_step,
            step,
            weighting,
            out,
            timing,
        } => {
            let mut base = CsParams::default().with_seed(seed);
            base.weighting = weighting.into();
            let mut grid = SweepGrid::at(&base);
            let or_default =
                |v: Vec<usize>, d: &Vec<usize>| if v.is_empty() { d.clone() } else { v };
            grid.sprays = or_default(sprays, &grid.sprays);
            grid.spray_size = or_default(spray_size, &grid.spray_size);
            grid.kernel = or_default(kernel, &grid.kernel);
            if step.is_empty() {
                grid.row_step = or_default(row_step, &grid.row_step);
                grid.col_step = or_default(col_step, &grid.col_step);
            } else {
                grid.row_step = step;
                grid.tied_steps = true;
            }
            for p in grid.points(&base) {
                p.validate()?;
            }
            let manifest = Manifest::load(&manifest)?;
            let points = sweep(&manifest, &base, &grid)?;
            emit(out.as_deref(), |w| write_sweep(&points, w, timing))?;
            let rows: Vec<_> = points
                .iter()
                .map(|pt| {
                    let p = &pt.params;
                    let label = format!(
                        "N={} n={} k={} r={} c={}",
                        p.spray.num_sprays,
                        p.spray.points_per_spray,
                        p.kernel_size,
                        p.row_step,
                        p.col_step
                    );
                    (label, pt.stats)
                })
                .collect();
            eprint!("{}", stats_table(&rows));
        }
    }
    Ok(())
}

fn output_bits(bits: Option<String>, input: u8) -> u8 {
    bits.map_or(input, |b| if b == "8" { 8 } else { 16 })
}

fn stdout_err(e: io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

/// Runs `write` against `path`, or stdout when no path is given.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Io {
                path: path.to_owned(),
                source: e,
            })?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(|e| Error::Io {
                path: path.to_owned(),
                source: e,
            })
        }
        None => {
            let mut out = io::stdout().lock();
            write(&mut out)
        }
    }
}
