//! `snf`: sparse norm filtering from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod bench;
mod settings;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use settings::{FilterArgs, UsageError};
use sparse_norm::apps::{
    base_detail, colorize, deconvolve_snf, detail_boost, edge_taper, hdr_compress, joint_filter,
    ncut_segment, outlier_denoise, seamless_clone, BetaSchedule, CloneTask, Kernel, StrokeMap,
    DEFAULT_TARGET_CONTRAST,
};
use sparse_norm::imgcore::{load_image, load_rgba, luma, save_image, FileKind};
use sparse_norm::presets::Preset;
use sparse_norm::snf::snf;
use sparse_norm::Image;

#[derive(Debug, Parser)]
#[command(
    name = "snf",
    version,
    about = "Edge-preserving smoothing by sparse norm filtering"
)]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Width,
    Height,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the smoothed base layer.
    Smooth {
        #[command(flatten)]
        filter: FilterArgs,
        /// Take weights from this image instead of the input.
        #[arg(long)]
        guide: Option<PathBuf>,
        input: PathBuf,
        output: PathBuf,
    },
    /// Amplify the detail layer: base + factor * detail.
    Sharpen {
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, default_value_t = 2.0)]
        factor: f64,
        input: PathBuf,
        output: PathBuf,
    },
    /// Remove impulse noise with brute-force search then guided averaging.
    Denoise {
        #[command(flatten)]
        filter: FilterArgs,
        input: PathBuf,
        output: PathBuf,
    },
    /// Tone map an HDR image (PFM) to display range.
    Hdr {
        #[command(flatten)]
        filter: FilterArgs,
        /// Output base contrast in decades.
        #[arg(long, default_value_t = DEFAULT_TARGET_CONTRAST)]
        contrast: f64,
        input: PathBuf,
        output: PathBuf,
    },
    /// Non-blind deconvolution with a non-local sparse gradient prior.
    Deconv {
        #[command(flatten)]
        filter: FilterArgs,
        /// Kernel file: rows of whitespace or comma separated taps.
        #[arg(long, conflicts_with = "gaussian")]
        kernel: Option<PathBuf>,
        /// Gaussian kernel as SIZE,SIGMA.
        #[arg(long, value_delimiter = ',')]
        gaussian: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-3)]
        lambda: f64,
        /// Skip blending the borders before the periodic solve.
        #[arg(long)]
        no_taper: bool,
        input: PathBuf,
        output: PathBuf,
    },
    /// Filter INPUT with weights computed from GUIDE.
    Joint {
        #[command(flatten)]
        filter: FilterArgs,
        input: PathBuf,
        guide: PathBuf,
        output: PathBuf,
    },
    /// Spread stroke colors (RGBA overlay, alpha marks strokes) over a gray image.
    Colorize {
        #[command(flatten)]
        filter: FilterArgs,
        gray: PathBuf,
        strokes: PathBuf,
        output: PathBuf,
    },
    /// Paste SOURCE into TARGET inside MASK with non-local gradient blending.
    Seamless {
        #[arg(long, default_value_t = 8)]
        r: usize,
        #[arg(long, default_value_t = 10)]
        iters: usize,
        /// Source-to-target displacement DX,DY.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0",
            allow_hyphen_values = true
        )]
        offset: Vec<isize>,
        source: PathBuf,
        target: PathBuf,
        mask: PathBuf,
        output: PathBuf,
    },
    /// Normalized-cut segmentation; writes labels as gray levels.
    Segment {
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, default_value_t = 2)]
        segments: usize,
        #[arg(long, default_value_t = 200)]
        power_iters: usize,
        /// Image side the preset radius fraction refers to.
        #[arg(long, value_enum, default_value = "width")]
        radius_from: Side,
        input: PathBuf,
        output: PathBuf,
    },
    /// Time filters and print CSV rows `op,npixels,B,r,seconds`.
    Bench(bench::BenchArgs),
}

fn kind_of(path: &Path) -> FileKind {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("pfm") => FileKind::Hdr,
        _ => FileKind::Ldr,
    }
}

fn load(path: &Path) -> anyhow::Result<Image> {
    load_image(path, kind_of(path)).with_context(|| format!("loading {}", path.display()))
}

fn save(img: &Image, path: &Path) -> anyhow::Result<()> {
    save_image(img, path, kind_of(path)).with_context(|| format!("writing {}", path.display()))
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Smooth {
            filter,
            guide,
            input,
            output,
        } => {
            let img = load(&input)?;
            let params = filter.resolve(Preset::Fig2k, img.width(), img.height())?;
            let guide = guide.map(|g| load(&g)).transpose()?;
            save(&snf(&img, guide.as_ref(), &params)?, &output)
        }
        Command::Sharpen {
            filter,
            factor,
            input,
            output,
        } => {
            if !(factor >= 0.0) {
                return Err(usage("factor must be non-negative"));
            }
            let img = load(&input)?;
            let params = filter.resolve(Preset::Fig2k, img.width(), img.height())?;
            save(&detail_boost(&base_detail(&img, &params)?, factor), &output)
        }
        Command::Denoise {
            filter,
            input,
            output,
        } => {
            let img = load(&input)?;
            let params = filter.resolve(Preset::Fig6P1, img.width(), img.height())?;
            save(&outlier_denoise(&img, &params)?, &output)
        }
        Command::Hdr {
            filter,
            contrast,
            input,
            output,
        } => {
            let img = load(&input)?;
            let params = filter.resolve(Preset::Fig7, img.width(), img.height())?;
            if !(contrast > 0.0) {
                return Err(usage("contrast must be positive"));
            }
            save(&hdr_compress(&img, &params, contrast)?, &output)
        }
        Command::Deconv {
            filter,
            kernel,
            gaussian,
            lambda,
            no_taper,
            input,
            output,
        } => {
            let k = match (kernel, gaussian) {
                (Some(path), _) => {
                    Kernel::load(&path).with_context(|| format!("loading {}", path.display()))?
                }
                (None, Some(g)) => {
                    if g.len() != 2 {
                        return Err(usage("--gaussian takes SIZE,SIGMA"));
                    }
                    let size = g[0];
                    if size < 1.0 || size.fract() != 0.0 {
                        return Err(usage("gaussian size must be a positive odd integer"));
                    }
                    Kernel::gaussian(size as usize, g[1]).map_err(|e| usage(e.to_string()))?
                }
                (None, None) => return Err(usage("deconv needs --kernel or --gaussian")),
            };
            if !(lambda >= 0.0) {
                return Err(usage("lambda must be non-negative"));
            }
            let img = load(&input)?;
            let params = filter.resolve(Preset::Fig8, img.width(), img.height())?;
            let obs = if no_taper { img } else { edge_taper(&img, &k) };
            save(
                &deconvolve_snf(&obs, &k, lambda, &params, &BetaSchedule::default())?,
                &output,
            )
        }
        Command::Joint {
            filter,
            input,
            guide,
            output,
        } => {
            let img = load(&input)?;
            let guide = load(&guide)?;
            let params = filter.resolve(Preset::Fig9, img.width(), img.height())?;
            save(&joint_filter(&img, &guide, &params)?, &output)
        }
        Command::Colorize {
            filter,
            gray,
            strokes,
            output,
        } => {
            let gray = luma(&load(&gray)?);
            let (rgb, alpha) =
                load_rgba(&strokes).with_context(|| format!("loading {}", strokes.display()))?;
            let params = filter.resolve(Preset::Fig11, gray.width(), gray.height())?;
            let map = StrokeMap::from_overlay(&rgb, &alpha)?;
            save(&colorize(&gray, &map, &params)?, &output)
        }
        Command::Seamless {
            r,
            iters,
            offset,
            source,
            target,
            mask,
            output,
        } => {
            if r == 0 {
                return Err(usage("r must be at least 1"));
            }
            if offset.len() != 2 {
                return Err(usage("--offset takes DX,DY"));
            }
            let source = load(&source)?;
            let target = load(&target)?;
            let mask_img = load(&mask)?;
            if !mask_img.same_dims(&target) {
                return Err(usage("mask and target sizes differ"));
            }
            let task = CloneTask::new(
                source,
                target,
                CloneTask::mask_from_image(&mask_img),
                (offset[0], offset[1]),
            )?;
            save(&seamless_clone(&task, r, iters)?, &output)
        }
        Command::Segment {
            filter,
            segments,
            power_iters,
            radius_from,
            input,
            output,
        } => {
            let img = load(&input)?;
            let (w, h) = (img.width(), img.height());
            let mut params = filter.resolve(Preset::Fig10, w, h)?;
            if radius_from == Side::Height && !filter.radius_given()? && filter.preset.is_none() {
                params.radius = (h / 16).max(1);
            }
            if segments < 2 || segments > w * h {
                return Err(usage(format!("segments must be between 2 and {}", w * h)));
            }
            save(
                &ncut_segment(&img, segments, &params, power_iters)?.to_image(),
                &output,
            )
        }
        Command::Bench(args) => bench::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            eprintln!("Try 'snf --help' for usage.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
