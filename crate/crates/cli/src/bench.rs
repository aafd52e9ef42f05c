//! Wall-clock timing of the filters on random square images.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_norm::boxfilter::box_mean;
use sparse_norm::imgcore::make_quant_grid;
use sparse_norm::snf::{snf_bruteforce, snf_irls_direct, snf_irls_quantized};
use sparse_norm::{FilterParams, Image};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchOp {
    /// Box mean.
    Box,
    /// Quantized reweighted average.
    Irls,
    /// Direct reweighted average.
    Direct,
    /// Brute-force grid search.
    Brute,
}

impl BenchOp {
    fn name(self) -> &'static str {
        match self {
            BenchOp::Box => "box",
            BenchOp::Irls => "irls",
            BenchOp::Direct => "direct",
            BenchOp::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "box")]
    pub op: BenchOp,
    /// Image sizes in megapixels.
    #[arg(long, value_delimiter = ',', default_value = "0.25,1,4")]
    pub sizes: Vec<f64>,
    /// Bin counts; ignored by box and direct.
    #[arg(long = "bins", value_delimiter = ',', default_value = "4")]
    pub bins: Vec<usize>,
    /// Window half-widths.
    #[arg(long = "r", value_delimiter = ',', default_value = "10")]
    pub radii: Vec<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub p: f64,
    /// Repetitions per row; the fastest is reported.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &BenchArgs) -> anyhow::Result<()> {
    if args.sizes.iter().any(|&s| !(s > 0.0)) || args.reps == 0 {
        return Err(crate::settings::UsageError("sizes and reps must be positive".into()).into());
    }
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    csv.write_record(["op", "npixels", "B", "r", "seconds"])?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bins: &[usize] = if matches!(args.op, BenchOp::Box | BenchOp::Direct) {
        &[0]
    } else {
        &args.bins
    };
    for &mp in &args.sizes {
        let side = ((mp * 1e6).sqrt().round() as usize).max(2);
        let img = Image::from_fn(side, side, |_, _| rng.random::<f64>())?;
        for &r in &args.radii {
            for &b in bins {
                let params = FilterParams::new(args.p, r).with_bins(b.max(2));
                params
                    .validate()
                    .map_err(|e| crate::settings::UsageError(e.to_string()))?;
                let grid = make_quant_grid(b.max(2))?;
                let mut best = f64::INFINITY;
                for _ in 0..args.reps {
                    let t = Instant::now();
                    match args.op {
                        BenchOp::Box => drop(box_mean(&img, r)?),
                        BenchOp::Irls => drop(snf_irls_quantized(&img, None, &params)?),
                        BenchOp::Direct => drop(snf_irls_direct(&img, None, &params)?),
                        BenchOp::Brute => drop(snf_bruteforce(&img, &params, &grid)?),
                    }
                    best = best.min(t.elapsed().as_secs_f64());
                }
                csv.write_record([
                    args.op.name().to_string(),
                    (side * side).to_string(),
                    b.to_string(),
                    r.to_string(),
                    format!("{best:.6}"),
                ])?;
                csv.flush()?;
            }
        }
    }
    Ok(())
}
