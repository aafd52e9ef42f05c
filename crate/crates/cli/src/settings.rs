//! Filter parameter resolution: preset, then config file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use sparse_norm::presets::Preset;
use sparse_norm::{ColorMode, FilterParams, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    /// Quantized reweighted average, O(B N).
    Irls,
    /// Reweighted average over every window, O(N r^2).
    Direct,
    /// Exhaustive search over the quantization grid.
    Brute,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Irls => Strategy::Irls,
            StrategyArg::Direct => Strategy::IrlsDirect,
            StrategyArg::Brute => Strategy::BruteForce,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct FilterArgs {
    /// Named parameter set, e.g. fig2j, fig6-p0.1, hdr, colorize.
    #[arg(long)]
    pub preset: Option<String>,
    /// key=value file with any of: preset, p, r, bins, eps, iters, strategy,
    /// per-channel, spatial-sigma.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Norm exponent, 0 < p <= 2.
    #[arg(long)]
    pub p: Option<f64>,
    /// Window half-width in pixels.
    #[arg(long)]
    pub r: Option<usize>,
    /// Quantization bins.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Weight smoothing constant.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Filtering rounds (sweeps for colorize).
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Filter R, G and B separately instead of luma only.
    #[arg(long)]
    pub per_channel: bool,
    /// Gaussian spatial falloff in pixels (direct strategy).
    #[arg(long)]
    pub spatial_sigma: Option<f64>,
}

/// Invalid configuration; reported as a usage error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn read_config(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> anyhow::Result<T> {
    v.parse()
        .map_err(|_| usage(format!("bad value {v:?} for {key}")))
}

impl FilterArgs {
    /// Parameters for a `width x height` input, starting from `default`
    /// unless a preset is named.
    pub fn resolve(
        &self,
        default: Preset,
        width: usize,
        height: usize,
    ) -> anyhow::Result<FilterParams> {
        let config = match &self.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let preset_name = self
            .preset
            .as_deref()
            .or(config.get("preset").map(String::as_str));
        let preset = match preset_name {
            Some(name) => name.parse::<Preset>().map_err(|e| usage(e.to_string()))?,
            None => default,
        };
        let mut params = preset.params(width, height);

        for (key, v) in &config {
            match key.as_str() {
                "preset" => {}
                "p" => params.p = parse(key, v)?,
                "r" | "radius" => params.radius = parse(key, v)?,
                "bins" => params.bins = parse(key, v)?,
                "eps" => params.eps = parse(key, v)?,
                "iters" | "iterations" => params.iterations = parse(key, v)?,
                "strategy" => {
                    let s = StrategyArg::from_str(v, true)
                        .map_err(|_| usage(format!("bad strategy {v:?}")))?;
                    params.strategy = s.into();
                }
                "per-channel" => {
                    if parse::<bool>(key, v)? {
                        params.color = ColorMode::PerChannel;
                    }
                }
                "spatial-sigma" => params.spatial_sigma = Some(parse(key, v)?),
                other => return Err(usage(format!("unknown config key {other:?}"))),
            }
        }

        if let Some(p) = self.p {
            params.p = p;
        }
        if let Some(r) = self.r {
            params.radius = r;
        }
        if let Some(b) = self.bins {
            params.bins = b;
        }
        if let Some(e) = self.eps {
            params.eps = e;
        }
        if let Some(i) = self.iters {
            params.iterations = i;
        }
        if let Some(s) = self.strategy {
            params.strategy = s.into();
        }
        if self.per_channel {
            params.color = ColorMode::PerChannel;
        }
        if let Some(s) = self.spatial_sigma {
            params.spatial_sigma = Some(s);
        }
        params.validate().map_err(|e| usage(e.to_string()))?;
        Ok(params)
    }

    /// Whether the radius was given explicitly.
    pub fn radius_given(&self) -> anyhow::Result<bool> {
        if self.r.is_some() {
            return Ok(true);
        }
        Ok(match &self.config {
            Some(path) => {
                let c = read_config(path)?;
                c.contains_key("r") || c.contains_key("radius")
            }
            None => false,
        })
    }
}
