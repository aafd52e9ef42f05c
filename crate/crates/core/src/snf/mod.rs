//! The sparse norm filter.
//!
//! Per pixel the filter minimizes `E_i(v) = sum_{j in N_i} |v - I_j|^p`
//! over a square window that includes the pixel itself. Two strategies:
//!
//! - **IRLS**: one reweighted-least-squares step, a weighted average with
//!   `w_ij = (|G_i - G_j|^2 + eps^2)^((p - 2) / 2)`. Weights come from a
//!   guide `G`, which defaults to the input.
//! - **Brute force**: evaluate `E_i` at every grid level and keep the
//!   smallest.

mod brute;
mod direct;
mod quantized;
mod weight;

pub use brute::{snf_bruteforce, TIE_TOLERANCE};
pub use direct::snf_irls_direct;
pub use quantized::snf_irls_quantized;
pub use weight::{snf_weight, WeightFn};

pub(crate) use quantized::{grid_covering, QuantizedJob};

use crate::imgcore::{luma, rgb_to_yuv, yuv_to_rgb};
use crate::{ColorMode, Error, FilterParams, Image, Result, Strategy};

/// Reduces a guide to one channel and checks its dimensions.
pub(crate) fn resolve_guide(img: &Image, guide: Option<&Image>) -> Result<Option<Image>> {
    match guide {
        None => Ok(None),
        Some(g) => {
            img.require_same_dims(g, "guide")?;
            Ok(Some(luma(g)))
        }
    }
}

/// One pass of the selected strategy over every channel of `img`.
fn single_pass(img: &Image, guide: Option<&Image>, params: &FilterParams) -> Result<Image> {
    match params.strategy {
        Strategy::Irls if params.spatial_sigma.is_none() => snf_irls_quantized(img, guide, params),
        Strategy::Irls | Strategy::IrlsDirect => snf_irls_direct(img, guide, params),
        Strategy::BruteForce => {
            if guide.is_some() {
                return Err(Error::Param(
                    "the brute-force strategy does not take a guide image".into(),
                ));
            }
            let mut out = img.clone();
            for c in 0..img.channels() {
                let grid = grid_covering(img.plane(c), params.bins)?;
                let res = snf_bruteforce(&img.channel(c), params, &grid)?;
                out.plane_mut(c).copy_from_slice(res.data());
            }
            Ok(out)
        }
    }
}

fn run_rounds(img: &Image, guide: Option<&Image>, params: &FilterParams) -> Result<Image> {
    let mut cur = single_pass(img, guide, params)?;
    for _ in 1..params.iterations {
        cur = single_pass(&cur, guide, params)?;
    }
    Ok(cur)
}

/// Filters `img`, running `params.iterations` rounds of the chosen
/// strategy. Each round filters the previous round's output; without a
/// guide that output also supplies the weights.
///
/// Three-channel images follow `params.color`: in luma mode only BT.601
/// luma is filtered, in per-channel mode every channel is filtered (all
/// sharing the guide's luma weights when a guide is given).
pub fn snf(img: &Image, guide: Option<&Image>, params: &FilterParams) -> Result<Image> {
    params.validate()?;
    let guide = resolve_guide(img, guide)?;
    if img.channels() == 1 || params.color == ColorMode::PerChannel {
        return run_rounds(img, guide.as_ref(), params);
    }
    let mut yuv = rgb_to_yuv(img)?;
    let y = run_rounds(&yuv.channel(0), guide.as_ref(), params)?;
    yuv.plane_mut(0).copy_from_slice(y.data());
    Ok(yuv_to_rgb(&yuv)?.with_range(img.range()))
}
