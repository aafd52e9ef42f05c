use rayon::prelude::*;

use super::quantized::eight_bit_levels;
use crate::boxfilter::IntegralImage;
use crate::imgcore::QuantGrid;
use crate::{FilterParams, Image, Result};

/// Relative energy gap below which two bins count as tied. Flat stretches
/// of the energy (an even window at `p = 1`) are exact ties that summation
/// order would otherwise break at random.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Per-pixel argmin over the grid of `sum_j |Q_b - I_j|^p`.
///
/// One box filter per bin over the penalty image `|Q_b - I_j|^p`; ties
/// (within [`TIE_TOLERANCE`]) go to the smallest bin index. `params.bins`
/// is ignored in favor of `grid`.
pub fn snf_bruteforce(img: &Image, params: &FilterParams, grid: &QuantGrid) -> Result<Image> {
    params.validate()?;
    let mut out = img.clone();
    for c in 0..img.channels() {
        let res = brute_plane(img.plane(c), img.width(), img.height(), params, grid);
        out.plane_mut(c).copy_from_slice(&res);
    }
    Ok(out)
}

fn penalty(d: f64, p: f64) -> f64 {
    if p == 2.0 {
        d * d
    } else if p == 1.0 {
        d.abs()
    } else {
        d.abs().powf(p)
    }
}

fn brute_plane(
    values: &[f64],
    w: usize,
    h: usize,
    params: &FilterParams,
    grid: &QuantGrid,
) -> Vec<f64> {
    let n = w * h;
    let p = params.p;
    let levels = eight_bit_levels(values);
    let mut pen = vec![0.0; n];
    let mut energy = vec![0.0; n];
    let mut best = vec![f64::INFINITY; n];
    let mut out = vec![grid.bins()[0]; n];
    let mut ii = IntegralImage::from_plane(&pen, w, h);
    for &q in grid.bins() {
        match &levels {
            Some(codes) => {
                let lut: Vec<f64> = (0..256).map(|k| penalty(q - k as f64 / 255.0, p)).collect();
                pen.par_iter_mut()
                    .zip(codes.par_iter())
                    .for_each(|(e, &k)| *e = lut[k as usize]);
            }
            None => pen
                .par_iter_mut()
                .zip(values.par_iter())
                .for_each(|(e, &v)| *e = penalty(q - v, p)),
        }
        ii.rebuild(&pen);
        ii.window_sums_into(params.radius, &mut energy);
        best.par_iter_mut()
            .zip(out.par_iter_mut())
            .zip(energy.par_iter())
            .for_each(|((b, o), &e)| {
                if e < *b * (1.0 - TIE_TOLERANCE) {
                    *b = e;
                    *o = q;
                }
            });
    }
    out
}
