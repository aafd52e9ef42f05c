use rayon::prelude::*;

use super::weight::WeightFn;
use crate::{FilterParams, Image, Result};

/// Reweighted average evaluated over every window, `O(N * r^2)`.
///
/// `out_i = sum_j w_ij I_j / sum_j w_ij` with `w_ij = w(G_i - G_j)`, times
/// a Gaussian spatial falloff when `params.spatial_sigma` is set. Weights
/// come from `guide` when given, else from each channel of `img` itself.
pub fn snf_irls_direct(img: &Image, guide: Option<&Image>, params: &FilterParams) -> Result<Image> {
    params.validate()?;
    let guide = super::resolve_guide(img, guide)?;
    let mut out = img.clone();
    for c in 0..img.channels() {
        let g = guide.as_ref().map_or(img.plane(c), |g| g.data());
        let res = direct_plane(img.plane(c), g, img.width(), img.height(), params);
        out.plane_mut(c).copy_from_slice(&res);
    }
    Ok(out)
}

fn direct_plane(
    values: &[f64],
    guide: &[f64],
    w: usize,
    h: usize,
    params: &FilterParams,
) -> Vec<f64> {
    let r = params.radius;
    let weight = WeightFn::new(params.p, params.eps);
    let spatial: Option<Vec<f64>> = params.spatial_sigma.map(|s| {
        let side = 2 * r + 1;
        (0..side * side)
            .map(|k| {
                let dx = (k % side) as f64 - r as f64;
                let dy = (k / side) as f64 - r as f64;
                (-(dx * dx + dy * dy) / (2.0 * s * s)).exp()
            })
            .collect()
    });
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let (y0, y1) = (y.saturating_sub(r), (y + r + 1).min(h));
        for (x, o) in row.iter_mut().enumerate() {
            let (x0, x1) = (x.saturating_sub(r), (x + r + 1).min(w));
            let gi = guide[y * w + x];
            let (mut num, mut den) = (0.0, 0.0);
            for yy in y0..y1 {
                for xx in x0..x1 {
                    let j = yy * w + xx;
                    let mut wij = weight.eval(gi - guide[j]);
                    if let Some(sp) = &spatial {
                        let k = (yy + r - y) * (2 * r + 1) + (xx + r - x);
                        wij *= sp[k];
                    }
                    num += wij * values[j];
                    den += wij;
                }
            }
            *o = num / den;
        }
    });
    out
}
