//! `O(B * N)` weighted window sums with the center intensity quantized.
//!
//! For each bin center `Q_b` the weight image `w_b(j) = w(Q_b - G_j)` is
//! independent of the center pixel, so `sum_j w_b(j) x_j` and
//! `sum_j w_b(j)` are plain box sums. Each pixel then blends the results of
//! the two bins bracketing its own guide value.

use rayon::prelude::*;

use super::weight::WeightFn;
use crate::boxfilter::IntegralImage;
use crate::imgcore::QuantGrid;
use crate::{Error, Image, Result};

/// Two bins bracketing each guide value and the interpolation position
/// between them.
pub(crate) struct Bracketing {
    pub grid: QuantGrid,
    lower: Vec<u32>,
    frac: Vec<f64>,
}

const SNAP: f64 = 1e-9;

impl Bracketing {
    pub fn new(guide: &[f64], bins: usize) -> Result<Self> {
        let grid = grid_covering(guide, bins)?;
        let centers = grid.bins();
        let lo = centers[0];
        let span = centers[bins - 1] - lo;
        let top = (bins - 2) as u32;
        let (lower, frac): (Vec<u32>, Vec<f64>) = guide
            .par_iter()
            .map(|&g| {
                let t = ((g - lo) / span * (bins - 1) as f64).clamp(0.0, (bins - 1) as f64);
                let mut i = (t.floor() as u32).min(top);
                let mut f = t - i as f64;
                if f < SNAP {
                    f = 0.0;
                } else if f > 1.0 - SNAP {
                    if i < top {
                        i += 1;
                        f = 0.0;
                    } else {
                        f = 1.0;
                    }
                }
                (i, f)
            })
            .unzip();
        Ok(Self { grid, lower, frac })
    }

    /// Interpolation weight of bin `b` at pixel `i`.
    #[inline]
    fn coef(&self, i: usize, b: u32) -> f64 {
        let lo = self.lower[i];
        if b == lo {
            1.0 - self.frac[i]
        } else if b == lo + 1 {
            self.frac[i]
        } else {
            0.0
        }
    }

    fn bins_in_use(&self) -> Vec<bool> {
        let mut used = vec![false; self.grid.len()];
        for (&lo, &f) in self.lower.iter().zip(&self.frac) {
            if f < 1.0 {
                used[lo as usize] = true;
            }
            if f > 0.0 {
                used[lo as usize + 1] = true;
            }
        }
        used
    }
}

/// `b / (B - 1)` over `[0, 1]`, widened to the guide's range when the
/// guide leaves the unit interval.
pub(crate) fn grid_covering(values: &[f64], bins: usize) -> Result<QuantGrid> {
    let (mn, mx) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if !mn.is_finite() || !mx.is_finite() {
        return Err(Error::Domain("non-finite intensities".into()));
    }
    if mn >= 0.0 && mx <= 1.0 {
        crate::imgcore::make_quant_grid(bins)
    } else {
        QuantGrid::uniform(bins, mn.min(0.0), mx.max(1.0))
    }
}

/// Maps values that are exact 8-bit levels `k / 255` to their codes.
pub(crate) fn eight_bit_levels(values: &[f64]) -> Option<Vec<u8>> {
    values
        .iter()
        .map(|&v| {
            let k = (v * 255.0).round();
            if (0.0..=255.0).contains(&k) && k / 255.0 == v {
                Some(k as u8)
            } else {
                None
            }
        })
        .collect()
}

pub(crate) struct QuantizedJob<'a> {
    pub width: usize,
    pub height: usize,
    pub radius: usize,
    pub weight: WeightFn,
    pub guide: &'a [f64],
    pub bins: usize,
    /// Per-pixel multiplier on `w_b(j)`; `None` means all ones.
    pub mask: Option<&'a [f64]>,
    /// Divide numerator by the weight sum (filtering) or not (`W x`).
    pub normalize: bool,
}

impl QuantizedJob<'_> {
    /// Filters every channel in `values` with the shared guide weights.
    pub fn run(&self, values: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
        let n = self.width * self.height;
        if self.guide.len() != n || values.iter().any(|v| v.len() != n) {
            return Err(Error::Shape(
                "quantized filter inputs differ in size".into(),
            ));
        }
        if let Some(m) = self.mask {
            if m.len() != n {
                return Err(Error::Shape("mask size differs from image".into()));
            }
        }
        let brackets = Bracketing::new(self.guide, self.bins)?;
        let used = brackets.bins_in_use();
        let levels = eight_bit_levels(self.guide);

        let mut out = vec![vec![0.0; n]; values.len()];
        let mut wb = vec![0.0; n];
        let mut weighted = vec![0.0; n];
        let mut den = vec![0.0; n];
        let mut num = vec![0.0; n];
        let mut ii_w = IntegralImage::from_plane(&wb, self.width, self.height);
        let mut ii_x = ii_w.clone();

        for (b, &q) in brackets.grid.bins().iter().enumerate() {
            if !used[b] {
                continue;
            }
            let b = b as u32;
            match &levels {
                Some(codes) => {
                    let lut: Vec<f64> = (0..256)
                        .map(|k| self.weight.eval(q - k as f64 / 255.0))
                        .collect();
                    wb.par_iter_mut()
                        .zip(codes.par_iter())
                        .for_each(|(w, &k)| *w = lut[k as usize]);
                }
                None => {
                    wb.par_iter_mut()
                        .zip(self.guide.par_iter())
                        .for_each(|(w, &g)| *w = self.weight.eval(q - g));
                }
            }
            if let Some(m) = self.mask {
                wb.par_iter_mut()
                    .zip(m.par_iter())
                    .for_each(|(w, &m)| *w *= m);
            }
            if self.normalize {
                ii_w.rebuild(&wb);
                ii_w.window_sums_into(self.radius, &mut den);
            }
            for (x, dst) in values.iter().zip(out.iter_mut()) {
                weighted
                    .par_iter_mut()
                    .zip(wb.par_iter().zip(x.par_iter()))
                    .for_each(|(o, (&w, &v))| *o = w * v);
                ii_x.rebuild(&weighted);
                ii_x.window_sums_into(self.radius, &mut num);
                let normalize = self.normalize;
                dst.par_iter_mut().enumerate().for_each(|(i, o)| {
                    let c = brackets.coef(i, b);
                    if c != 0.0 {
                        let v = if normalize { num[i] / den[i] } else { num[i] };
                        *o += c * v;
                    }
                });
            }
        }
        Ok(out)
    }
}

/// Reweighted average with the center guide value quantized into
/// `params.bins` bins.
///
/// Weights come from `guide` (or `img` itself) and values from `img`; every
/// channel of `img` shares the guide weights. A pixel whose guide value sits
/// exactly on a bin center gets that bin's quotient; otherwise the two
/// bracketing quotients are linearly interpolated.
pub fn snf_irls_quantized(
    img: &Image,
    guide: Option<&Image>,
    params: &crate::FilterParams,
) -> Result<Image> {
    params.validate()?;
    let guide = super::resolve_guide(img, guide)?;
    let weight = WeightFn::new(params.p, params.eps);
    let mut out = img.clone();
    match guide {
        Some(g) => {
            let planes: Vec<&[f64]> = (0..img.channels()).map(|c| img.plane(c)).collect();
            let job = QuantizedJob {
                width: img.width(),
                height: img.height(),
                radius: params.radius,
                weight,
                guide: g.data(),
                bins: params.bins,
                mask: None,
                normalize: true,
            };
            for (c, res) in job.run(&planes)?.into_iter().enumerate() {
                out.plane_mut(c).copy_from_slice(&res);
            }
        }
        None => {
            for c in 0..img.channels() {
                let plane = img.plane(c);
                let job = QuantizedJob {
                    width: img.width(),
                    height: img.height(),
                    radius: params.radius,
                    weight,
                    guide: plane,
                    bins: params.bins,
                    mask: None,
                    normalize: true,
                };
                let res = job.run(&[plane])?.pop().expect("one channel in, one out");
                out.plane_mut(c).copy_from_slice(&res);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracketing_snaps_to_centers() {
        let guide: Vec<f64> = (0..=255).map(|k| k as f64 / 255.0).collect();
        let br = Bracketing::new(&guide, 256).unwrap();
        for (k, (&lo, &f)) in br.lower.iter().zip(&br.frac).enumerate() {
            if k < 255 {
                assert_eq!((lo as usize, f), (k, 0.0));
            } else {
                assert_eq!((lo, f), (254, 1.0));
            }
        }
    }

    #[test]
    fn bracketing_interpolates_between_bins() {
        let br = Bracketing::new(&[0.1, 0.5, 0.95], 5).unwrap();
        assert_eq!(br.lower, vec![0, 2, 3]);
        assert!((br.frac[0] - 0.4).abs() < 1e-12);
        assert_eq!(br.frac[1], 0.0);
        assert!((br.frac[2] - 0.8).abs() < 1e-12);
        assert!((br.coef(0, 0) - 0.6).abs() < 1e-12);
        assert!((br.coef(0, 1) - 0.4).abs() < 1e-12);
        assert_eq!(br.coef(0, 2), 0.0);
    }

    #[test]
    fn grid_widens_outside_unit_interval() {
        let g = grid_covering(&[-2.0, 0.5, 3.0], 6).unwrap();
        assert_eq!(g.bins()[0], -2.0);
        assert_eq!(g.bins()[5], 3.0);
        let g = grid_covering(&[0.2, 0.7], 3).unwrap();
        assert_eq!(g.bins(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn eight_bit_detection() {
        assert_eq!(
            eight_bit_levels(&[0.0, 1.0, 128.0 / 255.0]),
            Some(vec![0, 255, 128])
        );
        assert_eq!(eight_bit_levels(&[0.5]), None);
        assert_eq!(eight_bit_levels(&[1.5]), None);
    }
}
