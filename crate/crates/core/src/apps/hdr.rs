use crate::imgcore::luma;
use crate::snf::snf;
use crate::{DynamicRange, Error, FilterParams, Image, Result};

/// Default output base contrast in decades, about `log10(200)`.
pub const DEFAULT_TARGET_CONTRAST: f64 = 2.3;

const LOG_OFFSET: f64 = 1e-6;
const SATURATION: f64 = 0.6;

/// Tone maps HDR luminance by compressing the base layer of log10
/// luminance to `target_contrast` decades while the detail layer passes
/// through unscaled.
///
/// Color is reattached as `out_c = (in_c / L_in)^0.6 * L_out`. The result
/// is display-referred linear intensity clamped to `[0, 1]`.
pub fn hdr_compress(hdr: &Image, params: &FilterParams, target_contrast: f64) -> Result<Image> {
    params.validate()?;
    if !(target_contrast > 0.0) {
        return Err(Error::Param(format!(
            "target contrast must be positive, got {target_contrast}"
        )));
    }
    let lum = luma(hdr);
    if let Some(bad) = lum.data().iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain(format!(
            "luminance must be positive, found {bad}"
        )));
    }
    let log_lum = lum.map(|v| (v + LOG_OFFSET).log10());
    let mut gray_params = params.clone();
    gray_params.color = crate::ColorMode::PerChannel;
    let base = snf(&log_lum, None, &gray_params)?;
    let detail = log_lum.zip_map(&base, |l, b| l - b)?;

    let (bmin, bmax) = min_max(base.data());
    let scale = if bmax > bmin {
        target_contrast / (bmax - bmin)
    } else {
        1.0
    };
    let combined: Vec<f64> = base
        .data()
        .iter()
        .zip(detail.data())
        .map(|(&b, &d)| (b - bmax) * scale + bmax + d)
        .collect();
    let (_, top) = min_max(&combined);
    let out_lum: Vec<f64> = combined.iter().map(|&v| 10f64.powf(v - top)).collect();

    let n = hdr.pixel_count();
    let mut out = hdr.clone().with_range(DynamicRange::Ldr);
    if hdr.channels() == 1 {
        out.data_mut().copy_from_slice(&out_lum);
    } else {
        let lin = lum.data();
        let d = out.data_mut();
        for c in 0..3 {
            for i in 0..n {
                let ratio = (hdr.data()[c * n + i].max(0.0) / lin[i]).powf(SATURATION);
                d[c * n + i] = ratio * out_lum[i];
            }
        }
    }
    Ok(out.clamped())
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;

    #[test]
    fn rejects_non_positive_luminance() {
        let img = Image::gray(2, 1, vec![1.0, 0.0]).unwrap();
        let r = hdr_compress(&img, &FilterParams::new(0.2, 1), 2.3);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn output_is_display_range() {
        let img = Image::from_fn(30, 24, |x, y| {
            10f64.powf((x as f64 - 10.0) / 4.0 + 0.01 * y as f64)
        })
        .unwrap();
        let out = hdr_compress(&img, &Preset::Fig7.params(30, 24), 2.3).unwrap();
        assert_eq!(out.range(), DynamicRange::Ldr);
        let (lo, hi) = min_max(out.data());
        assert!(lo > 0.0 && hi <= 1.0);
        assert!((hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn luminance_order_kept_on_a_plateau() {
        // small multiplicative texture on one plateau
        let img = Image::from_fn(40, 30, |x, y| {
            50.0 * (1.0 + 0.03 * (((x * 7 + y * 3) % 5) as f64 - 2.0))
        })
        .unwrap();
        let out = hdr_compress(&img, &Preset::Fig7.params(40, 30), 2.3).unwrap();
        for i in 0..img.data().len() {
            for j in [i + 1, i + 41, i + 97] {
                if j >= img.data().len() {
                    continue;
                }
                let (a, b) = (img.data()[i], img.data()[j]);
                let (oa, ob) = (out.data()[i], out.data()[j]);
                if a > b {
                    assert!(oa >= ob);
                } else if a < b {
                    assert!(oa <= ob);
                }
            }
        }
    }

    #[test]
    fn gray_input_keeps_chroma_ratios() {
        let g = Image::from_fn(16, 16, |x, _| 0.01 + x as f64).unwrap();
        let rgb = Image::from_planes(16, 16, &[g.data(), g.data(), g.data()]).unwrap();
        let out = hdr_compress(&rgb, &FilterParams::new(0.2, 3), 2.0).unwrap();
        for i in 0..256 {
            assert!((out.plane(0)[i] - out.plane(1)[i]).abs() < 1e-9);
            assert!((out.plane(1)[i] - out.plane(2)[i]).abs() < 1e-9);
        }
    }
}
