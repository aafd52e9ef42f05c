//! Slow, direct reference implementations.
//!
//! Nothing here touches integral images or bin quantization; these exist
//! to check the fast paths and to serve as baselines.

use rustfft::num_complex::Complex64;

use crate::apps::Kernel;
use crate::{fft, Error, Image, Result};

/// Window bounds `[x0, x1) x [y0, y1)` clipped to the image.
fn window(img: &Image, x: usize, y: usize, r: usize) -> (usize, usize, usize, usize) {
    (
        x.saturating_sub(r),
        (x + r + 1).min(img.width()),
        y.saturating_sub(r),
        (y + r + 1).min(img.height()),
    )
}

/// `sum_{j in N_i} |v - I_j|^p` by direct summation over the clipped
/// window around `(x, y)` in channel 0.
pub fn energy_at(img: &Image, x: usize, y: usize, v: f64, p: f64, r: usize) -> Result<f64> {
    if x >= img.width() || y >= img.height() {
        return Err(Error::Index(format!(
            "pixel ({x}, {y}) outside {}x{}",
            img.width(),
            img.height()
        )));
    }
    let (x0, x1, y0, y1) = window(img, x, y, r);
    let mut e = 0.0;
    for yy in y0..y1 {
        for xx in x0..x1 {
            e += (v - img.get(xx, yy, 0)).abs().powf(p);
        }
    }
    Ok(e)
}

/// Sorting median of each clipped window; the lower median when the
/// window population is even.
pub fn median_filter(img: &Image, r: usize) -> Image {
    let mut out = img.clone();
    let mut buf = Vec::with_capacity((2 * r + 1) * (2 * r + 1));
    for c in 0..img.channels() {
        let plane = img.plane(c);
        let w = img.width();
        for y in 0..img.height() {
            for x in 0..w {
                let (x0, x1, y0, y1) = window(img, x, y, r);
                buf.clear();
                for yy in y0..y1 {
                    buf.extend_from_slice(&plane[yy * w + x0..yy * w + x1]);
                }
                buf.sort_by(f64::total_cmp);
                let m = buf[(buf.len() - 1) / 2];
                out.set(x, y, c, m);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilateralParams {
    pub sigma_s: f64,
    pub sigma_r: f64,
    pub radius: usize,
}

/// Direct bilateral filter: Gaussian spatial times Gaussian range weights,
/// normalized over the clipped window.
pub fn bilateral_filter(img: &Image, bp: &BilateralParams) -> Result<Image> {
    if !(bp.sigma_s > 0.0 && bp.sigma_r > 0.0 && bp.radius > 0) {
        return Err(Error::Param("bilateral parameters must be positive".into()));
    }
    let mut out = img.clone();
    let r = bp.radius;
    for c in 0..img.channels() {
        for y in 0..img.height() {
            for x in 0..img.width() {
                let (x0, x1, y0, y1) = window(img, x, y, r);
                let ii = img.get(x, y, c);
                let (mut num, mut den) = (0.0, 0.0);
                for yy in y0..y1 {
                    for xx in x0..x1 {
                        let ij = img.get(xx, yy, c);
                        let d2 = (xx as f64 - x as f64).powi(2) + (yy as f64 - y as f64).powi(2);
                        let wij = (-d2 / (2.0 * bp.sigma_s * bp.sigma_s)).exp()
                            * (-(ij - ii).powi(2) / (2.0 * bp.sigma_r * bp.sigma_r)).exp();
                        num += wij * ij;
                        den += wij;
                    }
                }
                out.set(x, y, c, num / den);
            }
        }
    }
    Ok(out)
}

/// Solves `(Id + lambda grad^T grad) B = I` with periodic forward
/// differences, exactly, in the frequency domain.
pub fn tikhonov_filter(img: &Image, lambda: f64) -> Result<Image> {
    tikhonov_solve(img, None, lambda)
}

/// Minimizer of `|k * B - obs|^2 + lambda |grad B|^2` (periodic).
pub fn tikhonov_deconvolve(obs: &Image, kernel: &Kernel, lambda: f64) -> Result<Image> {
    tikhonov_solve(obs, Some(kernel), lambda)
}

fn tikhonov_solve(img: &Image, kernel: Option<&Kernel>, lambda: f64) -> Result<Image> {
    if !(lambda >= 0.0) {
        return Err(Error::Param(format!(
            "lambda must be non-negative, got {lambda}"
        )));
    }
    let (w, h) = (img.width(), img.height());
    let lap: Vec<f64> = fft::difference_power(w, h, 1, 0)
        .iter()
        .zip(fft::difference_power(w, h, 0, 1))
        .map(|(a, b)| a + b)
        .collect();
    let k_hat = kernel.map(|k| k.spectrum(w, h));
    let mut out = img.clone();
    for c in 0..img.channels() {
        let y_hat = fft::forward(img.plane(c), w, h);
        let spec: Vec<Complex64> = (0..w * h)
            .map(|i| match &k_hat {
                Some(k) => {
                    let kk = k[i];
                    let den = kk.norm_sqr() + lambda * lap[i];
                    if den > 0.0 {
                        kk.conj() * y_hat[i] / den
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
                None => y_hat[i] / (1.0 + lambda * lap[i]),
            })
            .collect();
        out.plane_mut(c)
            .copy_from_slice(&fft::inverse_real(spec, w, h));
    }
    Ok(out)
}
