//! Summed-area tables and clipped-window sums.
//!
//! Windows are clipped at the image border and averages divide by the true
//! population of the clipped window, so `box_mean` is the exact minimizer
//! of `sum_j (v - I_j)^2` everywhere including the border.

use rayon::prelude::*;

use crate::{Error, Image, Result};

/// `(w + 1) x (h + 1)` table; entry `(y, x)` holds the sum of all pixels
/// strictly above and to the left of `(y, x)`. Row 0 and column 0 are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralImage {
    width: usize,
    height: usize,
    table: Vec<f64>,
}

impl IntegralImage {
    pub(crate) fn from_plane(plane: &[f64], width: usize, height: usize) -> Self {
        let mut ii = Self {
            width,
            height,
            table: vec![0.0; (width + 1) * (height + 1)],
        };
        ii.rebuild(plane);
        ii
    }

    /// Refills the table from a plane of the same dimensions.
    pub(crate) fn rebuild(&mut self, plane: &[f64]) {
        let (w, h) = (self.width, self.height);
        debug_assert_eq!(plane.len(), w * h);
        let stride = w + 1;
        for y in 0..h {
            let mut row_sum = 0.0;
            let src = &plane[y * w..(y + 1) * w];
            let (above, below) = self.table.split_at_mut((y + 1) * stride);
            let above = &above[y * stride..];
            let cur = &mut below[..stride];
            for x in 0..w {
                row_sum += src[x];
                cur[x + 1] = above[x + 1] + row_sum;
            }
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Table entry at `(y, x)`, `0 <= y <= height`, `0 <= x <= width`.
    pub fn at(&self, y: usize, x: usize) -> f64 {
        self.table[y * (self.width + 1) + x]
    }

    /// Sum over the half-open rectangle `[x0, x1) x [y0, y1)`.
    pub fn rect_sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
        self.at(y1, x1) - self.at(y0, x1) - self.at(y1, x0) + self.at(y0, x0)
    }

    /// Clipped window sums of half-width `r` written into `out`.
    pub(crate) fn window_sums_into(&self, r: usize, out: &mut [f64]) {
        let (w, h) = (self.width, self.height);
        debug_assert_eq!(out.len(), w * h);
        let stride = w + 1;
        let t = &self.table;
        out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
            let y0 = y.saturating_sub(r) * stride;
            let y1 = (y + r + 1).min(h) * stride;
            for (x, o) in row.iter_mut().enumerate() {
                let x0 = x.saturating_sub(r);
                let x1 = (x + r + 1).min(w);
                *o = t[y1 + x1] - t[y0 + x1] - t[y1 + x0] + t[y0 + x0];
            }
        });
    }
}

/// Window sums paired with the per-pixel window population `|N_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSum {
    pub sum: Image,
    pub count: Image,
}

pub fn integral_image(channel: &Image) -> Result<IntegralImage> {
    channel.require_gray("integral_image")?;
    Ok(IntegralImage::from_plane(
        channel.data(),
        channel.width(),
        channel.height(),
    ))
}

pub fn box_sum(ii: &IntegralImage, r: usize) -> BoxSum {
    let (w, h) = (ii.width, ii.height);
    let mut sum = vec![0.0; w * h];
    ii.window_sums_into(r, &mut sum);
    BoxSum {
        sum: Image::gray(w, h, sum).expect("table dimensions are non-zero"),
        count: Image::gray(w, h, window_counts(w, h, r)).expect("table dimensions are non-zero"),
    }
}

/// Per-pixel population of the clipped `(2r + 1)^2` window.
pub fn window_counts(width: usize, height: usize, r: usize) -> Vec<f64> {
    let span = |i: usize, n: usize| ((i + r + 1).min(n) - i.saturating_sub(r)) as f64;
    let cx: Vec<f64> = (0..width).map(|x| span(x, width)).collect();
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        let sy = span(y, height);
        out.extend(cx.iter().map(|&sx| sx * sy));
    }
    out
}

pub(crate) fn box_sum_plane(plane: &[f64], width: usize, height: usize, r: usize) -> Vec<f64> {
    let ii = IntegralImage::from_plane(plane, width, height);
    let mut out = vec![0.0; width * height];
    ii.window_sums_into(r, &mut out);
    out
}

/// Arithmetic mean over each clipped window, channel by channel.
pub fn box_mean(img: &Image, r: usize) -> Result<Image> {
    if r < 1 {
        return Err(Error::Param("box_mean radius must be at least 1".into()));
    }
    let (w, h) = (img.width(), img.height());
    let counts = window_counts(w, h, r);
    let mut out = img.clone();
    let mut ii = IntegralImage::from_plane(img.plane(0), w, h);
    for c in 0..img.channels() {
        if c > 0 {
            ii.rebuild(img.plane(c));
        }
        let dst = out.plane_mut(c);
        ii.window_sums_into(r, dst);
        dst.par_iter_mut()
            .zip(counts.par_iter())
            .for_each(|(v, &n)| *v /= n);
    }
    Ok(out)
}
