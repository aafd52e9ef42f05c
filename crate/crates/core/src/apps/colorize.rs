use crate::boxfilter::box_sum_plane;
use crate::imgcore::{rgb_to_yuv, yuv_to_rgb};
use crate::snf::{QuantizedJob, WeightFn};
use crate::{Error, FilterParams, Image, Result};

/// Chroma constraints from user strokes.
#[derive(Debug, Clone, PartialEq)]
pub struct StrokeMap {
    width: usize,
    height: usize,
    u: Vec<f64>,
    v: Vec<f64>,
    mask: Vec<bool>,
}

impl StrokeMap {
    pub fn new(width: usize, height: usize) -> Self {
        let n = width * height;
        Self {
            width,
            height,
            u: vec![0.0; n],
            v: vec![0.0; n],
            mask: vec![false; n],
        }
    }

    /// Pixels with `alpha > 0` are constrained to the chroma of `rgb`.
    pub fn from_overlay(rgb: &Image, alpha: &[f64]) -> Result<Self> {
        if alpha.len() != rgb.pixel_count() {
            return Err(Error::Shape("alpha plane size differs from overlay".into()));
        }
        let yuv = rgb_to_yuv(rgb)?;
        let mut map = Self::new(rgb.width(), rgb.height());
        for (i, &a) in alpha.iter().enumerate() {
            if a > 0.0 {
                map.mask[i] = true;
                map.u[i] = yuv.plane(1)[i];
                map.v[i] = yuv.plane(2)[i];
            }
        }
        Ok(map)
    }

    /// Constrains pixel `(x, y)` to chroma `(u, v)`.
    pub fn set(&mut self, x: usize, y: usize, u: f64, v: f64) {
        let i = y * self.width + x;
        self.mask[i] = true;
        self.u[i] = u;
        self.v[i] = v;
    }

    /// Constrains `(x, y)` to the chroma of an RGB color.
    pub fn set_rgb(&mut self, x: usize, y: usize, rgb: [f64; 3]) {
        let yuv =
            rgb_to_yuv(&Image::new(1, 1, 3, rgb.to_vec()).expect("1x1x3")).expect("three channels");
        self.set(x, y, yuv.data()[1], yuv.data()[2]);
    }

    pub fn constrained(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn chroma(&self) -> (&[f64], &[f64]) {
        (&self.u, &self.v)
    }
}

/// Spreads stroke chroma over a gray image.
///
/// Each of `params.iterations` Jacobi sweeps replaces every unconstrained
/// pixel's chroma by the joint weighted average (weights from `gray`) of
/// the chroma at pixels already reached; stroke pixels are reset to their
/// stroke value after every sweep. Pixels enter the average once a reached
/// pixel falls in their window. The result is RGB with `gray` as luma.
pub fn colorize(gray: &Image, strokes: &StrokeMap, params: &FilterParams) -> Result<Image> {
    params.validate()?;
    gray.require_gray("colorize")?;
    if strokes.width != gray.width() || strokes.height != gray.height() {
        return Err(Error::Shape(
            "stroke map size differs from the gray image".into(),
        ));
    }
    if strokes.constrained() == 0 {
        return Err(Error::Param(
            "colorization needs at least one stroke pixel".into(),
        ));
    }
    let (w, h) = (gray.width(), gray.height());
    let mut u = strokes.u.clone();
    let mut v = strokes.v.clone();
    let mut known = strokes.mask.clone();
    for _ in 0..params.iterations {
        let known_f: Vec<f64> = known.iter().map(|&k| if k { 1.0 } else { 0.0 }).collect();
        // integer counts, exact in f64
        let reach = box_sum_plane(&known_f, w, h, params.radius);
        let job = QuantizedJob {
            width: w,
            height: h,
            radius: params.radius,
            weight: WeightFn::new(params.p, params.eps),
            guide: gray.data(),
            bins: params.bins,
            mask: Some(&known_f),
            normalize: true,
        };
        let mut res = job.run(&[&u, &v])?;
        let (nv, nu) = (
            res.pop().expect("two planes"),
            res.pop().expect("two planes"),
        );
        for i in 0..w * h {
            if strokes.mask[i] || reach[i] < 0.5 {
                continue;
            }
            u[i] = nu[i];
            v[i] = nv[i];
            known[i] = true;
        }
    }
    let yuv = Image::from_planes(w, h, &[gray.data(), &u, &v])?;
    yuv_to_rgb(&yuv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_strokes_rejected() {
        let g = Image::filled(8, 8, 1, 0.5).unwrap();
        let r = colorize(&g, &StrokeMap::new(8, 8), &FilterParams::new(0.1, 2));
        assert!(matches!(r, Err(Error::Param(_))));
    }

    #[test]
    fn size_mismatch_rejected() {
        let g = Image::filled(8, 8, 1, 0.5).unwrap();
        let mut s = StrokeMap::new(8, 7);
        s.set(0, 0, 0.1, 0.1);
        assert!(matches!(
            colorize(&g, &s, &FilterParams::new(0.1, 2)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn overlay_alpha_marks_strokes() {
        let rgb = Image::new(2, 1, 3, vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let s = StrokeMap::from_overlay(&rgb, &[1.0, 0.0]).unwrap();
        assert_eq!(s.mask(), &[true, false]);
        assert!((s.chroma().1[0] - 0.5).abs() < 1e-12);
        assert_eq!(s.chroma().0[1], 0.0);
    }

    #[test]
    fn strokes_kept_and_luma_is_gray() {
        let g = Image::from_fn(16, 16, |x, _| if x < 8 { 0.3 } else { 0.7 }).unwrap();
        let mut s = StrokeMap::new(16, 16);
        s.set(2, 8, 0.2, -0.1);
        s.set(13, 8, -0.15, 0.25);
        let out = colorize(&g, &s, &FilterParams::new(0.1, 4).with_iterations(10)).unwrap();
        let yuv = rgb_to_yuv(&out).unwrap();
        assert!(yuv.channel(0).max_abs_diff(&g) < 1e-12);
        assert!((yuv.get(2, 8, 1) - 0.2).abs() < 1e-12);
        assert!((yuv.get(13, 8, 2) - 0.25).abs() < 1e-12);
        // each half takes the color of its own stroke
        assert!((yuv.get(0, 0, 1) - 0.2).abs() < 1e-3);
        assert!((yuv.get(15, 15, 1) + 0.15).abs() < 1e-3);
    }
}
