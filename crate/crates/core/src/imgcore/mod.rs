//! Planar image container, color transforms, quantization grid and file I/O.

mod color;
mod io;
mod quant;

pub use color::{luma, rgb_to_yuv, yuv_to_rgb, LUMA_B, LUMA_G, LUMA_R};
pub use io::{load_image, load_rgba, save_image, FileKind};
pub use quant::{make_quant_grid, QuantGrid};

use crate::{Error, Result};

/// Whether intensities are display-referred in `[0, 1]` or scene-referred
/// positive luminance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DynamicRange {
    #[default]
    Ldr,
    Hdr,
}

/// Row-major planar image of `f64` intensities.
///
/// Channel `c` occupies `data[c * w * h .. (c + 1) * w * h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
    range: DynamicRange,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::Shape(format!(
                "channel count must be 1 or 3, got {channels}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::Shape("image has zero area".into()));
        }
        if data.len() != width * height * channels {
            return Err(Error::Shape(format!(
                "data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
            range: DynamicRange::Ldr,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    /// Single-channel image from a row-major plane.
    pub fn gray(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(width, height, 1, data)
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::gray(width, height, data)
    }

    /// Stacks equally sized single-channel planes.
    pub fn from_planes(width: usize, height: usize, planes: &[&[f64]]) -> Result<Self> {
        let n = width * height;
        let mut data = Vec::with_capacity(n * planes.len());
        for p in planes {
            if p.len() != n {
                return Err(Error::Shape(format!(
                    "plane length {} does not match {width}x{height}",
                    p.len()
                )));
            }
            data.extend_from_slice(p);
        }
        Self::new(width, height, planes.len(), data)
    }

    pub fn with_range(mut self, range: DynamicRange) -> Self {
        self.range = range;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn range(&self) -> DynamicRange {
        self.range
    }

    /// Pixels per channel.
    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.pixel_count();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.pixel_count();
        &mut self.data[c * n..(c + 1) * n]
    }

    /// Copies one channel out as a single-channel image.
    pub fn channel(&self, c: usize) -> Image {
        Image {
            width: self.width,
            height: self.height,
            channels: 1,
            data: self.plane(c).to_vec(),
            range: self.range,
        }
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[c * self.pixel_count() + y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        let n = self.pixel_count();
        self.data[c * n + y * self.width + x] = v;
    }

    pub fn same_dims(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn require_same_dims(&self, other: &Image, what: &str) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{what}: {}x{} does not match {}x{}",
                other.width, other.height, self.width, self.height
            )))
        }
    }

    pub(crate) fn require_gray(&self, what: &str) -> Result<()> {
        if self.channels == 1 {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{what} expects a single-channel image, got {} channels",
                self.channels
            )))
        }
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Image {
        Image {
            data: self.data.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Element-wise combination of two images of identical shape.
    pub fn zip_map(&self, other: &Image, f: impl Fn(f64, f64) -> f64) -> Result<Image> {
        if !self.same_dims(other) || self.channels != other.channels {
            return Err(Error::Shape("zip_map on mismatched images".into()));
        }
        Ok(Image {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            ..self.clone()
        })
    }

    pub fn clamped(&self) -> Image {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    pub fn max_abs_diff(&self, other: &Image) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn flip_horizontal(&self) -> Image {
        self.remap(self.width, self.height, |x, y| (self.width - 1 - x, y))
    }

    pub fn flip_vertical(&self) -> Image {
        self.remap(self.width, self.height, |x, y| (x, self.height - 1 - y))
    }

    /// Rotates 90 degrees clockwise.
    pub fn rotate90(&self) -> Image {
        // output (x, y) reads input (y, h - 1 - x)
        self.remap(self.height, self.width, |x, y| (y, self.height - 1 - x))
    }

    fn remap(&self, w: usize, h: usize, src: impl Fn(usize, usize) -> (usize, usize)) -> Image {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.channels {
            let plane = self.plane(c);
            for y in 0..h {
                for x in 0..w {
                    let (sx, sy) = src(x, y);
                    data.push(plane[sy * self.width + sx]);
                }
            }
        }
        Image {
            width: w,
            height: h,
            channels: self.channels,
            data,
            range: self.range,
        }
    }
}
