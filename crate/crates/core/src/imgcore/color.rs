//! BT.601 luma / color-difference transform.
//!
//! Chroma is the scaled difference form `U = (B - Y) / (2 (1 - Kb))`,
//! `V = (R - Y) / (2 (1 - Kr))`, so both chroma channels lie in
//! `[-0.5, 0.5]` for RGB in `[0, 1]`.

use super::Image;
use crate::{Error, Result};

pub const LUMA_R: f64 = 0.299;
pub const LUMA_G: f64 = 0.587;
pub const LUMA_B: f64 = 0.114;

const U_SCALE: f64 = 2.0 * (1.0 - LUMA_B);
const V_SCALE: f64 = 2.0 * (1.0 - LUMA_R);

fn require_rgb(img: &Image) -> Result<()> {
    if img.channels() == 3 {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "color transform needs 3 channels, got {}",
            img.channels()
        )))
    }
}

pub fn rgb_to_yuv(img: &Image) -> Result<Image> {
    require_rgb(img)?;
    let n = img.pixel_count();
    let mut out = img.clone();
    let d = out.data_mut();
    for i in 0..n {
        let (r, g, b) = (d[i], d[n + i], d[2 * n + i]);
        let y = LUMA_R * r + LUMA_G * g + LUMA_B * b;
        d[i] = y;
        d[n + i] = (b - y) / U_SCALE;
        d[2 * n + i] = (r - y) / V_SCALE;
    }
    Ok(out)
}

pub fn yuv_to_rgb(img: &Image) -> Result<Image> {
    require_rgb(img)?;
    let n = img.pixel_count();
    let mut out = img.clone();
    let d = out.data_mut();
    for i in 0..n {
        let (y, u, v) = (d[i], d[n + i], d[2 * n + i]);
        let r = y + V_SCALE * v;
        let b = y + U_SCALE * u;
        let g = (y - LUMA_R * r - LUMA_B * b) / LUMA_G;
        d[i] = r;
        d[n + i] = g;
        d[2 * n + i] = b;
    }
    Ok(out)
}

/// Luma plane of an RGB image; a gray image is returned unchanged.
pub fn luma(img: &Image) -> Image {
    if img.channels() == 1 {
        return img.clone();
    }
    let n = img.pixel_count();
    let d = img.data();
    let data = (0..n)
        .map(|i| LUMA_R * d[i] + LUMA_G * d[n + i] + LUMA_B * d[2 * n + i])
        .collect();
    Image::gray(img.width(), img.height(), data)
        .expect("plane has the image's dimensions")
        .with_range(img.range())
}
