//! PNG / PNM for display-referred images, PFM for HDR.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder};

use super::{DynamicRange, Image};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    /// 8/16-bit PNG or binary PGM/PPM, normalized into `[0, 1]`.
    Ldr,
    /// Portable float map, raw reals.
    Hdr,
}

pub fn load_image(path: impl AsRef<Path>, kind: FileKind) -> Result<Image> {
    let path = path.as_ref();
    match kind {
        FileKind::Ldr => load_ldr(path),
        FileKind::Hdr => load_pfm(path),
    }
}

pub fn save_image(img: &Image, path: impl AsRef<Path>, kind: FileKind) -> Result<()> {
    let path = path.as_ref();
    match kind {
        FileKind::Ldr => save_ldr(img, path),
        FileKind::Hdr => save_pfm(img, path),
    }
}

fn decode(path: &Path) -> Result<DynamicImage> {
    let reader = image::ImageReader::open(path).map_err(|e| Error::io(path, e))?;
    let reader = reader
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    reader.decode().map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other}", path.display())),
    })
}

fn planar_from_interleaved<T: Copy + Into<f64>>(
    raw: &[T],
    src_channels: usize,
    keep: usize,
    max: f64,
    n: usize,
) -> Vec<f64> {
    let mut data = vec![0.0; n * keep];
    for i in 0..n {
        for c in 0..keep {
            data[c * n + i] = raw[i * src_channels + c].into() / max;
        }
    }
    data
}

fn load_ldr(path: &Path) -> Result<Image> {
    let dynimg = decode(path)?;
    let (w, h) = (dynimg.width() as usize, dynimg.height() as usize);
    let n = w * h;
    let (data, channels) = match &dynimg {
        DynamicImage::ImageLuma8(b) => (planar_from_interleaved(b.as_raw(), 1, 1, 255.0, n), 1),
        DynamicImage::ImageLumaA8(b) => (planar_from_interleaved(b.as_raw(), 2, 1, 255.0, n), 1),
        DynamicImage::ImageRgb8(b) => (planar_from_interleaved(b.as_raw(), 3, 3, 255.0, n), 3),
        DynamicImage::ImageRgba8(b) => (planar_from_interleaved(b.as_raw(), 4, 3, 255.0, n), 3),
        DynamicImage::ImageLuma16(b) => (planar_from_interleaved(b.as_raw(), 1, 1, 65535.0, n), 1),
        DynamicImage::ImageLumaA16(b) => (planar_from_interleaved(b.as_raw(), 2, 1, 65535.0, n), 1),
        DynamicImage::ImageRgb16(b) => (planar_from_interleaved(b.as_raw(), 3, 3, 65535.0, n), 3),
        DynamicImage::ImageRgba16(b) => (planar_from_interleaved(b.as_raw(), 4, 3, 65535.0, n), 3),
        other => {
            return Err(Error::Format(format!(
                "{}: unsupported sample type {:?}",
                path.display(),
                other.color()
            )))
        }
    };
    Image::new(w, h, channels, data)
}

/// Loads an RGBA overlay: RGB normalized into `[0, 1]` plus the alpha plane.
pub fn load_rgba(path: impl AsRef<Path>) -> Result<(Image, Vec<f64>)> {
    let path = path.as_ref();
    let rgba = decode(path)?.into_rgba16();
    let (w, h) = (rgba.width() as usize, rgba.height() as usize);
    let n = w * h;
    let raw = rgba.as_raw();
    let rgb = planar_from_interleaved(raw, 4, 3, 65535.0, n);
    let alpha = (0..n).map(|i| raw[i * 4 + 3] as f64 / 65535.0).collect();
    Ok((Image::new(w, h, 3, rgb)?, alpha))
}

fn to_code(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn save_ldr(img: &Image, path: &Path) -> Result<()> {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let n = img.pixel_count();
    let mut raw = vec![0u8; n * ch];
    for c in 0..ch {
        for (i, &v) in img.plane(c).iter().enumerate() {
            raw[i * ch + c] = to_code(v);
        }
    }
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let out = BufWriter::new(file);
    let color = if ch == 1 {
        ExtendedColorType::L8
    } else {
        ExtendedColorType::Rgb8
    };
    let res = match ext.as_str() {
        "pgm" | "ppm" | "pnm" => {
            let subtype = if ch == 1 {
                PnmSubtype::Graymap(SampleEncoding::Binary)
            } else {
                PnmSubtype::Pixmap(SampleEncoding::Binary)
            };
            PnmEncoder::new(out)
                .with_subtype(subtype)
                .write_image(&raw, w as u32, h as u32, color)
        }
        _ => image::codecs::png::PngEncoder::new(out).write_image(&raw, w as u32, h as u32, color),
    };
    res.map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Format(other.to_string()),
    })
}

fn pfm_token(reader: &mut impl BufRead) -> Result<String> {
    let mut tok = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        let got = reader
            .read(&mut byte)
            .map_err(|e| Error::Format(format!("pfm header: {e}")))?;
        if got == 0 {
            break;
        }
        if byte[0].is_ascii_whitespace() {
            if tok.is_empty() {
                continue;
            }
            break;
        }
        tok.push(byte[0]);
    }
    if tok.is_empty() {
        return Err(Error::Format("truncated pfm header".into()));
    }
    String::from_utf8(tok).map_err(|_| Error::Format("non-ascii pfm header".into()))
}

fn load_pfm(path: &Path) -> Result<Image> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let channels = match pfm_token(&mut reader)?.as_str() {
        "PF" => 3,
        "Pf" => 1,
        other => return Err(Error::Format(format!("not a pfm file (magic {other:?})"))),
    };
    let parse = |s: String, what: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::Format(format!("bad pfm {what}: {s:?}")))
    };
    let w = parse(pfm_token(&mut reader)?, "width")? as usize;
    let h = parse(pfm_token(&mut reader)?, "height")? as usize;
    let scale = parse(pfm_token(&mut reader)?, "scale")?;
    let little = scale < 0.0;
    let n = w * h;
    let mut bytes = vec![0u8; n * channels * 4];
    reader
        .read_exact(&mut bytes)
        .map_err(|e| Error::Format(format!("truncated pfm data: {e}")))?;
    let mut data = vec![0.0; n * channels];
    for (k, chunk) in bytes.chunks_exact(4).enumerate() {
        let arr = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little {
            f32::from_le_bytes(arr)
        } else {
            f32::from_be_bytes(arr)
        };
        let pix = k / channels;
        let c = k % channels;
        // rows are stored bottom to top
        let (row, col) = (pix / w, pix % w);
        let y = h - 1 - row;
        data[c * n + y * w + col] = v as f64;
    }
    Ok(Image::new(w, h, channels, data)?.with_range(DynamicRange::Hdr))
}

fn save_pfm(img: &Image, path: &Path) -> Result<()> {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let n = img.pixel_count();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let magic = if ch == 3 { "PF" } else { "Pf" };
    let mut buf = format!("{magic}\n{w} {h}\n-1.0\n").into_bytes();
    buf.reserve(n * ch * 4);
    for y in (0..h).rev() {
        for x in 0..w {
            for c in 0..ch {
                buf.extend_from_slice(&(img.data()[c * n + y * w + x] as f32).to_le_bytes());
            }
        }
    }
    out.write_all(&buf)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}
