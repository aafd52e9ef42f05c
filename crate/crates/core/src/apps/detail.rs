use crate::snf::snf;
use crate::{FilterParams, Image, Result};

/// `input = base + detail`, with `base` the filtered image.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseDetail {
    pub base: Image,
    pub detail: Image,
}

impl BaseDetail {
    pub fn reconstruct(&self) -> Image {
        detail_boost(self, 1.0)
    }
}

pub fn base_detail(img: &Image, params: &FilterParams) -> Result<BaseDetail> {
    let base = snf(img, None, params)?;
    let detail = img.zip_map(&base, |i, b| i - b)?;
    Ok(BaseDetail { base, detail })
}

/// `base + factor * detail`. Not clamped; saving clamps.
pub fn detail_boost(bd: &BaseDetail, factor: f64) -> Image {
    bd.base
        .zip_map(&bd.detail, |b, d| b + factor * d)
        .expect("base and detail share a shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_image_has_no_detail() {
        let img = Image::filled(12, 12, 1, 0.42).unwrap();
        let bd = base_detail(&img, &FilterParams::new(0.2, 3)).unwrap();
        assert!(bd.base.max_abs_diff(&img) < 1e-12);
        assert!(bd.detail.data().iter().all(|d| d.abs() < 1e-12));
    }

    #[test]
    fn reconstruction_and_boost() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data: Vec<f64> = (0..3 * 30 * 20).map(|_| rng.random::<f64>()).collect();
        let img = Image::new(30, 20, 3, data).unwrap();
        let bd = base_detail(&img, &FilterParams::new(0.2, 10)).unwrap();
        assert!(bd.reconstruct().max_abs_diff(&img) < 1e-9);
        assert!(detail_boost(&bd, 1.0).max_abs_diff(&img) < 1e-9);
        assert_eq!(detail_boost(&bd, 0.0), bd.base);
        let twice = detail_boost(&bd, 2.0);
        for i in 0..img.data().len() {
            let expect = bd.base.data()[i] + 2.0 * bd.detail.data()[i];
            assert!((twice.data()[i] - expect).abs() < 1e-15);
        }
    }
}
