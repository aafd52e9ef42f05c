use crate::snf::snf_irls_quantized;
use crate::{FilterParams, Image, Result};

/// Reweighted average of `img` with weights from `guide`. Every channel of
/// `img` shares the weights from the guide's luma.
pub fn joint_filter(img: &Image, guide: &Image, params: &FilterParams) -> Result<Image> {
    img.require_same_dims(guide, "joint_filter guide")?;
    snf_irls_quantized(img, Some(guide), params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxfilter::box_mean;
    use crate::snf::snf;
    use crate::Error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(w: usize, h: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_fn(w, h, |_, _| rng.random::<f64>()).unwrap()
    }

    #[test]
    fn self_guidance_is_plain_filter() {
        let img = random(20, 16, 1);
        let params = FilterParams::new(0.2, 11);
        assert_eq!(
            joint_filter(&img, &img, &params).unwrap(),
            snf(&img, None, &params).unwrap()
        );
    }

    #[test]
    fn constant_guide_gives_box_mean() {
        let img = random(20, 16, 2);
        let guide = Image::filled(20, 16, 1, 0.5).unwrap();
        let out = joint_filter(&img, &guide, &FilterParams::new(0.2, 3)).unwrap();
        assert!(out.max_abs_diff(&box_mean(&img, 3).unwrap()) < 1e-9);
    }

    #[test]
    fn size_mismatch() {
        let r = joint_filter(
            &random(4, 4, 3),
            &random(4, 5, 4),
            &FilterParams::new(0.2, 1),
        );
        assert!(matches!(r, Err(Error::Shape(_))));
    }

    #[test]
    fn guide_edges_transfer_to_noisy_input() {
        // flat noisy input, guide with a vertical edge: output follows the
        // guide's partition rather than blurring across it
        let step = Image::from_fn(32, 16, |x, _| if x < 16 { 0.2 } else { 0.8 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let noisy = step.map(|v| v + 0.05 * (rng.random::<f64>() - 0.5));
        let out = joint_filter(&noisy, &step, &FilterParams::new(0.2, 5)).unwrap();
        for y in 0..16 {
            assert!((out.get(15, y, 0) - 0.2).abs() < 0.02);
            assert!((out.get(16, y, 0) - 0.8).abs() < 0.02);
        }
    }
}
