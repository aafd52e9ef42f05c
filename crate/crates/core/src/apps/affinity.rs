use crate::imgcore::luma;
use crate::snf::{QuantizedJob, WeightFn};
use crate::{Error, FilterParams, Image, Result};

/// The window affinity `W_ij = w(G_i - G_j)` for `j` in the window of `i`,
/// applied as an unnormalized joint filter in `O(B * N)` instead of an
/// explicit sparse matrix product.
#[derive(Debug, Clone)]
pub struct Affinity {
    guide: Image,
    params: FilterParams,
}

impl Affinity {
    pub fn new(guide: &Image, params: &FilterParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            guide: luma(guide),
            params: params.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.guide.pixel_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `y = W x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.len() {
            return Err(Error::Shape(format!(
                "vector of length {} for {} pixels",
                x.len(),
                self.len()
            )));
        }
        let job = QuantizedJob {
            width: self.guide.width(),
            height: self.guide.height(),
            radius: self.params.radius,
            weight: WeightFn::new(self.params.p, self.params.eps),
            guide: self.guide.data(),
            bins: self.params.bins,
            mask: None,
            normalize: false,
        };
        Ok(job.run(&[x])?.pop().expect("one vector in, one out"))
    }

    /// Row sums `d_i = sum_j W_ij`.
    pub fn degree(&self) -> Result<Vec<f64>> {
        self.apply(&vec![1.0; self.len()])
    }
}

pub fn affinity_apply(x: &[f64], guide: &Image, params: &FilterParams) -> Result<Vec<f64>> {
    Affinity::new(guide, params)?.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxfilter::window_counts;
    use crate::snf::snf_weight;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ones_give_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = Image::from_fn(12, 9, |_, _| rng.random::<f64>()).unwrap();
        let a = Affinity::new(&g, &FilterParams::new(0.5, 2).with_bins(16)).unwrap();
        assert_eq!(a.apply(&vec![1.0; 108]).unwrap(), a.degree().unwrap());
    }

    #[test]
    fn constant_guide_is_scaled_box_sum() {
        // on a bin center, so no interpolation between bins
        let g = Image::filled(10, 8, 1, 10.0 / 31.0).unwrap();
        let params = FilterParams::new(0.3, 2);
        let y = affinity_apply(&vec![1.0; 80], &g, &params).unwrap();
        let w0 = snf_weight(0.0, 0.3, params.eps);
        for (yi, n) in y.iter().zip(window_counts(10, 8, 2)) {
            assert!((yi / (w0 * n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn length_mismatch() {
        let g = Image::filled(4, 4, 1, 0.3).unwrap();
        let r = affinity_apply(&[1.0; 15], &g, &FilterParams::new(0.3, 1));
        assert!(matches!(r, Err(Error::Shape(_))));
    }
}
