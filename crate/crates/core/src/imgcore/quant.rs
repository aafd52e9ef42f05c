use crate::{Error, Result};

/// Strictly increasing set of candidate intensities `Q_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantGrid {
    bins: Vec<f64>,
}

impl QuantGrid {
    /// Grid from explicit centers; they must be strictly increasing and at
    /// least two.
    pub fn from_centers(bins: Vec<f64>) -> Result<Self> {
        if bins.len() < 2 {
            return Err(Error::Param(format!(
                "quantization grid needs at least 2 bins, got {}",
                bins.len()
            )));
        }
        if bins.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Param(
                "bin centers must be strictly increasing".into(),
            ));
        }
        Ok(Self { bins })
    }

    /// Uniform grid of `count` centers over `[lo, hi]`.
    pub(crate) fn uniform(count: usize, lo: f64, hi: f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::Param(format!(
                "bin count must be at least 2, got {count}"
            )));
        }
        if !(hi > lo) {
            return Err(Error::Param(format!("empty grid range [{lo}, {hi}]")));
        }
        let step = (hi - lo) / (count - 1) as f64;
        let mut bins: Vec<f64> = (0..count).map(|b| lo + b as f64 * step).collect();
        bins[count - 1] = hi;
        Ok(Self { bins })
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }
}

/// `B` uniform centers `b / (B - 1)` covering `[0, 1]`.
pub fn make_quant_grid(bins: usize) -> Result<QuantGrid> {
    if bins < 2 {
        return Err(Error::Param(format!(
            "bin count must be at least 2, got {bins}"
        )));
    }
    let denom = (bins - 1) as f64;
    QuantGrid::from_centers((0..bins).map(|b| b as f64 / denom).collect())
}
