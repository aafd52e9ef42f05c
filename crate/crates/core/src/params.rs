use crate::{Error, Result};

/// How the per-pixel energy is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Reweighted average with the center intensity quantized into bins,
    /// `O(B * N)`.
    #[default]
    Irls,
    /// Reweighted average evaluated directly over every window, `O(N * r^2)`.
    IrlsDirect,
    /// Exhaustive search over the quantization grid, `O(B * N)`.
    BruteForce,
}

/// Handling of three-channel inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorMode {
    /// Filter BT.601 luma, pass chroma through.
    #[default]
    Luma,
    /// Filter R, G and B independently.
    PerChannel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterParams {
    /// Norm exponent, `0 < p <= 2`.
    pub p: f64,
    /// Window half-width; the window is `(2r + 1)^2` clipped to the image.
    pub radius: usize,
    /// Quantization bins for the accelerated paths.
    pub bins: usize,
    /// Smoothing constant in the weight `(d^2 + eps^2)^((p - 2) / 2)`.
    pub eps: f64,
    pub iterations: usize,
    pub strategy: Strategy,
    pub color: ColorMode,
    /// Optional Gaussian spatial falloff (pixels). Only the direct path
    /// supports it; `None` weighs the whole window uniformly.
    pub spatial_sigma: Option<f64>,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            p: 0.2,
            radius: 10,
            bins: 32,
            eps: 1.0 / 255.0,
            iterations: 1,
            strategy: Strategy::Irls,
            color: ColorMode::Luma,
            spatial_sigma: None,
        }
    }
}

impl FilterParams {
    pub fn new(p: f64, radius: usize) -> Self {
        Self {
            p,
            radius,
            ..Self::default()
        }
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = bins;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_color(mut self, color: ColorMode) -> Self {
        self.color = color;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 2.0) {
            return Err(Error::Param(format!(
                "p must lie in (0, 2], got {}",
                self.p
            )));
        }
        if self.radius < 1 {
            return Err(Error::Param("radius must be at least 1".into()));
        }
        if self.bins < 2 {
            return Err(Error::Param(format!(
                "bin count must be at least 2, got {}",
                self.bins
            )));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::Param(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if self.iterations < 1 {
            return Err(Error::Param("iterations must be at least 1".into()));
        }
        if let Some(s) = self.spatial_sigma {
            if !(s > 0.0) {
                return Err(Error::Param(format!(
                    "spatial sigma must be positive, got {s}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        FilterParams::default().validate().unwrap();
        assert_eq!(FilterParams::default().eps, 1.0 / 255.0);
    }

    #[test]
    fn rejects_out_of_range() {
        for bad in [
            FilterParams::new(0.0, 3),
            FilterParams::new(2.5, 3),
            FilterParams::new(1.0, 0),
            FilterParams::new(1.0, 3).with_bins(1),
            FilterParams::new(1.0, 3).with_eps(0.0),
            FilterParams::new(1.0, 3).with_iterations(0),
        ] {
            assert!(matches!(bad.validate(), Err(Error::Param(_))), "{bad:?}");
        }
    }
}
