//! Named parameter settings for common tasks.

use std::fmt;
use std::str::FromStr;

use crate::{Error, FilterParams, Strategy};

/// Smoothing constant for filtering log10 luminance. Texture of a few
/// percent spans about 0.02 decades, so the constant sits above that.
pub const HDR_LOG_EPS: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusRule {
    Pixels(usize),
    /// `height / n`
    HeightFraction(usize),
    /// `width / n`
    WidthFraction(usize),
}

impl RadiusRule {
    pub fn resolve(self, width: usize, height: usize) -> usize {
        match self {
            RadiusRule::Pixels(r) => r,
            RadiusRule::HeightFraction(n) => height / n,
            RadiusRule::WidthFraction(n) => width / n,
        }
        .max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Smoothing, `r = 2`, `p = 0.05`.
    Fig2j,
    /// Smoothing, `r = 10`, `p = 0.2`.
    Fig2k,
    /// Smoothing, `r = 10`, `p = 1.2`.
    Fig2l,
    /// Halo comparison, `p = 1.2`, `r = 16`.
    Fig3d,
    /// Halo comparison, `p = 0.05`, `r = 16`.
    Fig3e,
    /// Outlier-tolerant filtering, `p = 1`, `r = 10`.
    Fig6P1,
    /// Outlier-tolerant filtering, `p = 0.1`, `r = 10`.
    Fig6P01,
    /// HDR compression, `p = 0.2`, `r = height / 6`.
    Fig7,
    /// Deconvolution prior, `p = 0.5`, `r = 5`.
    Fig8,
    /// Flash / no-flash joint filtering, `p = 0.2`, `r = 11`.
    Fig9,
    /// Segmentation, `p = 0.3`, `r = width / 16`.
    Fig10,
    /// Colorization, `p = 0.1`, `r = height / 4`.
    Fig11,
}

impl Preset {
    pub const ALL: [Preset; 12] = [
        Preset::Fig2j,
        Preset::Fig2k,
        Preset::Fig2l,
        Preset::Fig3d,
        Preset::Fig3e,
        Preset::Fig6P1,
        Preset::Fig6P01,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9,
        Preset::Fig10,
        Preset::Fig11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2j => "fig2j",
            Preset::Fig2k => "fig2k",
            Preset::Fig2l => "fig2l",
            Preset::Fig3d => "fig3d",
            Preset::Fig3e => "fig3e",
            Preset::Fig6P1 => "fig6-p1",
            Preset::Fig6P01 => "fig6-p0.1",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
            Preset::Fig10 => "fig10",
            Preset::Fig11 => "fig11",
        }
    }

    pub fn p(self) -> f64 {
        match self {
            Preset::Fig2j | Preset::Fig3e => 0.05,
            Preset::Fig2k | Preset::Fig7 | Preset::Fig9 => 0.2,
            Preset::Fig2l | Preset::Fig3d => 1.2,
            Preset::Fig6P1 => 1.0,
            Preset::Fig6P01 | Preset::Fig11 => 0.1,
            Preset::Fig8 => 0.5,
            Preset::Fig10 => 0.3,
        }
    }

    pub fn radius_rule(self) -> RadiusRule {
        match self {
            Preset::Fig2j => RadiusRule::Pixels(2),
            Preset::Fig2k | Preset::Fig2l | Preset::Fig6P1 | Preset::Fig6P01 => {
                RadiusRule::Pixels(10)
            }
            Preset::Fig3d | Preset::Fig3e => RadiusRule::Pixels(16),
            Preset::Fig7 => RadiusRule::HeightFraction(6),
            Preset::Fig8 => RadiusRule::Pixels(5),
            Preset::Fig9 => RadiusRule::Pixels(11),
            Preset::Fig10 => RadiusRule::WidthFraction(16),
            Preset::Fig11 => RadiusRule::HeightFraction(4),
        }
    }

    /// Parameters for an image of the given size.
    pub fn params(self, width: usize, height: usize) -> FilterParams {
        let mut params = FilterParams::new(self.p(), self.radius_rule().resolve(width, height));
        match self {
            Preset::Fig6P1 | Preset::Fig6P01 => params.strategy = Strategy::BruteForce,
            Preset::Fig7 => params.eps = HDR_LOG_EPS,
            Preset::Fig11 => params.iterations = 10,
            _ => {}
        }
        params
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase();
        let alias = match key.as_str() {
            "hdr" => "fig7",
            "flash" | "joint" => "fig9",
            "deconv" => "fig8",
            "segment" => "fig10",
            "colorize" => "fig11",
            other => other,
        };
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == alias)
            .ok_or_else(|| Error::Param(format!("unknown preset {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            p.params(640, 480).validate().unwrap();
        }
        assert_eq!("hdr".parse::<Preset>().unwrap(), Preset::Fig7);
        assert!("fig99".parse::<Preset>().is_err());
    }

    #[test]
    fn relative_radii() {
        assert_eq!(Preset::Fig7.params(900, 600).radius, 100);
        assert_eq!(Preset::Fig10.params(640, 480).radius, 40);
        assert_eq!(Preset::Fig11.params(640, 480).radius, 120);
        assert_eq!(Preset::Fig11.params(4, 2).radius, 1);
    }

    #[test]
    fn preset_values() {
        let p = Preset::Fig2k.params(100, 100);
        assert_eq!((p.p, p.radius), (0.2, 10));
        let p = Preset::Fig8.params(100, 100);
        assert_eq!((p.p, p.radius), (0.5, 5));
        let p = Preset::Fig9.params(100, 100);
        assert_eq!((p.p, p.radius), (0.2, 11));
    }
}
