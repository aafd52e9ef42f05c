use crate::snf::{grid_covering, snf_bruteforce, snf_irls_quantized};
use crate::{FilterParams, Image, Result};

/// Two-stage outlier-tolerant filter.
///
/// Stage one runs the brute-force search, which ignores impulse outliers
/// but leaves a quantized look. Stage two averages the original pixels
/// with weights taken from the stage-one result as guide.
pub fn outlier_denoise(img: &Image, params: &FilterParams) -> Result<Image> {
    params.validate()?;
    let mut out = img.clone();
    for c in 0..img.channels() {
        let channel = img.channel(c);
        let grid = grid_covering(channel.data(), params.bins)?;
        let rough = snf_bruteforce(&channel, params, &grid)?;
        let smooth = snf_irls_quantized(&channel, Some(&rough), params)?;
        out.plane_mut(c).copy_from_slice(smooth.data());
    }
    Ok(out)
}
