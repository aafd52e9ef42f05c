//! Seamless cloning with non-local gradients.
//!
//! Inside the fill-in region `Omega` the result satisfies
//!
//! ```text
//! |N_i| I_i - sum_{j in N_i} I_j = |N_i| J_i - sum_{j in N_i} J_j
//! ```
//!
//! with `J` the displaced source and pixels outside `Omega` fixed to the
//! target. Both window sums are box filters, so a Jacobi sweep costs
//! `O(N)` for any radius.

use crate::boxfilter::{box_sum_plane, window_counts};
use crate::{Error, Image, Result};

#[derive(Debug, Clone)]
pub struct CloneTask {
    source: Image,
    target: Image,
    mask: Vec<bool>,
    offset: (isize, isize),
}

impl CloneTask {
    /// `mask` marks `Omega` in target coordinates; source pixel `s` lands
    /// on target pixel `s + offset`.
    pub fn new(
        source: Image,
        target: Image,
        mask: Vec<bool>,
        offset: (isize, isize),
    ) -> Result<Self> {
        if source.channels() != target.channels() {
            return Err(Error::Shape(
                "source and target channel counts differ".into(),
            ));
        }
        if mask.len() != target.pixel_count() {
            return Err(Error::Shape("mask size differs from target".into()));
        }
        let (w, h) = (target.width(), target.height());
        let mut any = false;
        for (i, &m) in mask.iter().enumerate() {
            if m {
                any = true;
                let (x, y) = (i % w, i / w);
                if x == 0 || y == 0 || x == w - 1 || y == h - 1 {
                    return Err(Error::Param(
                        "fill-in region touches the target border".into(),
                    ));
                }
            }
        }
        if !any {
            return Err(Error::Param("fill-in region is empty".into()));
        }
        Ok(Self {
            source,
            target,
            mask,
            offset,
        })
    }

    /// Mask from a binary image: non-zero pixels are in `Omega`.
    pub fn mask_from_image(mask: &Image) -> Vec<bool> {
        mask.plane(0).iter().map(|&v| v > 0.0).collect()
    }

    pub fn target(&self) -> &Image {
        &self.target
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Source resampled into target coordinates, after checking that it
    /// covers every window touching `Omega`.
    fn guidance(&self, r: usize) -> Result<Image> {
        let (w, h) = (self.target.width(), self.target.height());
        let (sw, sh) = (self.source.width() as isize, self.source.height() as isize);
        let src_at = |x: usize, y: usize| {
            let sx = x as isize - self.offset.0;
            let sy = y as isize - self.offset.1;
            (sx >= 0 && sy >= 0 && sx < sw && sy < sh).then_some((sx as usize, sy as usize))
        };
        for (i, _) in self.mask.iter().enumerate().filter(|(_, &m)| m) {
            let (x, y) = (i % w, i / w);
            for yy in y.saturating_sub(r)..(y + r + 1).min(h) {
                for xx in x.saturating_sub(r)..(x + r + 1).min(w) {
                    if src_at(xx, yy).is_none() {
                        return Err(Error::Param(format!(
                            "source does not cover the window around target pixel ({x}, {y})"
                        )));
                    }
                }
            }
        }
        let mut j = self.target.clone();
        for c in 0..j.channels() {
            for y in 0..h {
                for x in 0..w {
                    let v = src_at(x, y).map_or(0.0, |(sx, sy)| self.source.get(sx, sy, c));
                    j.set(x, y, c, v);
                }
            }
        }
        Ok(j)
    }
}

/// `(|N_i| J_i - sum J_j)` per channel plus the window populations.
fn right_hand_side(task: &CloneTask, r: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>, Image)> {
    let j = task.guidance(r)?;
    let (w, h) = (j.width(), j.height());
    let counts = window_counts(w, h, r);
    let rhs = (0..j.channels())
        .map(|c| {
            let sums = box_sum_plane(j.plane(c), w, h, r);
            j.plane(c)
                .iter()
                .zip(&sums)
                .zip(&counts)
                .map(|((&v, &s), &n)| n * v - s)
                .collect()
        })
        .collect();
    Ok((rhs, counts, j))
}

/// `iters` Jacobi sweeps starting from the pasted source.
pub fn seamless_clone(task: &CloneTask, r: usize, iters: usize) -> Result<Image> {
    if r < 1 {
        return Err(Error::Param("radius must be at least 1".into()));
    }
    let (rhs, counts, j) = right_hand_side(task, r)?;
    let (w, h) = (j.width(), j.height());
    let mut img = task.target.clone();
    for (c, rhs_c) in rhs.iter().enumerate() {
        let plane = img.plane_mut(c);
        for (i, &m) in task.mask.iter().enumerate() {
            if m {
                plane[i] = j.plane(c)[i];
            }
        }
        for _ in 0..iters {
            let sums = box_sum_plane(plane, w, h, r);
            for (i, &m) in task.mask.iter().enumerate() {
                if m {
                    plane[i] = (sums[i] + rhs_c[i]) / counts[i];
                }
            }
        }
    }
    Ok(img)
}

/// `||LHS - RHS||_2 / ||RHS||_2` of the cloning system over `Omega`, all
/// channels pooled.
pub fn clone_residual(task: &CloneTask, r: usize, img: &Image) -> Result<f64> {
    let (rhs, counts, _) = right_hand_side(task, r)?;
    let (w, h) = (img.width(), img.height());
    let (mut num, mut den) = (0.0, 0.0);
    for (c, rhs_c) in rhs.iter().enumerate() {
        let sums = box_sum_plane(img.plane(c), w, h, r);
        for (i, &m) in task.mask.iter().enumerate() {
            if m {
                let lhs = counts[i] * img.plane(c)[i] - sums[i];
                num += (lhs - rhs_c[i]).powi(2);
                den += rhs_c[i].powi(2);
            }
        }
    }
    Ok(if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    })
}
