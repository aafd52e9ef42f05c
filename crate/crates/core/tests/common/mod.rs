//! Shared generators and dense reference computations for the test targets.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_norm::snf::snf_weight;
use sparse_norm::Image;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Image {
    Image::from_fn(w, h, |_, _| rng.random::<f64>()).unwrap()
}

/// Uniform random 8-bit levels `k / 255`.
pub fn random_8bit(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Image {
    Image::from_fn(w, h, |_, _| rng.random_range(0..=255u32) as f64 / 255.0).unwrap()
}

/// Smooth shading plus 8-bit noise, quantized to 8-bit levels.
pub fn textured_8bit(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Image {
    let (fx, fy) = (rng.random_range(0.05..0.2), rng.random_range(0.05..0.2));
    Image::from_fn(w, h, |x, y| {
        let base = 0.5 + 0.3 * (x as f64 * fx).sin() * (y as f64 * fy).cos();
        let v = base + rng.random_range(-0.08..0.08);
        (v.clamp(0.0, 1.0) * 255.0).round() / 255.0
    })
    .unwrap()
}

pub fn window(
    x: usize,
    y: usize,
    w: usize,
    h: usize,
    r: usize,
) -> impl Iterator<Item = (usize, usize)> {
    let (x0, x1) = (x.saturating_sub(r), (x + r + 1).min(w));
    let (y0, y1) = (y.saturating_sub(r), (y + r + 1).min(h));
    (y0..y1).flat_map(move |yy| (x0..x1).map(move |xx| (xx, yy)))
}

/// `sum_j ((v - I_j)^2 + eps^2)^(p/2)` over the clipped window.
pub fn smoothed_energy(img: &Image, x: usize, y: usize, v: f64, p: f64, eps: f64, r: usize) -> f64 {
    window(x, y, img.width(), img.height(), r)
        .map(|(xx, yy)| ((v - img.get(xx, yy, 0)).powi(2) + eps * eps).powf(p / 2.0))
        .sum()
}

/// Explicit `W_ij = w(G_i - G_j)` for `j` in the window of `i`.
pub fn dense_affinity(guide: &Image, p: f64, eps: f64, r: usize) -> DMatrix<f64> {
    let (w, h) = (guide.width(), guide.height());
    let n = w * h;
    let mut m = DMatrix::zeros(n, n);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            for (xx, yy) in window(x, y, w, h, r) {
                m[(i, yy * w + xx)] = snf_weight(guide.get(x, y, 0) - guide.get(xx, yy, 0), p, eps);
            }
        }
    }
    m
}

/// Solves the cloning system on `omega` exactly; `j` is the guidance image
/// in target coordinates.
pub fn dense_clone_solve(target: &Image, j: &Image, omega: &[bool], r: usize) -> Image {
    let (w, h) = (target.width(), target.height());
    let idx: Vec<usize> = (0..w * h).filter(|&i| omega[i]).collect();
    let mut slot = vec![usize::MAX; w * h];
    for (k, &i) in idx.iter().enumerate() {
        slot[i] = k;
    }
    let mut out = target.clone();
    for c in 0..target.channels() {
        let mut a = DMatrix::zeros(idx.len(), idx.len());
        let mut b = DVector::zeros(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            let (x, y) = (i % w, i / w);
            let nbrs: Vec<usize> = window(x, y, w, h, r).map(|(xx, yy)| yy * w + xx).collect();
            let n = nbrs.len() as f64;
            let mut rhs = n * j.plane(c)[i];
            a[(k, k)] += n;
            for &q in &nbrs {
                rhs -= j.plane(c)[q];
                if omega[q] {
                    a[(k, slot[q])] -= 1.0;
                } else {
                    rhs += target.plane(c)[q];
                }
            }
            b[k] = rhs;
        }
        let sol = a.lu().solve(&b).expect("cloning system is nonsingular");
        for (k, &i) in idx.iter().enumerate() {
            out.plane_mut(c)[i] = sol[k];
        }
    }
    out
}

pub fn rmse(a: &Image, b: &Image) -> f64 {
    let s: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).powi(2))
        .sum();
    (s / a.data().len() as f64).sqrt()
}

/// Coefficient of determination of the least-squares line through `(x, y)`.
pub fn r_squared(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    sxy * sxy / (sxx * syy)
}

pub fn disk_mask(w: usize, h: usize, cx: f64, cy: f64, radius: f64) -> Vec<bool> {
    (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            (x - cx).powi(2) + (y - cy).powi(2) <= radius * radius
        })
        .collect()
}
