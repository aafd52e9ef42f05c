//! Non-blind deconvolution with a non-local sparse gradient prior.
//!
//! Minimizes
//!
//! ```text
//! |k * I - obs|^2 + (lambda / |N|) sum_i sum_{o != 0} |I_i - I_{i+o}|^p
//! ```
//!
//! over periodic images by half-quadratic splitting. Every window offset
//! `o` gets an auxiliary field `v_o ~ I - shift_o(I)`, and the solver
//! alternates a separable scalar problem for the `v_o` with a quadratic
//! problem for `I` that diagonalizes in the Fourier domain, because each
//! offset difference is a convolution.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::{fft, Error, FilterParams, Image, Result};

/// Odd-sized, non-negative point-spread function with taps summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    taps: Vec<f64>,
}

impl Kernel {
    /// Validates a kernel that is already normalized.
    pub fn new(width: usize, height: usize, taps: Vec<f64>) -> Result<Self> {
        let k = Self::unchecked(width, height, taps)?;
        let sum: f64 = k.taps.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Param(format!("kernel taps sum to {sum}, not 1")));
        }
        Ok(k)
    }

    /// Scales the taps to sum to one.
    pub fn normalized(width: usize, height: usize, taps: Vec<f64>) -> Result<Self> {
        let mut k = Self::unchecked(width, height, taps)?;
        let sum: f64 = k.taps.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::Param("kernel taps sum to zero".into()));
        }
        k.taps.iter_mut().for_each(|t| *t /= sum);
        Ok(k)
    }

    fn unchecked(width: usize, height: usize, taps: Vec<f64>) -> Result<Self> {
        if width.is_multiple_of(2) || height.is_multiple_of(2) {
            return Err(Error::Param(format!(
                "kernel must be odd-sized, got {width}x{height}"
            )));
        }
        if taps.len() != width * height {
            return Err(Error::Shape(format!(
                "kernel has {} taps for {width}x{height}",
                taps.len()
            )));
        }
        if taps.iter().any(|&t| !(t >= 0.0) || !t.is_finite()) {
            return Err(Error::Param(
                "kernel taps must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            width,
            height,
            taps,
        })
    }

    pub fn identity() -> Self {
        Self {
            width: 1,
            height: 1,
            taps: vec![1.0],
        }
    }

    /// Sampled isotropic Gaussian on a `size x size` grid.
    pub fn gaussian(size: usize, sigma: f64) -> Result<Self> {
        let c = (size / 2) as f64;
        let taps = (0..size * size)
            .map(|i| {
                let (x, y) = ((i % size) as f64 - c, (i / size) as f64 - c);
                (-(x * x + y * y) / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        Self::normalized(size, size, taps)
    }

    /// Whitespace-separated rows of reals, normalized on load.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::Format(format!("bad kernel tap {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if height == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::Format(
                "kernel rows must be non-empty and equally long".into(),
            ));
        }
        Self::normalized(width, height, rows.concat())
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Transfer function on a `w x h` periodic grid, kernel center at the
    /// origin.
    pub(crate) fn spectrum(&self, w: usize, h: usize) -> Vec<Complex64> {
        let mut buf = vec![0.0; w * h];
        let (cx, cy) = ((self.width / 2) as isize, (self.height / 2) as isize);
        for ky in 0..self.height {
            for kx in 0..self.width {
                let x = (kx as isize - cx).rem_euclid(w as isize) as usize;
                let y = (ky as isize - cy).rem_euclid(h as isize) as usize;
                buf[y * w + x] += self.taps[ky * self.width + kx];
            }
        }
        fft::forward(&buf, w, h)
    }

    /// Periodic convolution `k * img`, evaluated directly.
    pub fn blur(&self, img: &Image) -> Image {
        let (w, h) = (img.width() as isize, img.height() as isize);
        let (cx, cy) = ((self.width / 2) as isize, (self.height / 2) as isize);
        let mut out = img.clone();
        for c in 0..img.channels() {
            let src = img.plane(c);
            let dst = out.plane_mut(c);
            for y in 0..h {
                for x in 0..w {
                    let mut acc = 0.0;
                    for ky in 0..self.height as isize {
                        for kx in 0..self.width as isize {
                            let t = self.taps[(ky * self.width as isize + kx) as usize];
                            let sx = (x - (kx - cx)).rem_euclid(w);
                            let sy = (y - (ky - cy)).rem_euclid(h);
                            acc += t * src[(sy * w + sx) as usize];
                        }
                    }
                    dst[(y * w + x) as usize] = acc;
                }
            }
        }
        out
    }
}

/// Ascending penalty weights for the splitting term.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSchedule(Vec<f64>);

impl BetaSchedule {
    pub fn new(betas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() || betas.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::Param(
                "beta schedule must be non-empty and positive".into(),
            ));
        }
        if betas.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Param("beta schedule must be ascending".into()));
        }
        Ok(Self(betas))
    }

    pub fn betas(&self) -> &[f64] {
        &self.0
    }
}

impl Default for BetaSchedule {
    /// `1, 2, 4, ..., 256`.
    fn default() -> Self {
        Self((0..=8).map(|k| (1u32 << k) as f64).collect())
    }
}

/// Minimizer of `beta (v - d)^2 + |v|^p`.
///
/// Closed forms at `p = 1` (soft threshold) and `p = 2` (scaling); otherwise
/// the stationarity condition is solved by safeguarded Newton, and for
/// `p < 1` the result is compared against `v = 0`.
pub fn v_step(d: f64, beta: f64, p: f64) -> f64 {
    let a = d.abs();
    if a == 0.0 {
        return 0.0;
    }
    let mag = if p == 2.0 {
        beta * a / (beta + 1.0)
    } else if p == 1.0 {
        (a - 0.5 / beta).max(0.0)
    } else {
        let grad = |v: f64| 2.0 * beta * (v - a) + p * v.powf(p - 1.0);
        let curv = |v: f64| 2.0 * beta + p * (p - 1.0) * v.powf(p - 2.0);
        if p < 1.0 {
            // f' bottoms out where f'' = 0
            let turn = (p * (1.0 - p) / (2.0 * beta)).powf(1.0 / (2.0 - p));
            if turn >= a || grad(turn) >= 0.0 {
                0.0
            } else {
                let v = newton_root(grad, curv, turn, a);
                let f = |v: f64| beta * (v - a) * (v - a) + v.powf(p);
                if f(v) < beta * a * a {
                    v
                } else {
                    0.0
                }
            }
        } else {
            newton_root(grad, curv, 0.0, a)
        }
    };
    mag.copysign(d)
}

/// Root of an increasing `g` on `[lo, hi]` with `g(lo) < 0 < g(hi)`.
fn newton_root(g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut x = hi;
    for _ in 0..60 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= 1e-14 * hi.max(1e-300) {
            break;
        }
        let step = x - gx / dg(x);
        if step > lo && step < hi && step.is_finite() {
            if (step - x).abs() <= 1e-15 * x.abs() {
                return step;
            }
            x = step;
        } else {
            x = 0.5 * (lo + hi);
        }
    }
    x
}

/// Deconvolves `obs` (periodic boundary) with a sparse non-local gradient
/// prior of exponent `params.p` over the `(2r + 1)^2` window.
///
/// `lambda = 0` drops the prior and returns a lightly regularized inverse
/// filter of `k`.
pub fn deconvolve_snf(
    obs: &Image,
    k: &Kernel,
    lambda: f64,
    params: &FilterParams,
    betas: &BetaSchedule,
) -> Result<Image> {
    params.validate()?;
    let sum: f64 = k.taps.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Param(format!("kernel taps sum to {sum}, not 1")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Param(format!(
            "lambda must be non-negative, got {lambda}"
        )));
    }
    let (w, h) = (obs.width(), obs.height());
    let k_hat = k.spectrum(w, h);
    let kk: Vec<f64> = k_hat.iter().map(|c| c.norm_sqr()).collect();

    let r = params.radius as isize;
    let offsets: Vec<(isize, isize)> = (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
        .filter(|&o| o != (0, 0))
        .collect();
    let prior_weight = lambda / (offsets.len() + 1) as f64;
    let mut diff_power = vec![0.0; w * h];
    if lambda > 0.0 {
        for &(dx, dy) in &offsets {
            for (acc, v) in diff_power
                .iter_mut()
                .zip(fft::difference_power(w, h, dx, dy))
            {
                *acc += v;
            }
        }
    }

    let mut out = obs.clone();
    for c in 0..obs.channels() {
        let y_hat = fft::forward(obs.plane(c), w, h);
        let kty: Vec<Complex64> = k_hat
            .iter()
            .zip(&y_hat)
            .map(|(k, y)| k.conj() * y)
            .collect();
        if lambda == 0.0 {
            let spec = kty.iter().zip(&kk).map(|(n, &d)| n / (d + 1e-8)).collect();
            out.plane_mut(c)
                .copy_from_slice(&fft::inverse_real(spec, w, h));
            continue;
        }
        let mut current = obs.plane(c).to_vec();
        let mut v = vec![0.0; w * h];
        for &beta in betas.betas() {
            let mut rhs = vec![0.0; w * h];
            for &(dx, dy) in &offsets {
                let cur = &current;
                v.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
                    let yy = (y as isize + dy).rem_euclid(h as isize) as usize;
                    for (x, vi) in row.iter_mut().enumerate() {
                        let xx = (x as isize + dx).rem_euclid(w as isize) as usize;
                        let d = cur[y * w + x] - cur[yy * w + xx];
                        *vi = v_step(d, beta, params.p);
                    }
                });
                // rhs += D_o^T v with (D_o^T v)_m = v_m - v_{m - o}
                for y in 0..h {
                    let yy = (y as isize + dy).rem_euclid(h as isize) as usize;
                    for x in 0..w {
                        let xx = (x as isize + dx).rem_euclid(w as isize) as usize;
                        let vi = v[y * w + x];
                        rhs[y * w + x] += vi;
                        rhs[yy * w + xx] -= vi;
                    }
                }
            }
            let bw = beta * prior_weight;
            let rhs_hat = fft::forward(&rhs, w, h);
            let spec = (0..w * h)
                .map(|i| (kty[i] + bw * rhs_hat[i]) / (kk[i] + bw * diff_power[i]))
                .collect();
            current = fft::inverse_real(spec, w, h);
        }
        out.plane_mut(c).copy_from_slice(&current);
    }
    Ok(out)
}

/// Blends the borders of `obs` toward its blurred version so the periodic
/// model sees no seam. The ramp spans the kernel's extent.
pub fn edge_taper(obs: &Image, k: &Kernel) -> Image {
    let blurred = k.blur(obs);
    let (w, h) = (obs.width(), obs.height());
    let ramp = |i: usize, n: usize, span: usize| {
        let span = span.max(1) as f64;
        let dist = i.min(n - 1 - i) as f64;
        let t = (dist / span).min(1.0);
        0.5 - 0.5 * (std::f64::consts::PI * t).cos()
    };
    let mut out = obs.clone();
    for c in 0..obs.channels() {
        let (src, soft) = (obs.plane(c), blurred.plane(c));
        let dst = out.plane_mut(c);
        for y in 0..h {
            let ay = ramp(y, h, k.height);
            for x in 0..w {
                let a = ay * ramp(x, w, k.width);
                let i = y * w + x;
                dst[i] = a * src[i] + (1.0 - a) * soft[i];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(w: usize, h: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_fn(w, h, |_, _| rng.random::<f64>()).unwrap()
    }

    fn brute_min(d: f64, beta: f64, p: f64) -> f64 {
        // dense scan of [-|d|, |d|] plus zero
        let a = d.abs();
        let f = |v: f64| beta * (v - d).powi(2) + v.abs().powf(p);
        let mut best = (f(0.0), 0.0);
        for k in 0..=200_000 {
            let v = -a + 2.0 * a * k as f64 / 200_000.0;
            if f(v) < best.0 {
                best = (f(v), v);
            }
        }
        best.1
    }

    #[test]
    fn v_step_matches_dense_scan() {
        for p in [0.3, 0.5, 0.8, 1.0, 1.3, 2.0] {
            for beta in [1.0, 8.0, 256.0] {
                for d in [-0.9, -0.2, -0.03, 0.01, 0.05, 0.4, 1.0] {
                    let v = v_step(d, beta, p);
                    let f = |v: f64| beta * (v - d).powi(2) + v.abs().powf(p);
                    let b = brute_min(d, beta, p);
                    assert!(f(v) <= f(b) + 1e-9, "p={p} beta={beta} d={d}: {v} vs {b}");
                }
            }
        }
    }

    #[test]
    fn v_step_closed_forms() {
        assert!((v_step(0.5, 2.0, 1.0) - 0.25).abs() < 1e-15);
        assert_eq!(v_step(0.1, 2.0, 1.0), 0.0);
        assert!((v_step(-0.3, 3.0, 2.0) + 0.225).abs() < 1e-15);
        assert_eq!(v_step(0.0, 1.0, 0.5), 0.0);
    }

    #[test]
    fn kernel_validation() {
        assert!(Kernel::new(3, 3, vec![0.1; 9]).is_err());
        assert!(Kernel::normalized(2, 2, vec![0.25; 4]).is_err());
        assert!(Kernel::normalized(3, 1, vec![1.0, -1.0, 1.0]).is_err());
        let k = Kernel::parse("1 2 1\n2 4 2\n1 2 1\n").unwrap();
        assert_eq!((k.width(), k.height()), (3, 3));
        assert!((k.taps()[4] - 0.25).abs() < 1e-15);
        assert!(Kernel::parse("1 2\n3\n").is_err());
        assert!(Kernel::parse("1 x 1").is_err());
    }

    #[test]
    fn spectrum_matches_direct_blur() {
        let img = random(12, 10, 1);
        let k = Kernel::parse("0 1 0\n1 3 2\n0 1 0").unwrap();
        let direct = k.blur(&img);
        let k_hat = k.spectrum(12, 10);
        let i_hat = fft::forward(img.data(), 12, 10);
        let prod = k_hat.iter().zip(&i_hat).map(|(a, b)| a * b).collect();
        let via_fft = fft::inverse_real(prod, 12, 10);
        for (a, b) in direct.data().iter().zip(&via_fft) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_kernel_without_prior_returns_observation() {
        let img = random(16, 16, 2);
        let params = FilterParams::new(0.5, 2);
        let out = deconvolve_snf(
            &img,
            &Kernel::identity(),
            0.0,
            &params,
            &BetaSchedule::default(),
        )
        .unwrap();
        assert!(out.max_abs_diff(&img) < 1e-6);
        let out = deconvolve_snf(
            &img,
            &Kernel::identity(),
            1e-9,
            &params,
            &BetaSchedule::default(),
        )
        .unwrap();
        assert!(out.max_abs_diff(&img) < 1e-6);
    }

    #[test]
    fn prior_free_inverse_undoes_mild_blur() {
        let img = random(32, 32, 3);
        let k = Kernel::gaussian(3, 0.5).unwrap();
        let blurred = k.blur(&img);
        let out = deconvolve_snf(
            &blurred,
            &k,
            0.0,
            &FilterParams::new(1.0, 1),
            &BetaSchedule::default(),
        )
        .unwrap();
        assert!(out.max_abs_diff(&img) < 1e-4);
    }

    #[test]
    fn constant_image_is_a_fixed_point() {
        let img = Image::filled(16, 12, 1, 0.3).unwrap();
        let k = Kernel::gaussian(5, 1.0).unwrap();
        let out = deconvolve_snf(
            &img,
            &k,
            0.05,
            &FilterParams::new(0.5, 2),
            &BetaSchedule::default(),
        )
        .unwrap();
        assert!(out.max_abs_diff(&img) < 1e-9);
    }

    #[test]
    fn schedule_validation() {
        assert!(BetaSchedule::new(vec![]).is_err());
        assert!(BetaSchedule::new(vec![2.0, 1.0]).is_err());
        assert_eq!(BetaSchedule::default().betas().len(), 9);
        assert_eq!(BetaSchedule::default().betas()[8], 256.0);
    }

    #[test]
    fn taper_keeps_interior() {
        let img = random(20, 20, 4);
        let k = Kernel::gaussian(5, 1.0).unwrap();
        let t = edge_taper(&img, &k);
        for y in 5..15 {
            for x in 5..15 {
                assert_eq!(t.get(x, y, 0), img.get(x, y, 0));
            }
        }
        let b = k.blur(&img);
        assert_eq!(t.get(0, 7, 0), b.get(0, 7, 0));
    }
}
