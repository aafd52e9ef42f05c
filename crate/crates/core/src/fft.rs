//! 2D FFT over row-major complex buffers (periodic boundary).

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

pub(crate) fn fft2(data: &mut [Complex64], w: usize, h: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (row, col) = if inverse {
        (planner.plan_fft_inverse(w), planner.plan_fft_inverse(h))
    } else {
        (planner.plan_fft_forward(w), planner.plan_fft_forward(h))
    };
    row.process(data);
    let mut column = vec![Complex64::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            column[y] = data[y * w + x];
        }
        col.process(&mut column);
        for y in 0..h {
            data[y * w + x] = column[y];
        }
    }
    if inverse {
        let s = 1.0 / (w * h) as f64;
        data.iter_mut().for_each(|v| *v *= s);
    }
}

pub(crate) fn forward(real: &[f64], w: usize, h: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = real.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut buf, w, h, false);
    buf
}

pub(crate) fn inverse_real(mut spec: Vec<Complex64>, w: usize, h: usize) -> Vec<f64> {
    fft2(&mut spec, w, h, true);
    spec.into_iter().map(|c| c.re).collect()
}

/// Frequency response of the periodic shift-difference `I - shift(I)` by
/// `(dx, dy)`, squared: `2 - 2 cos(w . o)`.
pub(crate) fn difference_power(w: usize, h: usize, dx: isize, dy: isize) -> Vec<f64> {
    let mut out = Vec::with_capacity(w * h);
    for ky in 0..h {
        for kx in 0..w {
            let phase = 2.0
                * std::f64::consts::PI
                * (kx as f64 * dx as f64 / w as f64 + ky as f64 * dy as f64 / h as f64);
            out.push(2.0 - 2.0 * phase.cos());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let (w, h) = (6, 5);
        let x: Vec<f64> = (0..w * h).map(|i| ((i * 7) % 11) as f64 * 0.1).collect();
        let back = inverse_real(forward(&x, w, h), w, h);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dc_term_is_sum() {
        let x = vec![0.5; 12];
        let f = forward(&x, 4, 3);
        assert!((f[0].re - 6.0).abs() < 1e-12);
        assert!(f[1..].iter().all(|c| c.norm() < 1e-12));
    }
}
