/// Reweighting function `w(d) = (d^2 + eps^2)^((p - 2) / 2)`.
///
/// The smoothed form keeps the weight finite at `d = 0`; for `p <= 2` it is
/// positive and non-increasing in `|d|`, and identically 1 at `p = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFn {
    p: f64,
    eps2: f64,
    half_exp: f64,
}

impl WeightFn {
    pub fn new(p: f64, eps: f64) -> Self {
        Self {
            p,
            eps2: eps * eps,
            half_exp: (p - 2.0) / 2.0,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn eval(&self, diff: f64) -> f64 {
        if self.half_exp == 0.0 {
            return 1.0;
        }
        (diff * diff + self.eps2).powf(self.half_exp)
    }
}

pub fn snf_weight(diff: f64, p: f64, eps: f64) -> f64 {
    WeightFn::new(p, eps).eval(diff)
}
