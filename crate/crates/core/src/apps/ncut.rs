//! Recursive two-way normalized cuts where every affinity product is a
//! joint filtering pass.

use super::affinity::Affinity;
use crate::{Error, FilterParams, Image, Result};

const THRESHOLDS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    count: u32,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn segment_count(&self) -> u32 {
        self.count
    }

    /// Labels spread evenly over `[0, 1]` for saving.
    pub fn to_image(&self) -> Image {
        let scale = if self.count > 1 {
            1.0 / (self.count - 1) as f64
        } else {
            0.0
        };
        Image::gray(
            self.width,
            self.height,
            self.labels.iter().map(|&l| l as f64 * scale).collect(),
        )
        .expect("label map has the image's dimensions")
    }
}

fn start_vector(n: usize) -> Vec<f64> {
    // fixed low-discrepancy sequence, no symmetry with image structure
    (0..n)
        .map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5)
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Degree vector of the affinity restricted to `members`.
fn restricted_degree(aff: &Affinity, members: &[bool]) -> Result<Vec<f64>> {
    let ind: Vec<f64> = members.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
    restricted_apply(aff, members, &ind)
}

fn restricted_apply(aff: &Affinity, members: &[bool], x: &[f64]) -> Result<Vec<f64>> {
    let masked: Vec<f64> = x
        .iter()
        .zip(members)
        .map(|(&v, &m)| if m { v } else { 0.0 })
        .collect();
    let mut y = aff.apply(&masked)?;
    y.iter_mut().zip(members).for_each(|(v, &m)| {
        if !m {
            *v = 0.0
        }
    });
    Ok(y)
}

/// Second eigenvector of `D^-1/2 W D^-1/2` on the pixels in `members`
/// (zero elsewhere), by power iteration on `(I + D^-1/2 W D^-1/2) / 2`
/// with the principal eigenvector `D^1/2 1` projected out.
pub fn fiedler_vector(aff: &Affinity, members: &[bool], iters: usize) -> Result<Vec<f64>> {
    if members.len() != aff.len() {
        return Err(Error::Shape(
            "membership mask size differs from guide".into(),
        ));
    }
    let degree = restricted_degree(aff, members)?;
    let inv_sqrt: Vec<f64> = degree
        .iter()
        .zip(members)
        .map(|(&d, &m)| if m { 1.0 / d.sqrt() } else { 0.0 })
        .collect();
    let mut principal: Vec<f64> = degree
        .iter()
        .zip(members)
        .map(|(&d, &m)| if m { d.sqrt() } else { 0.0 })
        .collect();
    normalize(&mut principal);
    let deflate = |v: &mut Vec<f64>| {
        let c = dot(v, &principal);
        v.iter_mut().zip(&principal).for_each(|(x, p)| *x -= c * p);
    };

    let mut u: Vec<f64> = start_vector(aff.len())
        .into_iter()
        .zip(members)
        .map(|(v, &m)| if m { v } else { 0.0 })
        .collect();
    deflate(&mut u);
    normalize(&mut u);
    for _ in 0..iters {
        let scaled: Vec<f64> = u.iter().zip(&inv_sqrt).map(|(a, b)| a * b).collect();
        let wx = restricted_apply(aff, members, &scaled)?;
        let mut next: Vec<f64> = (0..u.len())
            .map(|i| 0.5 * (u[i] + inv_sqrt[i] * wx[i]))
            .collect();
        deflate(&mut next);
        normalize(&mut next);
        u = next;
    }
    Ok(u)
}

/// Best of the candidate thresholds on `embedding`; `None` when the
/// embedding is constant over the segment.
fn best_split(
    aff: &Affinity,
    members: &[bool],
    embedding: &[f64],
    degree: &[f64],
) -> Result<Option<Vec<bool>>> {
    let vals = embedding
        .iter()
        .zip(members)
        .filter(|(_, &m)| m)
        .map(|(&v, _)| v);
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !(hi > lo) {
        return Ok(None);
    }
    let total: f64 = degree
        .iter()
        .zip(members)
        .filter(|(_, &m)| m)
        .map(|(d, _)| d)
        .sum();
    let mut best: Option<(f64, Vec<bool>)> = None;
    for k in 0..THRESHOLDS {
        let t = lo + (hi - lo) * (k + 1) as f64 / (THRESHOLDS + 1) as f64;
        let side: Vec<bool> = embedding
            .iter()
            .zip(members)
            .map(|(&v, &m)| m && v > t)
            .collect();
        let ind: Vec<f64> = side.iter().map(|&s| if s { 1.0 } else { 0.0 }).collect();
        let w_side = restricted_apply(aff, members, &ind)?;
        let assoc_a: f64 = degree
            .iter()
            .zip(&side)
            .filter(|(_, &s)| s)
            .map(|(d, _)| d)
            .sum();
        let within_a: f64 = w_side
            .iter()
            .zip(&side)
            .filter(|(_, &s)| s)
            .map(|(w, _)| w)
            .sum();
        let assoc_b = total - assoc_a;
        if assoc_a <= 0.0 || assoc_b <= 0.0 {
            continue;
        }
        let cut = (assoc_a - within_a).max(0.0);
        let ncut = cut / assoc_a + cut / assoc_b;
        if best.as_ref().is_none_or(|(b, _)| ncut < *b) {
            best = Some((ncut, side));
        }
    }
    Ok(best.map(|(_, s)| s))
}

/// Segments `img` into `segments` regions by recursively bisecting the
/// largest region along its normalized-cut embedding.
pub fn ncut_segment(
    img: &Image,
    segments: usize,
    params: &FilterParams,
    power_iters: usize,
) -> Result<LabelMap> {
    let n = img.pixel_count();
    if segments < 2 {
        return Err(Error::Param("need at least 2 segments".into()));
    }
    if segments > n {
        return Err(Error::Param(format!(
            "{segments} segments exceed {n} pixels"
        )));
    }
    let aff = Affinity::new(img, params)?;
    let mut labels = vec![0u32; n];
    let mut count = 1u32;
    while (count as usize) < segments {
        let mut sizes = vec![0usize; count as usize];
        labels.iter().for_each(|&l| sizes[l as usize] += 1);
        let target = (0..count)
            .max_by_key(|&l| (sizes[l as usize], std::cmp::Reverse(l)))
            .unwrap();
        let members: Vec<bool> = labels.iter().map(|&l| l == target).collect();

        let u = fiedler_vector(&aff, &members, power_iters)?;
        let degree = restricted_degree(&aff, &members)?;
        let embedding: Vec<f64> = u
            .iter()
            .zip(&degree)
            .zip(&members)
            .map(|((&u, &d), &m)| if m { u / d.sqrt() } else { 0.0 })
            .collect();
        let side = match best_split(&aff, &members, &embedding, &degree)? {
            Some(s) => s,
            None => {
                // featureless region: halve it in scan order
                let idx: Vec<usize> = (0..n).filter(|&i| members[i]).collect();
                let mut s = vec![false; n];
                idx[idx.len() / 2..].iter().for_each(|&i| s[i] = true);
                s
            }
        };
        for (l, s) in labels.iter_mut().zip(&side) {
            if *s {
                *l = count;
            }
        }
        count += 1;
    }
    Ok(LabelMap {
        width: img.width(),
        height: img.height(),
        labels,
        count,
    })
}
