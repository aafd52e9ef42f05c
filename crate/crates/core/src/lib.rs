//! Sparse norm filtering.
//!
//! Each output pixel minimizes `sum_j |v - I_j|^p` over a square window.
//! `p = 2` gives the box filter, `p = 1` the median filter and `p -> 0` a
//! dominant-mode filter; in between the filter smooths texture while
//! keeping strong edges intact without halos.
//!
//! Two solvers are provided, both running in `O(B * N)` through integral
//! images:
//!
//! - a reweighted average ([`snf::snf_irls_quantized`]) where the center
//!   intensity in the weight term is quantized into `B` bins, and
//! - a brute-force search ([`snf::snf_bruteforce`]) over `B` candidate
//!   output levels, which tolerates impulse noise.
//!
//! [`oracles`] holds slow direct implementations used to validate the fast
//! paths; [`apps`] builds detail enhancement, denoising, tone mapping,
//! deconvolution, joint filtering, colorization, seamless cloning and
//! normalized-cut segmentation on top of the filter.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod apps;
pub mod boxfilter;
mod error;
mod fft;
pub mod imgcore;
pub mod oracles;
pub mod params;
pub mod presets;
pub mod snf;

pub use error::{Error, Result};
pub use imgcore::{DynamicRange, Image, QuantGrid};
pub use params::{ColorMode, FilterParams, Strategy};
