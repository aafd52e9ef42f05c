//! Applications built from the filter: detail manipulation, outlier
//! removal, tone mapping, deconvolution, joint filtering, colorization,
//! seamless cloning and normalized-cut segmentation.

mod affinity;
mod clone;
mod colorize;
mod deconv;
mod denoise;
mod detail;
mod hdr;
mod joint;
mod ncut;

pub use affinity::{affinity_apply, Affinity};
pub use clone::{clone_residual, seamless_clone, CloneTask};
pub use colorize::{colorize, StrokeMap};
pub use deconv::{deconvolve_snf, edge_taper, v_step, BetaSchedule, Kernel};
pub use denoise::outlier_denoise;
pub use detail::{base_detail, detail_boost, BaseDetail};
pub use hdr::{hdr_compress, DEFAULT_TARGET_CONTRAST};
pub use joint::joint_filter;
pub use ncut::{fiedler_vector, ncut_segment, LabelMap};
