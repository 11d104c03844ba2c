//! Eigenstate and spectrum diagnostics.

mod gaps;
mod histogram;
mod measures;
mod polarize;
mod reference;
mod rotation;

pub use gaps::{
    collapse_degeneracies, r_statistics, GapStatistics, COLLAPSE_TOLERANCE, MIN_LEVELS,
};
pub use histogram::Histogram;
pub use measures::{abelian_reduce, ipr, ir_diversity, DiagnosticRecord, NORM_TOLERANCE};
pub use polarize::{polarize_degenerate, Polarization};
pub use reference::{
    ks_distance, poisson_mean_r, poisson_r_cdf, poisson_r_pdf, reference_density, surmise_cdf,
    surmise_normalization, surmise_pdf, RDistribution, ReferenceDensity,
};
pub use rotation::{BasisRotation, PreparedRotation};

/// `2/e^{2−γ}`, the large-`D` mean IR diversity of GOE eigenvectors.
pub fn goe_omega_limit() -> f64 {
    2.0 * (EULER_GAMMA - 2.0).exp()
}

/// `e^{γ−1}`, the large-`D` mean IR diversity of GUE eigenvectors.
pub fn gue_omega_limit() -> f64 {
    (EULER_GAMMA - 1.0).exp()
}

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
