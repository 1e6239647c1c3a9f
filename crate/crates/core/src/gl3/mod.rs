//! GL(3) archimedean data and summation formulas.

pub mod afe;
pub mod coeffs;
pub mod gamma_factor;
pub mod hankel;
pub mod params;
pub mod voronoi;

pub use afe::{afe_value, AfeConfig, AfeKernel, AfeValue, GFactor};
pub use coeffs::{d3_full_table, d3_table, load_coefficients, parse_coefficients, ramanujan_avg, CoefficientTable};
pub use gamma_factor::{gamma_ell, gamma_pm, stirling_phase, stirling_phi, Sign};
pub use hankel::{h_pm, HankelKernel};
pub use params::{langlands, GL3Params};
pub use voronoi::{voronoi_check, voronoi_dual_sum, voronoi_lhs, DualSum, VoronoiReport};
