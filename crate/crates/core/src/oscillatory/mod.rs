//! Oscillatory integrals: quadrature oracle, stationary-phase expansions and their envelopes.

pub mod cheb;
pub mod mellin;
pub mod partition;
pub mod phase;
pub mod quad;
pub mod sp;
pub mod two_d;
pub mod weight;

pub use phase::{
    bky_negligible, derivative_test_bound, huxley_boundary, huxley_stationary, quad_osc_1d, stationary_point, PhaseSpec,
    BKY_EXPONENT, NEGLIGIBLE,
};
pub use quad::{integrate, integrate_2d, OscResult, QuadOptions};
pub use weight::{u0, Profile, Shape, SmoothWeight};
pub use mellin::{fm_stationary_point, fourier_mellin_exact, fourier_mellin_main, FM_TOL};
pub use partition::{build_partition, partition_sum, PartitionPiece};
pub use sp::{b_error_bound, i1_main, istarstar, istarstar_batch, SpParams};
pub use two_d::{curvature, mixed_variation, quad_osc_2d, second_deriv_bound_2d, Curvature, Phase2, Rect};
