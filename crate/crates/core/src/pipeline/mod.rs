//! The smoothed sum `S(N) = Σ λ(1,n) n^{-it} V(n/N)` and the stages of its delta-method
//! treatment: the circle-method split `S⁺ + S⁻`, Poisson summation in the `r`-variable,
//! the assembled block sums `S(N, C)`, the `𝔎` double integral and bound scans.

pub mod assemble;
pub mod circle_split;
pub mod direct;
pub mod kintegral;
pub mod poisson;
pub mod scan;

pub use assemble::{s1_term_adaptive, snc_assemble, SncReport, SncTerm};
pub use circle_split::{s_pm_circle, s_pm_circle_with, CircleSplit, XRule};
pub use direct::{s_direct, s_direct_abs, summation_range};
pub use kintegral::{k_integral_check, k_integral_windows, w_jqr, window_weight, KCheck, KPhase, KTuple};
pub use poisson::{poisson_r_check, DualTerm, PoissonReport};
pub use scan::{bound_scan, ScanMetadata, ScanReport, ScanRow, SCAN_SCHEMA_VERSION};

use crate::error::{Error, Result};
use serde::Serialize;

pub const DEFAULT_EPS: f64 = 0.05;
/// Desk-scale limits for the full identity checks.
pub const DESK_N_MAX: f64 = 2000.0;
pub const DESK_Q_MAX: i64 = 8;
pub const DESK_T_MAX: f64 = 50.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineConfig {
    /// Block length `N`.
    pub n: f64,
    pub t: f64,
    /// Farey parameter `Q`.
    pub q: i64,
    pub eps: f64,
    /// `|r| ≤ r_max_factor · q t^{1+ε}/N` in the dual `r`-sum.
    pub r_max_factor: f64,
    /// `n₁²n₂ ≤ n_max_factor · N² t^ε / Q³` in the dual `n`-sum.
    pub n_max_factor: f64,
    /// Relative quadrature tolerance.
    pub tol: f64,
    /// Cap on projected quadrature nodes.
    pub node_cap: usize,
}

impl PipelineConfig {
    pub fn new(n: f64, t: f64, q: i64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("t = {t} must be positive")));
        }
        if !(n >= 1.0) || !n.is_finite() {
            return Err(Error::InvalidArgument(format!("N = {n} must be at least 1")));
        }
        if q < 1 {
            return Err(Error::InvalidArgument(format!("Q = {q} must be positive")));
        }
        Ok(PipelineConfig { n, t, q, eps: DEFAULT_EPS, r_max_factor: 1.0, n_max_factor: 1.0, tol: 1e-13, node_cap: 20_000_000 })
    }

    pub fn t_eps(&self) -> f64 {
        self.t.powf(self.eps)
    }

    /// The open window `(N / t^{1-ε}, √N)` for `Q`.
    pub fn q_window(&self) -> (f64, f64) {
        (self.n / self.t.powf(1.0 - self.eps), self.n.sqrt())
    }

    pub fn in_window(&self) -> bool {
        let (lo, hi) = self.q_window();
        lo < self.q as f64 && (self.q as f64) < hi
    }

    pub fn check_window(&self) -> Result<()> {
        let (lo, hi) = self.q_window();
        if !self.in_window() {
            return Err(Error::WindowViolation(format!("Q = {} outside ({lo}, {hi})", self.q)));
        }
        Ok(())
    }

    pub fn check_desk(&self) -> Result<()> {
        if self.n > DESK_N_MAX || self.q > DESK_Q_MAX || self.t > DESK_T_MAX {
            return Err(Error::WindowViolation(format!(
                "desk-scale guard: need N <= {DESK_N_MAX}, Q <= {DESK_Q_MAX}, t <= {DESK_T_MAX} (got N = {}, Q = {}, t = {})",
                self.n, self.q, self.t
            )));
        }
        Ok(())
    }

    /// Largest `|r|` kept for modulus `q`.
    pub fn r_max(&self, q: i64) -> i64 {
        (self.r_max_factor * q as f64 * self.t.powf(1.0 + self.eps) / self.n).floor() as i64
    }

    /// Bound `M` on `n₁²n₂`.
    pub fn n_max(&self) -> f64 {
        self.n_max_factor * self.n * self.n * self.t_eps() / (self.q as f64).powi(3)
    }
}

/// The `a ∈ (Q, q + Q]` with `ā ≡ -r (mod q)`, when `(r, q) = 1`.
pub fn farey_a(q: i64, r: i64, q_farey: i64) -> Option<i64> {
    if q < 1 || crate::arith::gcd(r, q) != 1 {
        return None;
    }
    let r_bar = if q == 1 { 0 } else { crate::arith::mod_inverse(r.rem_euclid(q), q)? };
    Some(q_farey + 1 + (-r_bar - (q_farey + 1)).rem_euclid(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_and_guards() {
        let c = PipelineConfig::new(200.0, 50.0, 8).unwrap();
        assert!(c.in_window());
        assert!(c.check_desk().is_ok());
        let c = PipelineConfig::new(500.0, 20.0, 3).unwrap();
        assert!(matches!(c.check_window(), Err(Error::WindowViolation(_))));
        let c = PipelineConfig::new(4000.0, 20.0, 3).unwrap();
        assert!(matches!(c.check_desk(), Err(Error::WindowViolation(_))));
        assert!(PipelineConfig::new(100.0, 0.0, 3).is_err());
        assert!(PipelineConfig::new(100.0, 5.0, 0).is_err());
    }
}
