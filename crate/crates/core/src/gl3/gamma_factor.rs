//! Archimedean factors: `γ_ℓ(s)`, `γ±(s) = γ₀(s) ∓ iγ₁(s)`, the non-oscillating part `Φ±`
//! and the completed factor `γ(s, π) = Π Γ_ℝ(s - α_i)`.

use super::params::GL3Params;
use crate::error::{Error, Result};
use crate::special::{is_gamma_pole, ln_gamma};
use crate::Cplx;
use std::f64::consts::{E, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

/// `(π^{-3s-3/2}/2) Π Γ((1+s+α_i+ℓ)/2) / Γ((-s-α_i+ℓ)/2)` for `ℓ ∈ {0, 1}`.
pub fn gamma_ell(s: Cplx, ell: u8, p: &GL3Params) -> Result<Cplx> {
    assert!(ell <= 1, "ell must be 0 or 1");
    let l = ell as f64;
    let mut log = Cplx::new(0.0, 0.0);
    let mut vanishes = false;
    for a in p.alpha {
        let num = (s + a + 1.0 + l) * 0.5;
        let den = (-s - a + l) * 0.5;
        if is_gamma_pole(num) {
            return Err(Error::PoleEncountered { re: s.re, im: s.im });
        }
        if is_gamma_pole(den) {
            vanishes = true;
            continue;
        }
        log += ln_gamma(num) - ln_gamma(den);
    }
    if vanishes {
        return Ok(Cplx::new(0.0, 0.0));
    }
    log += (-s * 3.0 - 1.5) * PI.ln();
    Ok(log.exp() * 0.5)
}

/// `γ±(s) = γ₀(s) ∓ i γ₁(s)`.
pub fn gamma_pm(s: Cplx, sign: Sign, p: &GL3Params) -> Result<Cplx> {
    let g0 = gamma_ell(s, 0, p)?;
    let g1 = gamma_ell(s, 1, p)?;
    Ok(g0 - Cplx::new(0.0, sign.as_f64()) * g1)
}

/// Stirling phase of `γ±(-1/2 + iτ)`: `3τ log(|τ|/(2πe))` radians.
pub fn stirling_phase(tau: f64) -> f64 {
    3.0 * tau * (tau.abs() / (2.0 * PI * E)).ln()
}

/// `Φ±(τ) = γ±(-1/2 + iτ) (|τ|/(2πe))^{-3iτ}`.
pub fn stirling_phi(tau: f64, sign: Sign, p: &GL3Params) -> Result<Cplx> {
    let g = gamma_pm(Cplx::new(-0.5, tau), sign, p)?;
    Ok(g * Cplx::from_polar(1.0, -stirling_phase(tau)))
}

/// `γ±(-1/2 + iτ) (|τ|/(eπ))^{-3iτ}`, the normalization with base `eπ`. Kept to
/// show that it leaves a residual oscillation `2^{-3iτ}`.
pub fn stirling_phi_e_pi(tau: f64, sign: Sign, p: &GL3Params) -> Result<Cplx> {
    let g = gamma_pm(Cplx::new(-0.5, tau), sign, p)?;
    Ok(g * Cplx::from_polar(1.0, -3.0 * tau * (tau.abs() / (E * PI)).ln()))
}

/// `ln Γ_ℝ(s) = -(s/2) ln π + ln Γ(s/2)`.
pub fn ln_gamma_r(s: Cplx) -> Cplx {
    -s * 0.5 * PI.ln() + ln_gamma(s * 0.5)
}

/// `ln γ(s, π) = Σ ln Γ_ℝ(s - α_i)`.
pub fn ln_completed_gamma(s: Cplx, p: &GL3Params) -> Result<Cplx> {
    let mut acc = Cplx::new(0.0, 0.0);
    for a in p.alpha {
        let z = s - a;
        if is_gamma_pole(z * 0.5) {
            return Err(Error::PoleEncountered { re: s.re, im: s.im });
        }
        acc += ln_gamma_r(z);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial() -> GL3Params {
        GL3Params::from_real(1.0 / 3.0, 1.0 / 3.0)
    }

    #[test]
    fn values_at_minus_half() {
        let p = trivial();
        let s = Cplx::new(-0.5, 0.0);
        assert!((gamma_ell(s, 0, &p).unwrap() - Cplx::new(0.5, 0.0)).norm() < 1e-14);
        assert!((gamma_ell(s, 1, &p).unwrap() - Cplx::new(0.5, 0.0)).norm() < 1e-14);
        assert!((gamma_pm(s, Sign::Plus, &p).unwrap() - Cplx::new(0.5, -0.5)).norm() < 1e-14);
        assert!((gamma_pm(s, Sign::Minus, &p).unwrap() - Cplx::new(0.5, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn numerator_pole_is_reported_and_denominator_pole_vanishes() {
        let p = trivial();
        assert!(matches!(gamma_ell(Cplx::new(-1.0, 0.0), 0, &p), Err(Error::PoleEncountered { .. })));
        // Γ(-s/2) has a pole at s = 0
        assert_eq!(gamma_ell(Cplx::new(0.0, 0.0), 0, &p).unwrap(), Cplx::new(0.0, 0.0));
    }

    #[test]
    fn kernel_matches_completed_factor_ratio() {
        // γ(1+s, π̃) / γ(-s, π) = 2 γ₀(s)
        let p = GL3Params::from_real(0.31, 0.27);
        for &s in &[Cplx::new(-0.5, 3.0), Cplx::new(0.2, -7.5), Cplx::new(1.3, 0.4)] {
            let ratio = (ln_completed_gamma(s + 1.0, &p.dual()).unwrap() - ln_completed_gamma(-s, &p).unwrap()).exp();
            let g0 = gamma_ell(s, 0, &p).unwrap() * 2.0;
            assert!((ratio - g0).norm() < 1e-12 * g0.norm(), "s={s}");
        }
    }
}
