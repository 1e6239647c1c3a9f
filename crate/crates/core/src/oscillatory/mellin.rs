//! The Fourier–Mellin transform `U†(r, s) = ∫ U(x) e(-r x) x^{s-1} dx` and its
//! stationary-phase main term.

use super::quad::{integrate, OscResult, QuadOptions};
use super::weight::{u0, SmoothWeight};
use crate::error::Result;
use crate::scalar::{e, Real};
use num_complex::Complex;

pub const FM_TOL: f64 = 1e-10;

/// Cycle count of `x ↦ -r x + β ln x / 2π` over `[lo, hi]`.
fn cycles<T: Real>(r: T, beta: T, lo: T, hi: T) -> f64 {
    let n = 64;
    let mut m = T::zero();
    for i in 0..=n {
        let x = lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n);
        m = m.max((beta / (T::TAU() * x) - r).abs());
    }
    (m * (hi - lo)).to_f64().unwrap_or(0.0)
}

/// `U†(r, s)` by adaptive quadrature over the support of `U` (which must lie in `(0, ∞)`).
pub fn fourier_mellin_exact<T: Real>(u: &SmoothWeight<T>, r: T, s: Complex<T>, tol: f64) -> Result<OscResult<T>> {
    let (lo, hi) = u.support;
    assert!(lo > T::zero(), "support must lie in (0, ∞)");
    let (sig1, beta) = (s.re - T::one(), s.im);
    let k = beta / T::TAU();
    let opts = QuadOptions::new(tol).with_cycles(cycles(r, beta, lo, hi)).with_panels(4);
    integrate(
        |x: T| {
            let amp = u.value(x);
            if amp == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            let amp = if sig1 == T::zero() { amp } else { amp * x.powf(sig1) };
            e(k * x.ln() - r * x) * amp
        },
        lo,
        hi,
        &opts,
    )
}

/// Stationary point `β / (2π r)` of the phase of `U†(r, σ + iβ)`.
pub fn fm_stationary_point<T: Real>(r: T, beta: T) -> T {
    beta / (T::TAU() * r)
}

/// Main term `U0(σ, x*) / x* · e(f(x*) ∓ 1/8) / sqrt|f''(x*)|` with `x* = β/(2π r)`.
///
/// For `β < 0` this is `sqrt(2π) e(1/8) / sqrt(-β) · (β/(2π e r))^{iβ} U0(σ, β/(2π r))`;
/// the `β > 0` case is its complex conjugate image under `r → -r`. Zero when `x*`
/// is outside the support of `U`.
pub fn fourier_mellin_main<T: Real>(u: &SmoothWeight<T>, r: T, s: Complex<T>) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let beta = s.im;
    if r == T::zero() || beta == T::zero() {
        return zero;
    }
    let xs = fm_stationary_point(r, beta);
    if !(xs > T::zero()) {
        return zero;
    }
    let amp = u0(u, s.re, xs);
    if amp == T::zero() {
        return zero;
    }
    // f(x*) = (β/2π)(ln x* - 1), f''(x*) = -2π r²/β
    let phase = beta / T::TAU() * (xs.ln() - T::one());
    let f2 = -T::TAU() * r * r / beta;
    let eighth = if f2 > T::zero() { T::c(0.125) } else { T::c(-0.125) };
    e(phase + eighth) * (amp / (xs * f2.abs().sqrt()))
}
