//! The double `τ`-integral
//!
//! `𝔎 = |c₂|² (r₁r₂a₁a₂/t²) ∬ g(τ₁,τ₂) U†(n₂L/q₁q₂, i(τ₂-τ₁)) e(f(τ₁,τ₂)) dτ₁ dτ₂`
//!
//! with `g = Φ₊(τ₁) conj Φ₊(τ₂) W_J(q₁,r₁,τ₁) W_J(q₂,r₂,τ₂)` and the phase `f` collecting the
//! Stirling phases, the `(LN)^{i(τ₂-τ₁)} q₁^{3iτ₁} q₂^{-3iτ₂}` twist and the phases of `ℐ₁`.

use super::{farey_a, PipelineConfig};
use crate::error::{Error, Result};
use crate::gl3::{stirling_phi, GL3Params, Sign};
use crate::oscillatory::cheb::PiecewiseCheb;
use crate::oscillatory::sp::c2;
use crate::oscillatory::two_d::Fn2;
use crate::oscillatory::{fourier_mellin_exact, quad_osc_2d, u0, Phase2, Rect, SmoothWeight};
use crate::Cplx;
use std::f64::consts::{E, PI, TAU};
use std::sync::Arc;

const CHEB_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KTuple {
    pub q1: i64,
    pub q2: i64,
    pub r1: i64,
    pub r2: i64,
    pub n2: i64,
    /// Dyadic size `L` of `n₁²n₂`.
    pub l: f64,
    /// Window parameter: `W_J` lives on `[J, 4J/3]` (or `[4J/3, J]` for `J < 0`).
    pub j: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KCheck {
    pub value: Cplx,
    pub err_est: f64,
    /// `B⋆(C, n₂)`.
    pub bstar: f64,
    pub ratio: f64,
    pub nodes: usize,
}

/// `W_J` on `[J, 4J/3]`: one on `[8J/7, 7J/6]`, mirrored for negative `J`.
pub fn window_weight(j: f64) -> SmoothWeight<f64> {
    assert!(j != 0.0, "J must be nonzero");
    if j > 0.0 {
        SmoothWeight::plateau(j, 8.0 * j / 7.0, 7.0 * j / 6.0, 4.0 * j / 3.0)
    } else {
        SmoothWeight::plateau(4.0 * j / 3.0, 7.0 * j / 6.0, 8.0 * j / 7.0, j)
    }
}

/// `W_J(q, r, τ) = t/(t+τ)^{3/2} W_J(τ) V₀(3/2, -q(t+τ)/(2πNr))`.
pub fn w_jqr(cfg: &PipelineConfig, q: i64, r: i64, tau: f64, w: &SmoothWeight<f64>, v: &SmoothWeight<f64>) -> f64 {
    let tt = cfg.t + tau;
    if tt <= 0.0 {
        return 0.0;
    }
    let wj = w.value(tau);
    if wj == 0.0 {
        return 0.0;
    }
    let x = -(q as f64) * tt / (TAU * cfg.n * r as f64);
    cfg.t / tt.powf(1.5) * wj * u0(v, 1.5, x)
}

/// The phase of `𝔎` in cycles. With `full = Some((n₂, y))` it also carries the phase of the
/// stationary-phase main term of `U†` and the Fourier variable `y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KPhase {
    pub t: f64,
    pub n: f64,
    pub l: f64,
    pub q1: f64,
    pub q2: f64,
    pub r1: f64,
    pub r2: f64,
    pub full: Option<(f64, f64)>,
}

impl KPhase {
    pub fn new(cfg: &PipelineConfig, k: &KTuple) -> Self {
        KPhase { t: cfg.t, n: cfg.n, l: k.l, q1: k.q1 as f64, q2: k.q2 as f64, r1: k.r1 as f64, r2: k.r2 as f64, full: None }
    }

    pub fn with_dual(mut self, n2: f64, y: f64) -> Self {
        self.full = Some((n2, y));
        self
    }

    fn x(&self, q: f64, r: f64, tau: f64) -> f64 {
        -(self.t + tau) * q / (TAU * self.n * r)
    }

    pub fn value(&self, t1: f64, t2: f64) -> f64 {
        let ln_ln = (self.l * self.n).ln();
        let mut f = 3.0 * t1 * (t1.abs() / (TAU * E)).ln() - 3.0 * t2 * (t2.abs() / (TAU * E)).ln() - (t1 - t2) * ln_ln
            + 3.0 * t1 * self.q1.ln()
            - 3.0 * t2 * self.q2.ln()
            - (self.t + t1) * (self.x(self.q1, self.r1, t1) / E).ln()
            + (self.t + t2) * (self.x(self.q2, self.r2, t2) / E).ln();
        if let Some((n2, y)) = self.full {
            let d = t2 - t1;
            let k = self.q1 * self.q2 / (n2 * self.l);
            f += d * (d * k / (TAU * E)).abs().ln() + d * k * y;
        }
        f / TAU
    }

    pub fn grad(&self, t1: f64, t2: f64) -> [f64; 2] {
        let ln_ln = (self.l * self.n).ln();
        let mut g1 = 3.0 * (t1.abs() / TAU).ln() - ln_ln + 3.0 * self.q1.ln() - self.x(self.q1, self.r1, t1).ln();
        let mut g2 = -3.0 * (t2.abs() / TAU).ln() + ln_ln - 3.0 * self.q2.ln() + self.x(self.q2, self.r2, t2).ln();
        if let Some((n2, y)) = self.full {
            let d = t2 - t1;
            let k = self.q1 * self.q2 / (n2 * self.l);
            let h1 = (d * k / TAU).abs().ln() + k * y;
            g1 -= h1;
            g2 += h1;
        }
        [g1 / TAU, g2 / TAU]
    }

    /// `[f₁₁, f₂₂, f₁₂]`.
    pub fn hess(&self, t1: f64, t2: f64) -> [f64; 3] {
        let mut h11 = 3.0 / t1 - 1.0 / (self.t + t1);
        let mut h22 = -3.0 / t2 + 1.0 / (self.t + t2);
        let mut h12 = 0.0;
        if self.full.is_some() {
            let d = t2 - t1;
            h11 += 1.0 / d;
            h22 += 1.0 / d;
            h12 -= 1.0 / d;
        }
        [h11 / TAU, h22 / TAU, h12 / TAU]
    }

    /// `4π² (f₁₁ f₂₂ - f₁₂²)`.
    pub fn det_4pi2(&self, t1: f64, t2: f64) -> f64 {
        let [a, b, c] = self.hess(t1, t2);
        4.0 * PI * PI * (a * b - c * c)
    }

    pub fn to_phase2(self) -> Phase2<f64> {
        let (p1, p2, p3) = (self, self, self);
        let value: Fn2<f64, f64> = Arc::new(move |a, b| p1.value(a, b));
        let grad: Fn2<f64, [f64; 2]> = Arc::new(move |a, b| p2.grad(a, b));
        let hess: Fn2<f64, [f64; 3]> = Arc::new(move |a, b| p3.hess(a, b));
        Phase2 { value, grad, hess }
    }
}

/// `B⋆(C, 0) = QCt^ε/(Nt)`, `B⋆(C, n₂) = QC²t^ε/(Nt) (|n₂|L)^{-1/2}`.
pub fn bstar(cfg: &PipelineConfig, c: f64, n2: i64, l: f64) -> f64 {
    let base = cfg.q as f64 * c * cfg.t_eps() / (cfg.n * cfg.t);
    if n2 == 0 {
        base
    } else {
        base * c / ((n2.unsigned_abs() as f64) * l).sqrt()
    }
}

/// `𝔎` on the window `W_J × W_J`, compared with `B⋆(C, n₂)`.
pub fn k_integral_check(
    k: &KTuple,
    cfg: &PipelineConfig,
    c: f64,
    p: &GL3Params,
    u: &SmoothWeight<f64>,
    v: &SmoothWeight<f64>,
) -> Result<KCheck> {
    k_integral_windows(k, k.j, cfg, c, p, u, v)
}

/// `𝔎` with `τ₁` on `W_J` and `τ₂` on `W_{J₂}`.
pub fn k_integral_windows(
    k: &KTuple,
    j2: f64,
    cfg: &PipelineConfig,
    c: f64,
    p: &GL3Params,
    u: &SmoothWeight<f64>,
    v: &SmoothWeight<f64>,
) -> Result<KCheck> {
    cfg.check_window()?;
    for &(q, r) in &[(k.q1, k.r1), (k.q2, k.r2)] {
        if !(c <= q as f64 && (q as f64) < 2.0 * c && q <= cfg.q) {
            return Err(Error::InvalidArgument(format!("q = {q} not in [C, 2C) with C = {c}, Q = {}", cfg.q)));
        }
        if r == 0 {
            return Err(Error::InvalidArgument("r = 0 is excluded".into()));
        }
    }
    let reach = cfg.n * cfg.t_eps() / (cfg.q as f64 * c);
    for &j in &[k.j, j2] {
        if j == 0.0 || (4.0 * j / 3.0).abs() >= cfg.t || (4.0 * j / 3.0).abs() > 4.0 * PI * reach {
            return Err(Error::InvalidArgument(format!("window J = {j} outside the admissible tau range (|4J/3| <= 4π N t^ε/(QC) = {})", 4.0 * PI * reach)));
        }
    }
    if !(k.l >= 1.0) {
        return Err(Error::InvalidArgument(format!("L = {} must be at least 1", k.l)));
    }
    let a1 = farey_a(k.q1, k.r1, cfg.q).ok_or_else(|| Error::InvalidArgument("gcd(r1, q1) != 1".into()))?;
    let a2 = farey_a(k.q2, k.r2, cfg.q).ok_or_else(|| Error::InvalidArgument("gcd(r2, q2) != 1".into()))?;

    let (w1, w2) = (window_weight(k.j), window_weight(j2));
    let amp = |w: &SmoothWeight<f64>, q: i64, r: i64| -> Result<PiecewiseCheb> {
        let (lo, hi) = w.support;
        let f = |tau: f64| {
            let a = w_jqr(cfg, q, r, tau, w, v);
            if a == 0.0 {
                return Cplx::new(0.0, 0.0);
            }
            stirling_phi(tau, Sign::Plus, p).map(|z| z * a).unwrap_or(Cplx::new(f64::NAN, 0.0))
        };
        PiecewiseCheb::build(f, lo, hi, 16, CHEB_TOL * cfg.t.powf(-0.5), 1 << 14)
    };
    let g1 = amp(&w1, k.q1, k.r1)?;
    let g2 = amp(&w2, k.q2, k.r2)?;
    let rho = k.n2 as f64 * k.l / (k.q1 * k.q2) as f64;
    let (d_lo, d_hi) = (w2.support.0 - w1.support.1, w2.support.1 - w1.support.0);
    let ud = PiecewiseCheb::build(
        |d: f64| fourier_mellin_exact(u, rho, Cplx::new(0.0, d), 1e-15).map(|r| r.value).unwrap_or(Cplx::new(f64::NAN, 0.0)),
        d_lo,
        d_hi,
        ((d_hi - d_lo) / 2.0).ceil() as usize + 2,
        CHEB_TOL,
        1 << 16,
    )?;

    let pref = c2().norm_sqr() * (k.r1 * k.r2 * a1 * a2) as f64 / (cfg.t * cfg.t);
    let b = bstar(cfg, c, k.n2, k.l);
    let phase = KPhase::new(cfg, k).to_phase2();
    let rect = Rect { x: w1.support, y: w2.support };
    let tol = (1e-3 * b / pref.abs()).max(1e-15);
    let g = |t1: f64, t2: f64| g1.eval(t1) * g2.eval(t2).conj() * ud.eval(t2 - t1);
    let r = quad_osc_2d(g, &phase, rect, tol)?;
    let interp = (g1.err_est + g2.err_est + ud.err_est) * (w1.width() * w2.width()) * 4.0;
    let value = r.value * pref;
    let err_est = (r.err_est + interp) * pref.abs();
    Ok(KCheck { value, err_est, bstar: b, ratio: value.norm() / b, nodes: r.node_count + g1.evaluations + g2.evaluations + ud.evaluations })
}
