//! The x-integral `ℐ⋆⋆(q, r, τ) = ∫_0^1 V†(Nx/aq, 1/2 - iτ) U†(N(ra - x)/aq, 1 - it) dx`,
//! its stationary-phase main term `ℐ₁` and the error majorant `B(C, τ)`.

use super::cheb::PiecewiseCheb;
use super::mellin::fourier_mellin_exact;
use super::phase::PhaseSpec;
use super::quad::{integrate, OscResult, QuadOptions};
use super::weight::{u0, SmoothWeight};
use crate::error::{Error, Result};
use crate::scalar::e;
use crate::Cplx;
use std::f64::consts::{PI, TAU};

pub const DEFAULT_EPS: f64 = 0.05;

/// `-(2π)^{3/2} e(1/8)`: the constant in front of `ra / (t+τ)^{3/2}` in `ℐ₁`.
pub fn c2() -> Cplx {
    -e(0.125) * TAU.powf(1.5)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpParams {
    pub q: i64,
    pub a: i64,
    pub r: i64,
    pub t: f64,
    pub tau: f64,
    pub n: f64,
    /// Dyadic block: `C <= q < 2C`.
    pub c: f64,
    /// Farey parameter `Q`.
    pub q_farey: f64,
    pub eps: f64,
}

impl SpParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(q: i64, a: i64, r: i64, t: f64, tau: f64, n: f64, c: f64, q_farey: f64) -> Result<Self> {
        let p = SpParams { q, a, r, t, tau, n, c, q_farey, eps: DEFAULT_EPS };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.n > 0.0 && self.q >= 1 && self.a >= 1) {
            return Err(Error::InvalidArgument("t, N, q, a must be positive".into()));
        }
        if self.r == 0 {
            return Err(Error::InvalidArgument("r = 0 is excluded".into()));
        }
        if self.t + self.tau <= 0.0 {
            return Err(Error::InvalidArgument(format!("t + tau = {} must be positive", self.t + self.tau)));
        }
        if !(self.c <= self.q as f64 && (self.q as f64) < 2.0 * self.c) {
            return Err(Error::InvalidArgument(format!("q = {} not in [C, 2C) for C = {}", self.q, self.c)));
        }
        if self.n / self.t.powf(1.0 - self.eps) >= self.q_farey {
            return Err(Error::WindowViolation(format!(
                "N / t^(1-eps) = {} must be below Q = {}",
                self.n / self.t.powf(1.0 - self.eps),
                self.q_farey
            )));
        }
        Ok(())
    }

    pub fn ra(&self) -> f64 {
        (self.r * self.a) as f64
    }

    /// Stationary point `x₀ = raτ/(τ + t)` of the combined phase.
    pub fn x0(&self) -> f64 {
        self.ra() * self.tau / (self.tau + self.t)
    }

    /// `τ₀ = t/(ra - 1)`, where `x₀ = 1`.
    pub fn tau0(&self) -> f64 {
        self.t / (self.ra() - 1.0)
    }

    pub fn kappa0(&self) -> f64 {
        self.t.powf(self.eps) * (self.q_farey * self.c / self.n).sqrt()
    }

    /// `X = -q(t+τ)/(2πNr)`, the common stationary point of both Fourier–Mellin factors.
    pub fn big_x(&self) -> f64 {
        -(self.q as f64) * (self.t + self.tau) / (TAU * self.n * self.r as f64)
    }

    fn scale_aq(&self) -> f64 {
        self.n / (self.a * self.q) as f64
    }

    /// The combined phase `(t log|ra - x| + τ log x) / 2π` in cycles.
    pub fn phase(&self) -> PhaseSpec<f64> {
        let (t, tau, ra) = (self.t, self.tau, self.ra());
        PhaseSpec::from_derivatives(move |x: f64| {
            let d = ra - x;
            let mut out = [(t * d.abs().ln() + tau * x.ln()) / TAU, 0.0, 0.0, 0.0, 0.0];
            let mut fact = 1.0;
            for j in 1..5 {
                if j > 1 {
                    fact *= (j - 1) as f64;
                }
                let sgn = if j % 2 == 1 { 1.0 } else { -1.0 };
                out[j] = (-t * fact / d.powi(j as i32) + sgn * tau * fact / x.powi(j as i32)) / TAU;
            }
            out
        })
    }
}

/// `ℐ₁ = c₂ ra/(t+τ)^{3/2} (X/e)^{-i(t+τ)} V₀(3/2, X)` when the stationary point
/// `x₀` lies in `(0, 1]`, and zero otherwise.
pub fn i1_main(p: &SpParams, v: &SmoothWeight<f64>) -> Cplx {
    let x0 = p.x0();
    if !(x0 > 0.0 && x0 <= 1.0) {
        return Cplx::new(0.0, 0.0);
    }
    let x = p.big_x();
    let amp = u0(v, 1.5, x);
    if amp == 0.0 {
        return Cplx::new(0.0, 0.0);
    }
    let tt = p.t + p.tau;
    let phase = -tt * (x.ln() - 1.0) / TAU;
    c2() * e(phase) * (p.ra() / tt.powf(1.5) * amp)
}

/// Closed-form bound for the part of `ℐ⋆⋆` away from the stationary point:
/// `(1/(t^{1/2}|τ|^{3/2})) min{1, |τ| a q / N}`.
pub fn e_star_star(p: &SpParams) -> f64 {
    let at = p.tau.abs();
    (1.0 / (p.t.sqrt() * at.powf(1.5))) * (at / p.scale_aq()).min(1.0)
}

/// Whether `|τ|` lies in the critical window `[2πN/aq, 4πN/aq]`.
pub fn in_critical_window(p: &SpParams) -> bool {
    let at = p.tau.abs();
    let base = 2.0 * PI * p.scale_aq();
    at >= base && at <= 2.0 * base
}

/// The majorant `B(C, τ)`; the critical-window factor is `min{|τ - τ₀|^{-1}, κ₀}`.
pub fn b_error_bound(p: &SpParams) -> f64 {
    let (t, at, eps) = (p.t, p.tau.abs(), p.eps);
    let qc_n = p.q_farey * p.c / p.n;
    let mut b = qc_n / t.sqrt() * (t.powf(eps) / (1.0 + at)).powi(10) + t.powf(-1.5 + eps);
    if at > 1.0 {
        b += e_star_star(p) + qc_n / (t.sqrt() * at);
    }
    if in_critical_window(p) {
        let gap = (p.tau - p.tau0()).abs();
        let m = if gap > 0.0 { (1.0 / gap).min(p.kappa0()) } else { p.kappa0() };
        b += m / (t.sqrt() * at.sqrt());
    }
    b
}

/// Interpolants of `x ↦ V†(Nx/aq, 1/2 - iτ)` and `x ↦ U†(N(ra - x)/aq, 1 - it)` on `[0, 1]`.
pub struct DaggerCache {
    pub v: PiecewiseCheb,
    pub u: PiecewiseCheb,
    pub fm_evaluations: usize,
}

const FM_INNER_TOL: f64 = 1e-12;
const CHEB_TOL: f64 = 1e-10;

pub fn dagger_cache(p: &SpParams, u: &SmoothWeight<f64>, v: &SmoothWeight<f64>) -> Result<DaggerCache> {
    let k = p.scale_aq();
    let ra = p.ra();
    let sv = Cplx::new(0.5, -p.tau);
    let su = Cplx::new(1.0, -p.t);
    let fv = |x: f64| fourier_mellin_exact(v, k * x, sv, FM_INNER_TOL).map(|r| r.value).unwrap_or(Cplx::new(f64::NAN, 0.0));
    let fu = |x: f64| fourier_mellin_exact(u, k * (ra - x), su, FM_INNER_TOL).map(|r| r.value).unwrap_or(Cplx::new(f64::NAN, 0.0));
    // one panel per expected oscillation of each factor
    let cyc_u = (p.t / TAU * ((ra.abs() + 1.0) / ra.abs().max(1e-300)).ln()).abs();
    let cyc_v = (p.tau.abs() / TAU).min(4.0 * k + 8.0) + 2.0 * k;
    let pu = (cyc_u.ceil() as usize).max(2);
    let pv = (cyc_v.ceil() as usize).max(2);
    let cv = PiecewiseCheb::build(fv, 0.0, 1.0, pv, CHEB_TOL, 1 << 16)?;
    let cu = PiecewiseCheb::build(fu, 0.0, 1.0, pu, CHEB_TOL, 1 << 16)?;
    let n = cv.evaluations + cu.evaluations;
    Ok(DaggerCache { v: cv, u: cu, fm_evaluations: n })
}

/// `ℐ⋆⋆(q, r, τ)` by x-quadrature of the cached Fourier–Mellin factors.
pub fn istarstar(p: &SpParams, u: &SmoothWeight<f64>, v: &SmoothWeight<f64>, tol: f64) -> Result<OscResult<f64>> {
    let cache = dagger_cache(p, u, v)?;
    let panels = cache.u.panels().max(cache.v.panels());
    let opts = QuadOptions::new(tol).with_panels(panels);
    let r = integrate(|x: f64| cache.v.eval(x) * cache.u.eval(x), 0.0, 1.0, &opts)?;
    if !r.value.re.is_finite() || !r.value.im.is_finite() {
        return Err(Error::QuadratureNonConvergence { tol, err_est: f64::INFINITY, nodes: r.node_count });
    }
    let interp = cache.v.err_est * 1.0 + cache.u.err_est * 1.0 + 2.0 * FM_INNER_TOL;
    Ok(OscResult { value: r.value, err_est: r.err_est + interp, node_count: r.node_count + cache.fm_evaluations })
}

/// `ℐ⋆⋆(q, r, τ)` for many `τ` at once (the `tau` field of `p` is ignored).
///
/// Exchanging the `x`- and `y`-integrals gives `ℐ⋆⋆(τ) = ∫ V(y) y^{-1/2-iτ} H(y) dy` with
/// `H(y) = ∫_0^1 U†(N(ra - x)/aq, 1 - it) e(-Nxy/aq) dx` independent of `τ`; `H` is tabulated once on
/// a composite Gauss–Kronrod grid in `y`. Each result carries the Kronrod–Gauss difference plus the
/// tabulation error as `err_est`.
pub fn istarstar_batch(p: &SpParams, taus: &[f64], u: &SmoothWeight<f64>, v: &SmoothWeight<f64>, tol: f64) -> Result<Vec<OscResult<f64>>> {
    let k = p.scale_aq();
    let ra = p.ra();
    let su = Cplx::new(1.0, -p.t);
    let fu = |x: f64| fourier_mellin_exact(u, k * (ra - x), su, FM_INNER_TOL).map(|r| r.value).unwrap_or(Cplx::new(f64::NAN, 0.0));
    let cyc_u = (p.t / TAU * ((ra.abs() + 1.0) / ra.abs().max(1e-300)).ln()).abs();
    let cu = PiecewiseCheb::build(fu, 0.0, 1.0, (cyc_u.ceil() as usize).max(2), CHEB_TOL, 1 << 16)?;

    let (lo, hi) = v.support;
    let tau_max = taus.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let cycles = tau_max * (hi / lo).ln() / TAU + k * (hi - lo) + 1.0;
    let panels = (4.0 * cycles).ceil() as usize + 16;
    let h = (hi - lo) / panels as f64;
    let rule = super::quad::gk15_rule();
    let opts = QuadOptions::new(tol).with_panels((cyc_u.ceil() as usize).max(2) + (k.ceil() as usize));
    // (y, V(y) y^{-1/2} H(y) · Kronrod weight, same · (Kronrod - Gauss) weight)
    let mut nodes = Vec::with_capacity(15 * panels);
    let mut h_err = 0.0f64;
    let mut h_nodes = cu.evaluations;
    for i in 0..panels {
        let c = lo + (i as f64 + 0.5) * h;
        for &(x, wk, wg) in &rule {
            let y = c + 0.5 * h * x;
            let w = v.value(y);
            if w == 0.0 {
                continue;
            }
            let r = integrate(|x: f64| cu.eval(x) * e(-k * x * y), 0.0, 1.0, &opts)?;
            h_err = h_err.max(r.err_est);
            h_nodes += r.node_count;
            let a = r.value * (w / y.sqrt());
            nodes.push((y, a * (0.5 * h * wk), a * (0.5 * h * (wk - wg)), w / y.sqrt() * 0.5 * h * wk));
        }
    }
    let mass: f64 = nodes.iter().map(|n| n.3.abs()).sum();
    let interp = (h_err + cu.err_est) * mass;
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let (mut val, mut diff) = (Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0));
        for &(y, ak, ad, _) in &nodes {
            let ph = e(-tau * y.ln() / TAU);
            val += ak * ph;
            diff += ad * ph;
        }
        if !val.re.is_finite() || !val.im.is_finite() {
            return Err(Error::QuadratureNonConvergence { tol, err_est: f64::INFINITY, nodes: h_nodes });
        }
        out.push(OscResult { value: val, err_est: diff.norm() + interp, node_count: nodes.len() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SpParams {
        // t = 2000, q = 3, r = -1, X ≈ 1.5
        let n = 3.0 * 2000.0 / (TAU * 1.5);
        SpParams::new(3, 5, -1, 2000.0, -100.0, n, 3.0, 4.0).unwrap()
    }

    #[test]
    fn stationary_point_is_zero_of_derivative() {
        let p = sample();
        let f = p.phase();
        let x0 = p.x0();
        assert!(f.deriv(x0, 1).abs() < 1e-12 * (p.t / TAU));
        assert!(f.check_derivatives(0.05, 0.95, 25) < 1e-5);
        // 2π f''(x0) = (t+τ)³/(tτ r²a²) in magnitude
        let want = (p.t + p.tau).powi(3) / (p.t * p.tau.abs() * p.ra().powi(2)) / TAU;
        assert!((f.deriv(x0, 2) - want).abs() < 1e-10 * want);
    }

    #[test]
    fn construction_guards() {
        assert!(matches!(SpParams::new(3, 5, -1, 100.0, -1.0, 1.0e5, 3.0, 4.0), Err(Error::WindowViolation(_))));
        assert!(SpParams::new(3, 5, 0, 2000.0, -1.0, 400.0, 3.0, 4.0).is_err());
        assert!(SpParams::new(3, 5, -1, 2000.0, -2000.0, 400.0, 3.0, 4.0).is_err());
        assert!(SpParams::new(5, 7, -1, 2000.0, -1.0, 400.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn batch_matches_pointwise() {
        let (u, v) = (super::super::weight::standard_u(), super::super::weight::standard_v());
        let p = SpParams { q: 6, a: 7, r: -1, t: 50.0, tau: 0.0, n: 40.0, c: 4.0, q_farey: 6.0, eps: 0.05 };
        let taus = [-40.0, -6.0, -0.3, 0.0, 2.5, 30.0];
        let batch = istarstar_batch(&p, &taus, &u, &v, 1e-12).unwrap();
        for (b, &tau) in batch.iter().zip(&taus) {
            let one = istarstar(&SpParams { tau, ..p }, &u, &v, 1e-12).unwrap();
            assert!((b.value - one.value).norm() < 1e-9, "tau {tau}: {} vs {}", b.value, one.value);
            assert!(b.err_est < 1e-8);
        }
    }

    #[test]
    fn small_tau_branch_of_b() {
        let mut p = sample();
        p.tau = 0.5;
        let qc_n = p.q_farey * p.c / p.n;
        let want = qc_n / p.t.sqrt() * (p.t.powf(p.eps) / 1.5).powi(10) + p.t.powf(-1.5 + p.eps);
        assert!((b_error_bound(&p) - want).abs() < 1e-15 * want);
    }
}
