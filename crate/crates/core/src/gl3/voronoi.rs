//! Numerical check of the GL(3) Voronoi summation formula
//! `Σ λ(1,n) e(an/q) h(n) = q Σ_± Σ_{n₁|q} Σ_{n₂} λ(n₂,n₁)/(n₁n₂) S(ā, ±n₂; q/n₁) H±(n₁²n₂/q³)`.

use super::coeffs::CoefficientTable;
use super::gamma_factor::Sign;
use super::hankel::HankelKernel;
use crate::arith::{divisors, e_frac, gcd, kloosterman, mod_inverse};
use crate::error::{Error, Result};
use crate::oscillatory::SmoothWeight;
use crate::Cplx;
use rayon::prelude::*;

/// Sample points per octave when scanning `|H±|` for the dual cutoff.
const SCAN_PER_OCTAVE: usize = 4;
/// An octave whose `|H±|` envelope is below this fraction of the peak ends the dual sum.
const CUTOFF_RATIO: f64 = 1e-14;
/// Contour for the `H±` kernels; right of the critical line so that quadrature errors
/// shrink like `y^{-σ}` along the dual sum.
pub const VORONOI_SIGMA: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct DualSum {
    pub value: Cplx,
    /// Quadrature error of the `H±` values weighted by the dual coefficients.
    pub quad_err: f64,
    /// Estimated contribution of the terms beyond the cutoff.
    pub trunc_err: f64,
    /// Cutoff in `y = n₁²n₂/q³`.
    pub y_cut: f64,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiReport {
    pub lhs: Cplx,
    pub rhs: Cplx,
    pub residual: f64,
    /// Quadrature + truncation + rounding budget for `residual`.
    pub budget: f64,
    pub dual: DualSum,
}

impl VoronoiReport {
    pub fn within_budget(&self) -> bool {
        self.residual <= self.budget
    }
}

/// `Σ λ(1,n) e(an/q) h(n)` with a rounding estimate.
pub fn voronoi_lhs(table: &CoefficientTable, a: i64, q: i64, h: &SmoothWeight<f64>) -> Result<(Cplx, f64)> {
    let lo = h.support.0.ceil().max(1.0) as u64;
    let hi = h.support.1.floor() as u64;
    let mut acc = Cplx::new(0.0, 0.0);
    let mut mag = 0.0;
    for n in lo..=hi {
        let w = h.value(n as f64);
        if w == 0.0 {
            continue;
        }
        let t = table.lambda(1, n)? * e_frac(a as i128 * n as i128, q) * w;
        acc += t;
        mag += t.norm();
    }
    Ok((acc, 16.0 * f64::EPSILON * mag))
}

/// Right-hand side of the Voronoi formula. Applies to any table; callers that need the
/// identity to hold exactly must supply cuspidal data (see [`voronoi_check`]).
pub fn voronoi_dual_sum(table: &CoefficientTable, a: i64, q: i64, h: &SmoothWeight<f64>) -> Result<DualSum> {
    if q < 1 || gcd(a, q) != 1 {
        return Err(Error::InvalidArgument(format!("need q ≥ 1 and gcd(a, q) = 1, got a = {a}, q = {q}")));
    }
    let abar = mod_inverse(a, q).expect("coprime");
    let q3 = (q as f64).powi(3);
    let y_lo = 1.0 / q3;
    let y_hi = (table.max_norm as f64 / q3).max(y_lo * 2.0);
    let kernels = Sign::BOTH
        .iter()
        .map(|&s| HankelKernel::new(h, s, &table.params, VORONOI_SIGMA, None, (y_lo, y_hi)))
        .collect::<Result<Vec<_>>>()?;
    // (|H±(y)|, error estimate), maximized over both signs
    let envelope = |y: f64| -> Result<(f64, f64)> {
        let (mut m, mut e): (f64, f64) = (0.0, 0.0);
        for k in &kernels {
            let r = k.eval(y)?;
            m = m.max(r.value.norm());
            e = e.max(r.err_est);
        }
        Ok((m, e))
    };

    // scan octaves of y until |H±| has collapsed below the peak or into the quadrature noise
    let mut peak: f64 = 0.0;
    let mut y_cut = None;
    let mut last_octave = 0.0;
    let mut y0 = y_lo;
    while y0 < y_hi {
        let (mut oct, mut noise): (f64, f64) = (0.0, 0.0);
        for j in 0..SCAN_PER_OCTAVE {
            let y = (y0 * 2f64.powf(j as f64 / SCAN_PER_OCTAVE as f64)).min(y_hi);
            let (m, e) = envelope(y)?;
            oct = oct.max(m);
            noise = noise.max(e);
        }
        peak = peak.max(oct);
        if y0 > 1.0 && (oct <= CUTOFF_RATIO * peak || oct <= 2.0 * noise) {
            let oct = oct.max(noise);
            y_cut = Some(y0);
            last_octave = oct;
            break;
        }
        y0 *= 2.0;
    }
    let y_cut = y_cut.ok_or_else(|| {
        Error::InsufficientData(format!("H± has not decayed within the table range y ≤ {y_hi:.3e}"))
    })?;

    let mut jobs = Vec::new();
    for n1 in divisors(q as u64) {
        let c = q / n1 as i64;
        let m = (y_cut * q3 / (n1 * n1) as f64).floor() as u64;
        for n2 in 1..=m {
            jobs.push((n1, n2, c, table.lambda(n2, n1)?));
        }
    }
    let lmax = jobs.iter().map(|j| j.3.norm()).fold(1.0, f64::max);
    let terms: Vec<(Cplx, f64)> = jobs
        .par_iter()
        .map(|&(n1, n2, c, lam)| {
            let y = (n1 * n1 * n2) as f64 / q3;
            let coef = lam * (q as f64 / (n1 * n2) as f64);
            let mut v = Cplx::new(0.0, 0.0);
            let mut err = 0.0;
            for k in &kernels {
                let hv = k.eval(y)?;
                let b = n2 as i64 * k.sign.as_f64() as i64;
                let s = kloosterman(abar, b, c);
                v += coef * s * hv.value;
                err += (coef * s).norm() * hv.err_est;
            }
            Ok((v, err))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut value = Cplx::new(0.0, 0.0);
    let mut quad_err = 0.0;
    let mut mag = 0.0;
    for (v, e) in &terms {
        value += v;
        quad_err += e;
        mag += v.norm();
    }
    // beyond the cutoff: |S| ≤ c and |H±| below the last octave envelope, which keeps shrinking
    let trunc_err: f64 = divisors(q as u64)
        .iter()
        .map(|&n1| {
            let c = (q / n1 as i64) as f64;
            2.0 * q as f64 * c / n1 as f64 * lmax * last_octave * 2f64.ln()
        })
        .sum();
    Ok(DualSum {
        value,
        quad_err: quad_err + 16.0 * f64::EPSILON * mag,
        trunc_err,
        y_cut,
        terms: jobs.len(),
    })
}

/// Compares both sides of the Voronoi formula. Refuses non-cuspidal tables, whose
/// Voronoi formula carries polar terms.
pub fn voronoi_check(table: &CoefficientTable, a: i64, q: i64, h: &SmoothWeight<f64>) -> Result<VoronoiReport> {
    if !table.cuspidal {
        return Err(Error::NonCuspidal(format!("{}: the Voronoi formula has polar terms", table.source)));
    }
    let (lhs, lhs_err) = voronoi_lhs(table, a, q, h)?;
    let dual = voronoi_dual_sum(table, a, q, h)?;
    let rhs = dual.value;
    Ok(VoronoiReport {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        budget: lhs_err + dual.quad_err + dual.trunc_err,
        dual,
    })
}
