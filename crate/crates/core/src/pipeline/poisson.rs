//! Poisson summation of the `r`-sum after splitting `r` modulo `q`:
//!
//! `Σ_{r≥1} r^{-it} e(rā/q) e(-rx/aq) U(r/N) = N^{1-it} Σ_{k ≡ -ā (q)} U†(N(ka + x)/aq, 1 - it)`.

use super::direct::summation_range;
use super::PipelineConfig;
use crate::arith::{gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::oscillatory::{fourier_mellin_exact, SmoothWeight};
use crate::scalar::{compensated_sum, e};
use crate::Cplx;
use std::f64::consts::TAU;

const FM_ABS_TOL: f64 = 1e-12;
const MAX_K: i64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualTerm {
    pub k: i64,
    pub value: Cplx,
    /// Whether the term is part of `rhs` (otherwise it only feeds the tail estimate).
    pub kept: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonReport {
    pub lhs: Cplx,
    pub rhs: Cplx,
    pub residual: f64,
    /// Quadrature + tail + rounding.
    pub budget: f64,
    pub quad_err: f64,
    /// Twice the summed size of the terms with `k_max < |k| ≤ 2 k_max`.
    pub tail: f64,
    pub k_max: i64,
    pub terms: Vec<DualTerm>,
    /// The `k = 0` term, which occurs only for `q = 1`.
    pub zero_term: Option<Cplx>,
}

impl PoissonReport {
    pub fn within_budget(&self) -> bool {
        self.residual <= self.budget
    }
}

/// Checks the Poisson identity for the `r`-sum at one `(q, a, x)`.
pub fn poisson_r_check(q: i64, a: i64, x: f64, cfg: &PipelineConfig, u: &SmoothWeight<f64>) -> Result<PoissonReport> {
    if q < 1 || a < 1 || gcd(a, q) != 1 {
        return Err(Error::InvalidArgument(format!("need q, a >= 1 with gcd(a, q) = 1 (q = {q}, a = {a})")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("x = {x} outside [0, 1]")));
    }
    let a_bar = if q == 1 { 0 } else { mod_inverse(a, q).expect("coprime") };
    let (n, t) = (cfg.n, cfg.t);
    let aq = (a * q) as f64;

    let (lo, hi) = summation_range(n, u);
    let mut lhs_terms = Vec::new();
    let mut lhs_abs = 0.0;
    for r in lo..=hi {
        let w = u.value(r as f64 / n);
        if w == 0.0 {
            continue;
        }
        let rf = r as f64;
        let ph = -t * rf.ln() / TAU + ((r as i128 * a_bar as i128).rem_euclid(q as i128)) as f64 / q as f64 - rf * x / aq;
        lhs_terms.push(e(ph) * w);
        lhs_abs += w;
    }
    let lhs = compensated_sum(lhs_terms);

    let s = Cplx::new(1.0, -t);
    let pref = e(-t * n.ln() / TAU) * n;
    let term = |k: i64| -> Result<(Cplx, f64)> {
        let rho = n * ((k * a) as f64 + x) / aq;
        let r = fourier_mellin_exact(u, rho, s, FM_ABS_TOL)?;
        Ok((pref * r.value, n * r.err_est))
    };
    // representatives k ≡ -ā (mod q)
    let k0 = (-a_bar).rem_euclid(q);
    let ks_in = |kmax: i64| -> Vec<i64> {
        let mut v = Vec::new();
        let mut k = k0 - q * ((kmax + k0) / q + 1);
        while k <= kmax {
            if k.abs() <= kmax {
                v.push(k);
            }
            k += q;
        }
        v
    };

    let base = (cfg.r_max_factor * q as f64 * t.powf(1.0 + cfg.eps) / n).ceil() as i64;
    let mut k_max = base.max(q);
    let scale = lhs_abs.max(1e-300);
    loop {
        let kept = ks_in(k_max);
        let outer: Vec<i64> = ks_in(2 * k_max).into_iter().filter(|k| k.abs() > k_max).collect();
        let mut terms = Vec::with_capacity(kept.len() + outer.len());
        let mut quad_err = 0.0;
        for &k in &kept {
            let (v, err) = term(k)?;
            quad_err += err;
            terms.push(DualTerm { k, value: v, kept: true });
        }
        let (mut tail_val, mut tail_err) = (0.0, 0.0);
        for &k in &outer {
            let (v, err) = term(k)?;
            tail_val += v.norm();
            tail_err += err;
            terms.push(DualTerm { k, value: v, kept: false });
        }
        let tail = 2.0 * (tail_val + tail_err);
        // keep doubling while the shell is above both the target and its own quadrature noise
        if 2.0 * tail_val > 1e-13 * scale && tail_val > tail_err && 2 * k_max <= MAX_K {
            k_max *= 2;
            continue;
        }
        let rhs = compensated_sum(terms.iter().filter(|d| d.kept).map(|d| d.value));
        let residual = (lhs - rhs).norm();
        let rounding = 64.0 * f64::EPSILON * (scale + terms.iter().map(|d| d.value.norm()).sum::<f64>());
        let zero_term = terms.iter().find(|d| d.k == 0).map(|d| d.value);
        terms.sort_by_key(|d| d.k);
        return Ok(PoissonReport { lhs, rhs, residual, budget: quad_err + tail + rounding, quad_err, tail, k_max, terms, zero_term });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillatory::weight::standard_u;

    #[test]
    fn identity_at_q_one() {
        let cfg = PipelineConfig::new(200.0, 15.0, 3).unwrap();
        let r = poisson_r_check(1, 2, 0.3, &cfg, &standard_u()).unwrap();
        assert!(r.within_budget(), "residual {} budget {}", r.residual, r.budget);
        assert!(r.zero_term.is_some());
        assert!(r.budget < 1e-8 * r.lhs.norm().max(1.0));
    }

    #[test]
    fn no_zero_term_for_composite_modulus() {
        let cfg = PipelineConfig::new(200.0, 15.0, 5).unwrap();
        let r = poisson_r_check(4, 7, 0.5, &cfg, &standard_u()).unwrap();
        assert!(r.zero_term.is_none());
        assert!(r.terms.iter().all(|d| (d.k + mod_inverse(7, 4).unwrap()).rem_euclid(4) == 0));
        assert!(r.within_budget());
    }
}
