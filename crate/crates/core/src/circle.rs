//! Kloosterman's version of the circle method: an exact expansion of `δ(n = 0)` over
//! Farey-type fractions `ā/q` with `q <= Q < a <= q + Q`.

use crate::arith::{e_frac, gcd, mod_inverse};
use crate::error::Result;
use crate::oscillatory::{integrate, QuadOptions};
use crate::scalar::{e, Kahan};
use crate::Cplx;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleConfig {
    pub q_max: i64,
    pub quad_tol: f64,
}

impl CircleConfig {
    pub fn new(q_max: i64) -> Self {
        assert!(q_max >= 1, "Q must be positive");
        CircleConfig { q_max, quad_tol: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FareyTerm {
    pub q: i64,
    pub a: i64,
}

impl FareyTerm {
    /// Inverse of `a` modulo `q` (0 when `q = 1`).
    pub fn a_bar(&self) -> i64 {
        mod_inverse(self.a, self.q).expect("a coprime to q")
    }
}

/// All `(q, a)` with `1 <= q <= Q < a <= q + Q` and `gcd(a, q) = 1`, sorted.
pub fn farey_terms(q_max: i64) -> Vec<FareyTerm> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        for a in (q_max + 1)..=(q + q_max) {
            if gcd(a, q) == 1 {
                out.push(FareyTerm { q, a });
            }
        }
    }
    out
}

/// `∫_0^1 e(-n x / (a q)) dx` in closed form.
pub fn x_integral(n: i64, term: FareyTerm) -> Cplx {
    if n == 0 {
        return Cplx::new(1.0, 0.0);
    }
    let w = n as f64 / (term.a * term.q) as f64;
    (e(-w) - 1.0) / Cplx::new(0.0, -2.0 * PI * w)
}

fn term_value(n: i64, term: FareyTerm, integral: Cplx) -> f64 {
    let ph = e_frac(n as i128 * term.a_bar() as i128, term.q);
    2.0 * (ph * integral).re / (term.a * term.q) as f64
}

/// `2 Re Σ (1/(a q)) e(n ā / q) ∫_0^1 e(-n x/(a q)) dx`, which equals `δ(n = 0)`.
pub fn delta_eval(n: i64, cfg: &CircleConfig) -> f64 {
    let mut acc = Kahan::default();
    for t in farey_terms(cfg.q_max) {
        acc.add(term_value(n, t, x_integral(n, t)));
    }
    acc.total()
}

/// Same identity with each x-integral computed by the adaptive quadrature engine.
pub fn delta_eval_quadrature(n: i64, cfg: &CircleConfig) -> Result<f64> {
    let mut acc = Kahan::default();
    for t in farey_terms(cfg.q_max) {
        let w = n as f64 / (t.a * t.q) as f64;
        let opts = QuadOptions::new(cfg.quad_tol).with_cycles(w.abs());
        let r = integrate(|x: f64| e(-w * x), 0.0, 1.0, &opts)?;
        acc.add(term_value(n, t, r.value));
    }
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_examples() {
        assert_eq!(farey_terms(1), vec![FareyTerm { q: 1, a: 2 }]);
        assert_eq!(farey_terms(2), vec![FareyTerm { q: 1, a: 3 }, FareyTerm { q: 2, a: 3 }]);
        // (1,4), (2,5), (3,4), (3,5)
        assert_eq!(farey_terms(3).len(), 4);
        for q in 1..=8 {
            let total: f64 = farey_terms(q).iter().map(|t| 2.0 / (t.a * t.q) as f64).sum();
            assert!((total - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn delta_small_cases() {
        let c = CircleConfig::new(1);
        assert!((delta_eval(0, &c) - 1.0).abs() < 1e-15);
        assert!(delta_eval(1, &c).abs() < 1e-15);
        let c4 = CircleConfig::new(4);
        for k in -20..=20 {
            let want = if k == 0 { 1.0 } else { 0.0 };
            assert!((delta_eval(k, &c4) - want).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn quadrature_path_matches() {
        for (n, q) in [(0, 3), (5, 5), (-7, 2)] {
            let c = CircleConfig::new(q);
            let v = delta_eval_quadrature(n, &c).unwrap();
            let want = if n == 0 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < c.quad_tol * farey_terms(q).len() as f64 + 1e-14);
        }
    }
}
