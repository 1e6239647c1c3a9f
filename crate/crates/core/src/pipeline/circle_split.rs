//! `S(N) = S⁺(N) + S⁻(N)` with
//! `S^± = ∫_0^1 Σ_{q,a} (1/aq) Σ_r r^{-it} e(±rā/q) e(∓rx/aq) U(r/N) Σ_n λ(1,n) e(∓nā/q) e(±nx/aq) V(n/N) dx`.

use super::direct::{require_depth, summation_range};
use super::PipelineConfig;
use crate::circle::{farey_terms, FareyTerm};
use crate::error::{Error, Result};
use crate::gl3::CoefficientTable;
use crate::oscillatory::quad::gk15_rule;
use crate::oscillatory::{integrate, QuadOptions, SmoothWeight};
use crate::scalar::{compensated_sum, e};
use crate::sweep::try_ordered_map;
use crate::Cplx;
use std::f64::consts::TAU;

/// How the x-integrals are discretized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XRule {
    /// Adaptive Gauss–Kronrod to the configured tolerance.
    Adaptive,
    /// Composite 15-point Kronrod with this many panels per oscillation (at least 4 panels).
    Fixed { panels_per_cycle: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleSplit {
    pub s_plus: Cplx,
    pub s_minus: Cplx,
    pub total: Cplx,
    /// Summed quadrature error estimates (already divided by `aq`).
    pub err_est: f64,
    pub nodes: usize,
    pub farey_terms: usize,
}

/// `Σ_k c_k e(f_k x)` for frequencies `f_k = f₀ + k·step`, evaluated by a phasor recurrence
/// that is resynchronized every few steps.
struct Exponential {
    f0: f64,
    step: f64,
    coef: Vec<Cplx>,
    abs: f64,
}

impl Exponential {
    fn eval(&self, x: f64) -> Cplx {
        let rot = e(self.step * x);
        let mut acc = Cplx::new(0.0, 0.0);
        let mut w = Cplx::new(1.0, 0.0);
        for (k, c) in self.coef.iter().enumerate() {
            if k % 32 == 0 {
                w = e((self.f0 + self.step * k as f64) * x);
            }
            acc += c * w;
            w *= rot;
        }
        acc
    }
}

fn cycles(a: &Exponential, b: &Exponential) -> f64 {
    // frequencies of the product lie between the sums of the extreme frequencies
    let end = |s: &Exponential| (s.f0, s.f0 + s.step * (s.coef.len().max(1) - 1) as f64);
    let (a0, a1) = end(a);
    let (b0, b1) = end(b);
    [a0 + b0, a0 + b1, a1 + b0, a1 + b1].iter().fold(0.0f64, |m, f| m.max(f.abs()))
}

fn fixed_rule<F: Fn(f64) -> Cplx>(f: F, panels: usize) -> (Cplx, f64, usize) {
    let rule = gk15_rule();
    let h = 1.0 / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    let mut err = 0.0;
    for p in 0..panels {
        let c = (p as f64 + 0.5) * h;
        let (mut k, mut g) = (Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0));
        for &(x, wk, wg) in &rule {
            let v = f(c + 0.5 * h * x);
            k += v * wk;
            g += v * wg;
        }
        parts.push(k * (0.5 * h));
        err += (k - g).norm() * 0.5 * h;
    }
    (compensated_sum(parts), err, 15 * panels)
}

struct TermSetup {
    term: FareyTerm,
    r_side: [Exponential; 2],
    n_side: [Exponential; 2],
}

fn setup(term: FareyTerm, table: &CoefficientTable, cfg: &PipelineConfig, u: &SmoothWeight<f64>, v: &SmoothWeight<f64>) -> Result<TermSetup> {
    let (q, a) = (term.q, term.a);
    let a_bar = if q == 1 { 0 } else { term.a_bar() };
    let aq = (a * q) as f64;
    let k = cfg.t / TAU;
    let frac = |m: u64| ((m as i128 * a_bar as i128).rem_euclid(q as i128)) as f64 / q as f64;
    let (r_lo, r_hi) = summation_range(cfg.n, u);
    let (n_lo, n_hi) = summation_range(cfg.n, v);
    let mut r_side = Vec::new();
    for sgn in [1.0, -1.0] {
        let coef: Vec<Cplx> = (r_lo..=r_hi)
            .map(|r| e(-k * (r as f64).ln() + sgn * frac(r)) * u.value(r as f64 / cfg.n))
            .collect();
        let abs = coef.iter().map(|c| c.norm()).sum();
        r_side.push(Exponential { f0: -sgn * r_lo as f64 / aq, step: -sgn / aq, coef, abs });
    }
    let mut n_side = Vec::new();
    for sgn in [1.0, -1.0] {
        let mut coef = Vec::with_capacity((n_hi + 1).saturating_sub(n_lo) as usize);
        for n in n_lo..=n_hi {
            let w = v.value(n as f64 / cfg.n);
            coef.push(if w == 0.0 { Cplx::new(0.0, 0.0) } else { table.lambda(1, n)? * e(-sgn * frac(n)) * w });
        }
        let abs = coef.iter().map(|c| c.norm()).sum();
        n_side.push(Exponential { f0: sgn * n_lo as f64 / aq, step: sgn / aq, coef, abs });
    }
    let [r0, r1]: [Exponential; 2] = r_side.try_into().ok().expect("two signs");
    let [n0, n1]: [Exponential; 2] = n_side.try_into().ok().expect("two signs");
    Ok(TermSetup { term, r_side: [r0, r1], n_side: [n0, n1] })
}

/// Evaluates `S⁺`, `S⁻` and their sum with adaptive x-quadrature.
pub fn s_pm_circle(table: &CoefficientTable, cfg: &PipelineConfig, u: &SmoothWeight<f64>, v: &SmoothWeight<f64>) -> Result<CircleSplit> {
    s_pm_circle_with(table, cfg, u, v, XRule::Adaptive)
}

pub fn s_pm_circle_with(
    table: &CoefficientTable,
    cfg: &PipelineConfig,
    u: &SmoothWeight<f64>,
    v: &SmoothWeight<f64>,
    rule: XRule,
) -> Result<CircleSplit> {
    cfg.check_desk()?;
    require_depth(table, cfg)?;
    check_u_is_one_on_v(u, v)?;
    let terms = farey_terms(cfg.q);
    let setups = try_ordered_map(&terms, |&t| setup(t, table, cfg, u, v))?;

    let panels_for = |s: &TermSetup, sign: usize| -> usize {
        let c = cycles(&s.r_side[sign], &s.n_side[sign]);
        match rule {
            XRule::Adaptive => (c.ceil() as usize).max(1),
            XRule::Fixed { panels_per_cycle } => ((c * panels_per_cycle as f64).ceil() as usize).max(4),
        }
    };
    // adaptive refinement is budgeted at four times the starting grid
    let refine = if rule == XRule::Adaptive { 4 } else { 1 };
    let projected: usize = setups.iter().map(|s| (0..2).map(|g| 15 * refine * panels_for(s, g)).sum::<usize>()).sum();
    if projected > cfg.node_cap {
        return Err(Error::BudgetExceeded(format!("projected {projected} x-quadrature nodes exceed the cap {}", cfg.node_cap)));
    }

    let jobs: Vec<(usize, usize)> = (0..setups.len()).flat_map(|i| [(i, 0), (i, 1)]).collect();
    let results = try_ordered_map(&jobs, |&(i, g)| -> Result<(Cplx, f64, usize)> {
        let s = &setups[i];
        let (rs, ns) = (&s.r_side[g], &s.n_side[g]);
        let aq = (s.term.a * s.term.q) as f64;
        let f = |x: f64| rs.eval(x) * ns.eval(x);
        let panels = panels_for(s, g);
        let (val, err, nodes) = match rule {
            XRule::Adaptive => {
                let tol = cfg.tol * rs.abs * ns.abs;
                let opts = QuadOptions::new(tol.max(f64::MIN_POSITIVE)).with_panels(panels).with_budget(15 * refine * panels + 30);
                let r = integrate(f, 0.0, 1.0, &opts)?;
                (r.value, r.err_est, r.node_count)
            }
            XRule::Fixed { .. } => fixed_rule(f, panels),
        };
        Ok((val / aq, err / aq, nodes))
    })?;

    let plus: Vec<Cplx> = results.iter().step_by(2).map(|r| r.0).collect();
    let minus: Vec<Cplx> = results.iter().skip(1).step_by(2).map(|r| r.0).collect();
    let s_plus = compensated_sum(plus);
    let s_minus = compensated_sum(minus);
    Ok(CircleSplit {
        s_plus,
        s_minus,
        total: s_plus + s_minus,
        err_est: results.iter().map(|r| r.1).sum(),
        nodes: results.iter().map(|r| r.2).sum(),
        farey_terms: terms.len(),
    })
}

/// The split reproduces `S(N)` only if `U = 1` on the support of `V`.
fn check_u_is_one_on_v(u: &SmoothWeight<f64>, v: &SmoothWeight<f64>) -> Result<()> {
    let (lo, hi) = v.support;
    for i in 0..=64 {
        let x = lo + (hi - lo) * i as f64 / 64.0;
        if v.value(x) != 0.0 && (u.value(x) - 1.0).abs() > 1e-15 {
            return Err(Error::InvalidArgument(format!("U({x}) = {} but V({x}) != 0; U must equal 1 on supp V", u.value(x))));
        }
    }
    Ok(())
}
