//! The block sum `S(N, C)` after Poisson in `r` and Voronoi in `n`:
//!
//! `S(N,C) = (N^{1/2-it}/2π) Σ_± Σ_J Σ_{n₁²n₂ ≤ M} λ(n₂,n₁)/√n₂ Σ_{q,r} S(r̄, ±n₂; q/n₁)/(a q^{3/2}) ℐ_±(q, r, n₁²n₂)`
//!
//! with `ℐ_± = ∫ (n₁²n₂N/q³)^{-iτ} γ±(-1/2+iτ) W_J(τ) ℐ⋆⋆(q,r,τ) dτ`. Splitting
//! `ℐ⋆⋆ = ℐ₁ + ℐ₂` gives the per-`J` pieces `S₁,J` and `S₂,J`.

use super::{farey_a, PipelineConfig};
use crate::arith::{gcd, kloosterman, mod_inverse};
use crate::error::{Error, Result};
use crate::gl3::{gamma_pm, CoefficientTable, Sign};
use crate::oscillatory::quad::gk15_rule;
use crate::oscillatory::{build_partition, i1_main, integrate, istarstar_batch, PartitionPiece, QuadOptions, Shape, SmoothWeight, SpParams};
use crate::scalar::{compensated_sum, e};
use crate::sweep::try_ordered_map;
use crate::Cplx;
use std::f64::consts::{PI, TAU};

/// `|τ|` beyond which `V†(Nx/aq, 1/2 - iτ)` has no stationary point, times a margin.
const TAU_REACH: f64 = 6.0 * PI;
const MIN_PANELS: usize = 8;
const ISTAR_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SncTerm {
    /// Signed left end of the support of `W_J` (0 for the central piece).
    pub j: f64,
    pub s1: Cplx,
    pub s2: Cplx,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SncReport {
    pub c: f64,
    /// The `τ`-range covered by the partition of unity.
    pub tau_max: f64,
    /// Bound `M` on `n₁²n₂`.
    pub n_max: f64,
    pub terms: Vec<SncTerm>,
    pub s1: Cplx,
    pub s2: Cplx,
    /// `Σ_J (S₁,J + S₂,J)`.
    pub total: Cplx,
    /// The same quantity with `ℐ⋆⋆` integrated against `Σ_J W_J` in one pass.
    pub direct: Cplx,
    /// Kronrod–Gauss estimate of the `τ`-quadrature error of `direct` plus the inner `ℐ⋆⋆` errors.
    pub quad_err: f64,
    /// `N Q t^ε (N^{1/2}/Q^{5/2} + t^{1/2} Q^{1/2}/N)`.
    pub s2_envelope: f64,
    pub pairs: usize,
    pub tau_nodes: usize,
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    q: i64,
    r: i64,
    a: i64,
    r_bar: i64,
}

/// All `(q, r)` with `C ≤ q < 2C`, `q ≤ Q`, `1 ≤ |r| ≤ r_max(q)`, `(r, q) = 1`, and the
/// `a ∈ (Q, q + Q]` with `ā ≡ -r (mod q)`.
fn pairs(cfg: &PipelineConfig, c: f64) -> Vec<Pair> {
    let q_lo = (c.ceil() as i64).max(1);
    let q_hi = ((2.0 * c).ceil() as i64 - 1).min(cfg.q);
    let mut out = Vec::new();
    for q in q_lo..=q_hi {
        let rm = cfg.r_max(q);
        for r in (-rm..=rm).filter(|&r| r != 0) {
            if gcd(r, q) != 1 {
                continue;
            }
            let r_bar = if q == 1 { 0 } else { mod_inverse(r.rem_euclid(q), q).expect("coprime") };
            let a = farey_a(q, r, cfg.q).expect("coprime");
            out.push(Pair { q, r, a, r_bar });
        }
    }
    out
}

fn sp_params(cfg: &PipelineConfig, c: f64, p: &Pair, tau: f64) -> SpParams {
    SpParams { q: p.q, a: p.a, r: p.r, t: cfg.t, tau, n: cfg.n, c, q_farey: cfg.q as f64, eps: cfg.eps }
}

/// The partition used for the block `C`, and the `τ`-range it covers.
pub(crate) fn snc_partition(cfg: &PipelineConfig, c: f64) -> (f64, Vec<PartitionPiece>) {
    let reach = (TAU_REACH * cfg.n * cfg.t_eps() / (cfg.q as f64 * c)).max(1.5);
    let pieces = build_partition(reach, None);
    let ext = pieces.iter().map(|p| p.weight.support.1.abs().max(p.weight.support.0.abs())).fold(0.0, f64::max);
    (ext, pieces)
}

/// Composite Gauss–Kronrod grid with panels aligned to `breaks`.
struct TauGrid {
    nodes: Vec<f64>,
    wk: Vec<f64>,
    /// Kronrod minus Gauss weight.
    wd: Vec<f64>,
    /// Start index of each panel in `nodes`.
    panel_start: Vec<usize>,
}

impl TauGrid {
    fn new(mut breaks: Vec<f64>, per_unit: f64) -> Self {
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let rule = gk15_rule();
        let (mut nodes, mut wk, mut wd, mut panel_start) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let m = ((hi - lo) * per_unit).ceil().max(MIN_PANELS as f64) as usize;
            let h = (hi - lo) / m as f64;
            for p in 0..m {
                let c = lo + (p as f64 + 0.5) * h;
                panel_start.push(nodes.len());
                for &(x, k, g) in &rule {
                    nodes.push(c + 0.5 * h * x);
                    wk.push(0.5 * h * k);
                    wd.push(0.5 * h * (k - g));
                }
            }
        }
        TauGrid { nodes, wk, wd, panel_start }
    }

    /// Panels `[lo, hi)` whose centres lie inside `support`.
    fn panel_span(&self, support: (f64, f64)) -> (usize, usize) {
        let centre = |i: usize| {
            let end = self.panel_start.get(i + 1).copied().unwrap_or(self.nodes.len());
            0.5 * (self.nodes[self.panel_start[i]] + self.nodes[end - 1])
        };
        let n = self.panel_start.len();
        let lo = (0..n).find(|&i| centre(i) > support.0).unwrap_or(n);
        let hi = (lo..n).find(|&i| centre(i) >= support.1).unwrap_or(n);
        (lo, hi)
    }

    /// Kronrod value of `Σ f_k` over the panels in `span`.
    fn integrate_panels(&self, span: (usize, usize), f: impl Fn(usize) -> Cplx) -> Cplx {
        let (lo, hi) = span;
        if lo >= hi {
            return Cplx::new(0.0, 0.0);
        }
        let end = self.panel_start.get(hi).copied().unwrap_or(self.nodes.len());
        compensated_sum((self.panel_start[lo]..end).map(|j| f(j) * self.wk[j]))
    }

    /// Kronrod value and summed per-panel `|K - G|` of `Σ f_k`.
    fn integrate(&self, f: impl Fn(usize) -> Cplx) -> (Cplx, f64) {
        let mut parts = Vec::with_capacity(self.panel_start.len());
        let mut err = 0.0;
        for (i, &s) in self.panel_start.iter().enumerate() {
            let end = self.panel_start.get(i + 1).copied().unwrap_or(self.nodes.len());
            let (mut k, mut d) = (Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0));
            for j in s..end {
                let v = f(j);
                k += v * self.wk[j];
                d += v * self.wd[j];
            }
            parts.push(k);
            err += d.norm();
        }
        (compensated_sum(parts), err)
    }
}

fn plateau_breaks(w: &SmoothWeight<f64>) -> Vec<f64> {
    match w.shape {
        Shape::Plateau { lo, a, b, hi } => vec![lo, a, b, hi],
        _ => vec![w.support.0, w.support.1],
    }
}

struct Setup {
    tau_ext: f64,
    pieces: Vec<PartitionPiece>,
    pairs: Vec<Pair>,
    n_max: f64,
    /// `(n₁, n₂, λ(n₂, n₁))` with `n₁²n₂ ≤ M`.
    coeffs: Vec<(u64, u64, Cplx)>,
}

fn prepare(table: &CoefficientTable, cfg: &PipelineConfig, c: f64) -> Result<Setup> {
    cfg.check_desk()?;
    cfg.check_window()?;
    if !(c >= 1.0) || c > cfg.q as f64 {
        return Err(Error::InvalidArgument(format!("dyadic block C = {c} must lie in [1, Q]")));
    }
    let (tau_ext, pieces) = snc_partition(cfg, c);
    if tau_ext >= cfg.t {
        return Err(Error::WindowViolation(format!("tau range {tau_ext} reaches t = {}", cfg.t)));
    }
    let pairs = pairs(cfg, c);
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(format!("no (q, r) pairs in the block C = {c}")));
    }
    let n_max = cfg.n_max();
    if (table.truncation as f64) < n_max.floor() {
        return Err(Error::InsufficientData(format!("need λ(n₂, n₁) for n₁²n₂ ≤ {n_max}, table complete to {}", table.truncation)));
    }
    let mut coeffs = Vec::new();
    let m = n_max.floor() as u64;
    let mut n1 = 1u64;
    while n1 * n1 <= m {
        for n2 in 1..=m / (n1 * n1) {
            coeffs.push((n1, n2, table.lambda(n2, n1)?));
        }
        n1 += 1;
    }
    Ok(Setup { tau_ext, pieces, pairs, n_max, coeffs })
}

/// Cycles per unit `τ` of the integrands: the `(nN/q³)^{-iτ}` twist, the Stirling phase of
/// `γ±` and a margin for `ℐ⋆⋆`.
fn tau_frequency(cfg: &PipelineConfig, s: &Setup) -> f64 {
    let (mut lmax, n) = (0.0f64, cfg.n);
    for p in &s.pairs {
        let q3 = (p.q as f64).powi(3);
        lmax = lmax.max((n / q3).ln().abs()).max((s.n_max.max(1.0) * n / q3).ln().abs());
    }
    (lmax + 3.0 * (1.0 + s.tau_ext / TAU).ln() + 3.0) / TAU
}

fn coefficient(pair: &Pair, n1: u64, n2: u64, lambda: Cplx, sign: Sign) -> Cplx {
    let m = pair.q / n1 as i64;
    let k = kloosterman(pair.r_bar, sign.as_f64() as i64 * n2 as i64, m);
    lambda / (n2 as f64).sqrt() * k / (pair.a as f64 * (pair.q as f64).powf(1.5))
}

fn gamma_values(table: &CoefficientTable, taus: &[f64]) -> Result<[Vec<Cplx>; 2]> {
    let mut out = [Vec::with_capacity(taus.len()), Vec::with_capacity(taus.len())];
    for (i, sign) in Sign::BOTH.into_iter().enumerate() {
        for &t in taus {
            out[i].push(gamma_pm(Cplx::new(-0.5, t), sign, &table.params)?);
        }
    }
    Ok(out)
}

/// Assembles `S₁,J` and `S₂,J` for every `J` in the block `C`, with `U`, `V` the weights of the
/// `r`- and `n`-sums.
pub fn snc_assemble(
    table: &CoefficientTable,
    cfg: &PipelineConfig,
    c: f64,
    u: &SmoothWeight<f64>,
    v: &SmoothWeight<f64>,
) -> Result<SncReport> {
    let s = prepare(table, cfg, c)?;
    let mut breaks = vec![-s.tau_ext, 0.0, s.tau_ext];
    for p in &s.pieces {
        breaks.extend(plateau_breaks(&p.weight));
    }
    for pr in &s.pairs {
        // ℐ₁ switches off where the stationary point leaves (0, 1]
        let t0 = sp_params(cfg, c, pr, 0.0).tau0();
        if t0.abs() < s.tau_ext {
            breaks.push(t0);
        }
    }
    let grid = TauGrid::new(breaks, 2.0 * tau_frequency(cfg, &s));
    let k_nodes = grid.nodes.len();

    let projected = s.pairs.len() * k_nodes * (s.coeffs.len() + s.pieces.len());
    if projected > cfg.node_cap.saturating_mul(100) {
        return Err(Error::BudgetExceeded(format!(
            "projected {projected} integrand evaluations ({} pairs x {k_nodes} tau nodes) exceed 100 x cap {}",
            s.pairs.len(),
            cfg.node_cap
        )));
    }
    for pr in &s.pairs {
        SpParams::validate(&sp_params(cfg, c, pr, 0.0))?;
    }

    let gam = gamma_values(table, &grid.nodes)?;
    let wj: Vec<Vec<f64>> = s.pieces.iter().map(|p| grid.nodes.iter().map(|&x| p.weight.value(x)).collect()).collect();
    let spans: Vec<(usize, usize)> = s.pieces.iter().map(|p| grid.panel_span(p.weight.support)).collect();
    let wsum: Vec<f64> = (0..k_nodes).map(|k| wj.iter().map(|w| w[k]).sum()).collect();

    struct PairOut {
        s1: Vec<Cplx>,
        s2: Vec<Cplx>,
        direct: Cplx,
        err: f64,
    }
    let per_pair = try_ordered_map(&s.pairs, |pr| -> Result<PairOut> {
        let batch = istarstar_batch(&sp_params(cfg, c, pr, 0.0), &grid.nodes, u, v, ISTAR_TOL)?;
        let istar: Vec<Cplx> = batch.iter().map(|r| r.value).collect();
        let istar_err: Vec<f64> = batch.iter().map(|r| r.err_est).collect();
        let i1: Vec<Cplx> = grid.nodes.iter().map(|&tau| i1_main(&sp_params(cfg, c, pr, tau), v)).collect();
        let q3 = (pr.q as f64).powi(3);
        let mut s1 = vec![Cplx::new(0.0, 0.0); s.pieces.len()];
        let mut s2 = vec![Cplx::new(0.0, 0.0); s.pieces.len()];
        let (mut direct, mut err) = (Vec::new(), 0.0);
        for &(n1, n2, lambda) in &s.coeffs {
            if pr.q % n1 as i64 != 0 {
                continue;
            }
            let ln_n = ((n1 * n1 * n2) as f64 * cfg.n / q3).ln();
            let twist: Vec<Cplx> = grid.nodes.iter().map(|&t| e(-t * ln_n / TAU)).collect();
            for (si, sign) in Sign::BOTH.into_iter().enumerate() {
                let coef = coefficient(pr, n1, n2, lambda, sign);
                if coef == Cplx::new(0.0, 0.0) {
                    continue;
                }
                let g = &gam[si];
                let base: Vec<Cplx> = (0..k_nodes).map(|k| twist[k] * g[k]).collect();
                for (pi, w) in wj.iter().enumerate() {
                    let a1 = grid.integrate_panels(spans[pi], |k| base[k] * i1[k] * w[k]);
                    let a2 = grid.integrate_panels(spans[pi], |k| base[k] * (istar[k] - i1[k]) * w[k]);
                    s1[pi] += coef * a1;
                    s2[pi] += coef * a2;
                }
                let (d, de) = grid.integrate(|k| base[k] * istar[k] * wsum[k]);
                let inner: f64 = (0..k_nodes).map(|k| grid.wk[k].abs() * g[k].norm() * istar_err[k] * wsum[k]).sum();
                direct.push(coef * d);
                err += coef.norm() * (de + inner);
            }
        }
        Ok(PairOut { s1, s2, direct: compensated_sum(direct), err })
    })?;

    let pref = e(-cfg.t * cfg.n.ln() / TAU) * (cfg.n.sqrt() / TAU);
    let mut terms = Vec::with_capacity(s.pieces.len());
    for (pi, piece) in s.pieces.iter().enumerate() {
        let s1 = pref * compensated_sum(per_pair.iter().map(|o| o.s1[pi]));
        let s2 = pref * compensated_sum(per_pair.iter().map(|o| o.s2[pi]));
        terms.push(SncTerm { j: piece.j, s1, s2 });
    }
    let s1 = compensated_sum(terms.iter().map(|t| t.s1));
    let s2 = compensated_sum(terms.iter().map(|t| t.s2));
    let direct = pref * compensated_sum(per_pair.iter().map(|o| o.direct));
    let (n, q, te) = (cfg.n, cfg.q as f64, cfg.t_eps());
    Ok(SncReport {
        c,
        tau_max: s.tau_ext,
        n_max: s.n_max,
        terms,
        s1,
        s2,
        total: s1 + s2,
        direct,
        quad_err: pref.norm() * per_pair.iter().map(|o| o.err).sum::<f64>(),
        s2_envelope: n * q * te * (n.sqrt() / q.powf(2.5) + cfg.t.sqrt() * q.sqrt() / n),
        pairs: s.pairs.len(),
        tau_nodes: k_nodes,
    })
}

/// `S₁,J` for the piece starting at `j`, recomputed with adaptive quadrature over the support of
/// `W_J` (split where `ℐ₁` switches off). Independent of the shared grid in [`snc_assemble`].
pub fn s1_term_adaptive(table: &CoefficientTable, cfg: &PipelineConfig, c: f64, v: &SmoothWeight<f64>, j: f64) -> Result<Cplx> {
    let s = prepare(table, cfg, c)?;
    let piece = s
        .pieces
        .iter()
        .find(|p| (p.j - j).abs() < 1e-12)
        .ok_or_else(|| Error::InvalidArgument(format!("no partition piece with J = {j}")))?;
    let (lo, hi) = piece.weight.support;
    let mut acc = Vec::new();
    for pr in &s.pairs {
        let t0 = sp_params(cfg, c, pr, 0.0).tau0();
        let mut cuts = vec![lo, hi];
        if t0 > lo && t0 < hi {
            cuts.push(t0);
        }
        cuts.sort_by(f64::total_cmp);
        let q3 = (pr.q as f64).powi(3);
        for &(n1, n2, lambda) in &s.coeffs {
            if pr.q % n1 as i64 != 0 {
                continue;
            }
            let ln_n = ((n1 * n1 * n2) as f64 * cfg.n / q3).ln();
            for sign in Sign::BOTH {
                let coef = coefficient(pr, n1, n2, lambda, sign);
                if coef == Cplx::new(0.0, 0.0) {
                    continue;
                }
                let f = |tau: f64| -> Cplx {
                    let w = piece.weight.value(tau);
                    if w == 0.0 {
                        return Cplx::new(0.0, 0.0);
                    }
                    let i1 = i1_main(&sp_params(cfg, c, pr, tau), v);
                    if i1 == Cplx::new(0.0, 0.0) {
                        return i1;
                    }
                    let g = gamma_pm(Cplx::new(-0.5, tau), sign, &table.params).unwrap_or(Cplx::new(f64::NAN, 0.0));
                    e(-tau * ln_n / TAU) * g * i1 * w
                };
                for w in cuts.windows(2) {
                    let opts = QuadOptions::new(1e-13).with_panels(4);
                    acc.push(coef * integrate(f, w[0], w[1], &opts)?.value);
                }
            }
        }
    }
    let pref = e(-cfg.t * cfg.n.ln() / TAU) * (cfg.n.sqrt() / TAU);
    Ok(pref * compensated_sum(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_satisfy_congruence() {
        let cfg = PipelineConfig::new(40.0, 50.0, 6).unwrap();
        let ps = pairs(&cfg, 4.0);
        assert!(!ps.is_empty());
        for p in ps {
            assert!((4..=6).contains(&p.q));
            assert!(p.a > 6 && p.a <= p.q + 6);
            assert_eq!(gcd(p.a, p.q), 1);
            assert_eq!((mod_inverse(p.a, p.q).unwrap() + p.r).rem_euclid(p.q), 0);
        }
    }

    #[test]
    fn grid_integrates_polynomials() {
        let g = TauGrid::new(vec![-3.0, 0.5, 2.0], 1.0);
        let (v, err) = g.integrate(|k| Cplx::new(g.nodes[k].powi(3), 1.0));
        assert!((v - Cplx::new((16.0 - 81.0) / 4.0, 5.0)).norm() < 1e-12);
        assert!(err < 1e-12);
    }
}
