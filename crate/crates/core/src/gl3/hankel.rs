//! The GL(3) Hankel transforms `H±(y) = (1/2πi) ∫_{(σ)} y^{-s} γ±(s) h̃(-s) ds`.
//!
//! The vertical line `s = σ + iv`, `|v| ≤ τ_max`, is covered by uniform Gauss–Kronrod
//! panels narrow enough for the combined phase `-v ln(x y) + 3 v ln(|v|/2πe)`. The values
//! `γ±(s) h̃(-s)` are computed once per kernel, so one kernel serves many `y`.
//! `h̃(-σ - iv) = ∫ h(e^u) e^{-σu} e^{-ivu} du` is evaluated by the trapezoid rule in
//! `u = ln x`, which is spectrally accurate for smooth compactly supported `h`; the
//! difference to the half-resolution rule is its error estimate.

use super::gamma_factor::{gamma_pm, Sign};
use super::params::GL3Params;
use crate::error::{Error, Result};
use crate::oscillatory::quad::gk15_rule;
use crate::oscillatory::{OscResult, SmoothWeight};
use crate::Cplx;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Target for the Stirling-estimated truncation tail.
pub const TAIL_TARGET: f64 = 1e-10;
const TAU_MAX_CAP: f64 = 8192.0;
const TAU_START: f64 = 16.0;
const MAX_GRID: usize = 1 << 20;

/// Samples of `u ↦ h(e^u) e^{-σu}` for the Mellin transform along a vertical line.
struct LogGrid {
    u0: f64,
    du: f64,
    g: Vec<f64>,
}

impl LogGrid {
    /// Halves the step from `π/(2τ)` until the half-step comparison at `v ∈ {0, τ/2, τ}`
    /// is at rounding level.
    fn new(h: &SmoothWeight<f64>, sigma: f64, tau: f64) -> Self {
        let mut du = PI / (2.0 * tau.max(8.0));
        loop {
            let g = Self::with_step(h, sigma, du);
            let mass: f64 = g.g.iter().map(|x| x.abs()).sum();
            let worst = [0.0, 0.5 * tau, tau].iter().map(|&v| g.eval(v).1).fold(0.0, f64::max);
            if worst <= 1e-14 * mass || g.g.len() > MAX_GRID {
                return g;
            }
            du *= 0.5;
        }
    }

    fn with_step(h: &SmoothWeight<f64>, sigma: f64, du0: f64) -> Self {
        let (lo, hi) = (h.support.0.ln(), h.support.1.ln());
        let m = (((hi - lo) / du0).ceil() as usize).max(64);
        let m = m + m % 2;
        let du = (hi - lo) / m as f64;
        let g = (0..=m)
            .map(|j| {
                let u = lo + j as f64 * du;
                h.value(u.exp()) * (-sigma * u).exp() * du
            })
            .collect();
        LogGrid { u0: lo, du, g }
    }

    /// `(h̃(-σ - iv), error estimate)`.
    fn eval(&self, v: f64) -> (Cplx, f64) {
        let step = Cplx::from_polar(1.0, -v * self.du);
        let mut z = Cplx::new(1.0, 0.0);
        let (mut full, mut even) = (Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0));
        for (j, &g) in self.g.iter().enumerate() {
            if j % 64 == 0 {
                z = Cplx::from_polar(1.0, -v * (j as f64) * self.du);
            }
            let t = z * g;
            full += t;
            if j % 2 == 0 {
                even += t;
            }
            z *= step;
        }
        let base = Cplx::from_polar(1.0, -v * self.u0);
        let full = full * base;
        let half = even * base * 2.0;
        (full, (full - half).norm())
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    v: f64,
    wk: f64,
    wg: f64,
    /// `γ±(σ+iv) h̃(-σ-iv) / 2π`.
    f: Cplx,
    ferr: f64,
}

/// Precomputed vertical-line data for `H±` with a fixed weight `h`, sign and contour.
#[derive(Clone, Debug)]
pub struct HankelKernel {
    pub sign: Sign,
    pub sigma: f64,
    pub tau_max: f64,
    /// Truncation tail at `y = 1`; scales as `y^{-σ}`.
    pub tail: f64,
    pub y_range: (f64, f64),
    nodes: Vec<Node>,
}

fn check_contour(sigma: f64, p: &GL3Params) -> Result<()> {
    let floor = -1.0 + p.max_neg_re_alpha();
    if !(sigma > floor) || sigma.abs() > 4.0 {
        return Err(Error::ContourOutOfRange {
            sigma,
            detail: format!("need {floor} < σ and |σ| ≤ 4"),
        });
    }
    Ok(())
}

fn integrand_at(v: f64, grid: &LogGrid, sign: Sign, p: &GL3Params, sigma: f64) -> Result<(Cplx, f64)> {
    let g = gamma_pm(Cplx::new(sigma, v), sign, p)?;
    let (ht, herr) = grid.eval(v);
    Ok((g * ht / TAU, g.norm() * herr / TAU))
}

/// Tail `∫_{|v|>τ} |F|` extrapolated from the decay of the envelope of `|F|` between `τ/2` and `τ`.
fn tail_estimate(grid: &LogGrid, sign: Sign, p: &GL3Params, sigma: f64, tau: f64) -> Result<f64> {
    let env = |c: f64| -> Result<f64> {
        let mut m: f64 = 0.0;
        for j in 0..8 {
            let v = c * (1.0 + j as f64 / 16.0);
            m = m.max(integrand_at(v, grid, sign, p, sigma)?.0.norm());
            m = m.max(integrand_at(-v, grid, sign, p, sigma)?.0.norm());
        }
        Ok(m)
    };
    let (near, far) = (env(tau / 2.0)?, env(tau)?);
    if far == 0.0 {
        return Ok(0.0);
    }
    let k = (near / far).log2();
    if !(k > 1.5) {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * far * tau / (k - 1.0))
}

impl HankelKernel {
    /// Builds the kernel for `y ∈ y_range`. With `tau_max = None` the truncation grows
    /// until the estimated tail is below [`TAIL_TARGET`].
    pub fn new(
        h: &SmoothWeight<f64>,
        sign: Sign,
        p: &GL3Params,
        sigma: f64,
        tau_max: Option<f64>,
        y_range: (f64, f64),
    ) -> Result<Self> {
        check_contour(sigma, p)?;
        let (lo, hi) = h.support;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidArgument("weight support must lie in (0, ∞)".into()));
        }
        let edge = 1e-14 * h.sup_norm();
        if h.value(lo).abs() > edge || h.value(hi).abs() > edge {
            return Err(Error::InvalidArgument("weight must vanish at the ends of its support".into()));
        }
        if !(y_range.0 > 0.0 && y_range.1 >= y_range.0) {
            return Err(Error::InvalidArgument("y range must be positive".into()));
        }
        let (tau, tail) = match tau_max {
            Some(t) => {
                let grid = LogGrid::new(h, sigma, t);
                (t, tail_estimate(&grid, sign, p, sigma, t)?)
            }
            None => {
                let probe = LogGrid::new(h, sigma, TAU_MAX_CAP);
                let mut t = TAU_START;
                loop {
                    let tail = tail_estimate(&probe, sign, p, sigma, t)?;
                    if tail < TAIL_TARGET {
                        break (t, tail);
                    }
                    if t >= TAU_MAX_CAP {
                        return Err(Error::QuadratureNonConvergence { tol: TAIL_TARGET, err_est: tail, nodes: 0 });
                    }
                    t = (t * 1.25).min(TAU_MAX_CAP);
                }
            }
        };
        let grid = LogGrid::new(h, sigma, tau);
        let lx = [lo.ln(), hi.ln()];
        let ly = [y_range.0.ln(), y_range.1.ln()];
        let spread = lx.iter().flat_map(|a| ly.iter().map(move |b| (a + b).abs())).fold(0.0, f64::max);
        let freq = spread + 3.0 * (tau.max(TAU) / TAU).ln() + 3.0;
        let panels = ((2.0 * tau * freq).ceil() as usize).max(8);
        let width = 2.0 * tau / panels as f64;
        let rule = gk15_rule();
        let nodes: Vec<Node> = (0..panels)
            .into_par_iter()
            .map(|k| {
                let c = -tau + (k as f64 + 0.5) * width;
                rule.iter()
                    .map(|&(x, wk, wg)| {
                        let v = c + 0.5 * width * x;
                        let (f, ferr) = integrand_at(v, &grid, sign, p, sigma)?;
                        Ok(Node { v, wk: wk * 0.5 * width, wg: wg * 0.5 * width, f, ferr })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(HankelKernel { sign, sigma, tau_max: tau, tail, y_range, nodes })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `H±(y)` with error estimate (panel `|K15 - G7|`, Mellin-transform error and tail).
    pub fn eval(&self, y: f64) -> Result<OscResult> {
        let (a, b) = self.y_range;
        if !(y >= a * (1.0 - 1e-12) && y <= b * (1.0 + 1e-12)) {
            return Err(Error::InvalidArgument(format!("y = {y} outside kernel range [{a}, {b}]")));
        }
        let ly = y.ln();
        let scale = y.powf(-self.sigma);
        let mut total = Cplx::new(0.0, 0.0);
        let mut err = 0.0;
        for panel in self.nodes.chunks(15) {
            let (mut k, mut g) = (Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0));
            for n in panel {
                let t = n.f * Cplx::from_polar(1.0, -n.v * ly);
                k += t * n.wk;
                g += t * n.wg;
                err += n.wk * n.ferr;
            }
            total += k;
            err += (k - g).norm();
        }
        Ok(OscResult {
            value: total * scale,
            err_est: (err + self.tail) * scale,
            node_count: self.nodes.len(),
        })
    }
}

/// `H±(y)` for a single `y`.
pub fn h_pm(
    y: f64,
    h: &SmoothWeight<f64>,
    sign: Sign,
    p: &GL3Params,
    contour_sigma: f64,
    tau_max: Option<f64>,
) -> Result<OscResult> {
    HankelKernel::new(h, sign, p, contour_sigma, tau_max, (y, y))?.eval(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillatory::fourier_mellin_exact;

    #[test]
    fn log_grid_matches_adaptive_mellin() {
        let h = SmoothWeight::bump(2.0, 9.0);
        let grid = LogGrid::new(&h, -0.5, 200.0);
        for &v in &[0.0, 3.5, -40.0, 150.0] {
            let (ht, err) = grid.eval(v);
            let exact = fourier_mellin_exact(&h, 0.0, Cplx::new(0.5, -v), 1e-14).unwrap().value;
            assert!((ht - exact).norm() < 1e-12, "v={v}: {ht} vs {exact}");
            assert!(err < 1e-10);
        }
    }

    #[test]
    fn contour_must_be_admissible() {
        let p = GL3Params::from_real(1.0 / 3.0, 1.0 / 3.0);
        let h = SmoothWeight::bump(1.0, 3.0);
        assert!(matches!(h_pm(1.0, &h, Sign::Plus, &p, -1.2, Some(20.0)), Err(Error::ContourOutOfRange { .. })));
    }
}
