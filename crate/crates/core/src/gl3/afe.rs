//! Approximate functional equation
//! `L(s) = Σ λ(1,n) n^{-s} V_s(n) + [γ(1-s, π̃)/γ(s, π)] Σ λ(n,1) n^{-(1-s)} Ṽ_{1-s}(n)`,
//! `V_s(y) = (1/2πi) ∫_{(c)} y^{-u} G(u) γ(s+u, π)/γ(s, π) du/u`, with `γ(s, π) = Π Γ_ℝ(s - α_i)`.

use super::coeffs::CoefficientTable;
use super::gamma_factor::ln_completed_gamma;
use super::params::GL3Params;
use crate::error::{Error, Result};
use crate::oscillatory::quad::gk15_rule;
use crate::oscillatory::OscResult;
use crate::Cplx;
use std::f64::consts::TAU;

/// Exponent `ε` in the length heuristic `N_max ≥ (1 + |t|)^{3/2 + ε}`.
pub const LENGTH_EPS: f64 = 0.05;
/// Integrand magnitude below which the vertical line is truncated.
const LINE_TAIL: f64 = 1e-17;

/// Even holomorphic factor `G` with `G(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GFactor {
    /// `exp(a u²)`.
    Gaussian { scale: f64 },
    /// `exp(a u²) · [((u² - (1-s)²)/(-(1-s)²)) ((u² - s²)/(-s²))]³`, vanishing to order 3 at
    /// `u = ±(1-s)` and `u = ±s`, where the completed `ζ³` has its triple poles.
    PoleKilling { scale: f64 },
}

impl Default for GFactor {
    fn default() -> Self {
        GFactor::Gaussian { scale: 1.0 }
    }
}

impl GFactor {
    /// `PoleKilling` with `a = 1/4`; a wider Gaussian keeps `V_s(y)` small from a shorter length on.
    pub fn pole_killing() -> Self {
        GFactor::PoleKilling { scale: 0.25 }
    }

    pub fn scale(&self) -> f64 {
        match *self {
            GFactor::Gaussian { scale } | GFactor::PoleKilling { scale } => scale,
        }
    }

    pub fn eval(&self, u: Cplx, s: Cplx) -> Cplx {
        let g = (u * u * self.scale()).exp();
        match self {
            GFactor::Gaussian { .. } => g,
            GFactor::PoleKilling { .. } => {
                let one = Cplx::new(1.0, 0.0);
                let a = (one - s) * (one - s);
                let b = s * s;
                let f = ((u * u - a) / -a) * ((u * u - b) / -b);
                g * f * f * f
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AfeConfig {
    pub s: Cplx,
    pub g: GFactor,
    /// Abscissa `c > 0` of the `u`-line.
    pub contour_sigma: f64,
    /// Length `N_max` of both sums.
    pub truncation: u64,
}

impl AfeConfig {
    pub fn new(s: Cplx, truncation: u64) -> Self {
        AfeConfig { s, g: GFactor::default(), contour_sigma: 1.0, truncation }
    }

    pub fn with_g(mut self, g: GFactor) -> Self {
        self.g = g;
        self
    }

    pub fn with_contour(mut self, c: f64) -> Self {
        self.contour_sigma = c;
        self
    }

    /// `(1 + |t|)^{3/2 + ε}`.
    pub fn suggested_length(t: f64) -> u64 {
        (1.0 + t.abs()).powf(1.5 + LENGTH_EPS).ceil() as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AfeValue {
    pub value: Cplx,
    pub err_est: f64,
    pub first_sum: Cplx,
    /// The reflected sum including its gamma-factor ratio; `None` for non-self-dual tables.
    pub second_sum: Option<Cplx>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
struct Node {
    v: f64,
    wk: f64,
    wg: f64,
    f: Cplx,
}

/// Vertical-line data for `V_s(y)` at a fixed `s`, `G` and contour.
#[derive(Clone, Debug)]
pub struct AfeKernel {
    pub c: f64,
    pub v_max: f64,
    pub y_max: f64,
    nodes: Vec<Node>,
}

impl AfeKernel {
    /// `g_at` is the point at which a pole-killing `G` is anchored (the `s` of the first sum).
    pub fn new(s: Cplx, p: &GL3Params, g: GFactor, g_at: Cplx, c: f64, y_max: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 4.0) {
            return Err(Error::ContourOutOfRange { sigma: c, detail: "need 0 < c ≤ 4".into() });
        }
        let base = ln_completed_gamma(s, p)?;
        let f = |v: f64| -> Result<Cplx> {
            let u = Cplx::new(c, v);
            let ratio = (ln_completed_gamma(s + u, p)? - base).exp();
            Ok(g.eval(u, g_at) * ratio / u / TAU)
        };
        let mut v_max: f64 = 4.0;
        while f(v_max)?.norm().max(f(-v_max)?.norm()) > LINE_TAIL {
            v_max *= 1.25;
            if v_max > 400.0 {
                return Err(Error::QuadratureNonConvergence { tol: LINE_TAIL, err_est: f(v_max)?.norm(), nodes: 0 });
            }
        }
        let freq = y_max.max(1.0).ln() + 1.5 * (s.im.abs() + v_max + 2.0).ln() + 2.0 * g.scale() * c + 2.0;
        let panels = ((2.0 * v_max * freq).ceil() as usize).max(16);
        let width = 2.0 * v_max / panels as f64;
        let rule = gk15_rule();
        let mut nodes = Vec::with_capacity(panels * 15);
        for k in 0..panels {
            let mid = -v_max + (k as f64 + 0.5) * width;
            for &(x, wk, wg) in &rule {
                let v = mid + 0.5 * width * x;
                nodes.push(Node { v, wk: wk * 0.5 * width, wg: wg * 0.5 * width, f: f(v)? });
            }
        }
        Ok(AfeKernel { c, v_max, y_max, nodes })
    }

    /// `V_s(y)` with the panel `|K15 - G7|` error estimate.
    pub fn eval(&self, y: f64) -> OscResult {
        let ly = y.ln();
        let mut total = Cplx::new(0.0, 0.0);
        let mut err = 0.0;
        for panel in self.nodes.chunks(15) {
            let (mut k, mut g) = (Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0));
            for n in panel {
                let t = n.f * Cplx::from_polar(1.0, -n.v * ly);
                k += t * n.wk;
                g += t * n.wg;
            }
            total += k;
            err += (k - g).norm();
        }
        let scale = y.powf(-self.c);
        OscResult { value: total * scale, err_est: err * scale, node_count: self.nodes.len() }
    }
}

fn dirichlet_sum(
    coef: impl Fn(u64) -> Result<Cplx>,
    s: Cplx,
    kernel: &AfeKernel,
    n_max: u64,
) -> Result<(Cplx, f64, f64)> {
    let mut acc = Cplx::new(0.0, 0.0);
    let mut err = 0.0;
    let mut last = 0.0f64;
    for n in 1..=n_max {
        let a = coef(n)?;
        if a == Cplx::new(0.0, 0.0) {
            continue;
        }
        let x = n as f64;
        let w = a * (-s * x.ln()).exp();
        let v = kernel.eval(x);
        let term = w * v.value;
        acc += term;
        err += w.norm() * v.err_est;
        if 2 * n > n_max {
            last = last.max(term.norm());
        }
    }
    Ok((acc, err, last * n_max as f64))
}

/// `L(s, π)` by the approximate functional equation.
pub fn afe_value(table: &CoefficientTable, p: &GL3Params, cfg: &AfeConfig) -> Result<AfeValue> {
    let s = cfg.s;
    let n_max = cfg.truncation;
    if n_max < 1 {
        return Err(Error::InvalidArgument("truncation must be ≥ 1".into()));
    }
    if table.first_row_depth() < n_max {
        return Err(Error::InsufficientData(format!(
            "λ(1,n) known up to {}, truncation is {n_max}",
            table.first_row_depth()
        )));
    }
    let mut warnings = Vec::new();
    let suggested = AfeConfig::suggested_length(s.im);
    if n_max < suggested {
        warnings.push(format!("truncation {n_max} is below (1+|t|)^(3/2+eps) = {suggested}"));
    }
    if !table.cuspidal && matches!(cfg.g, GFactor::Gaussian { .. }) {
        warnings.push("non-cuspidal table with a Gaussian G: polar term R is not included".into());
    }
    let one = Cplx::new(1.0, 0.0);
    let y_max = n_max as f64;
    let k1 = AfeKernel::new(s, p, cfg.g, s, cfg.contour_sigma, y_max)?;
    let (first, e1, t1) = dirichlet_sum(|n| table.lambda(1, n), s, &k1, n_max)?;
    let mut value = first;
    let mut err = e1 + t1;
    let mut second_sum = None;
    if table.self_dual {
        if table.first_column_depth() < n_max {
            return Err(Error::InsufficientData(format!(
                "λ(n,1) known up to {}, truncation is {n_max}",
                table.first_column_depth()
            )));
        }
        let dual = p.dual();
        let factor = (ln_completed_gamma(one - s, &dual)? - ln_completed_gamma(s, p)?).exp();
        let k2 = AfeKernel::new(one - s, &dual, cfg.g, s, cfg.contour_sigma, y_max)?;
        let (second, e2, t2) = dirichlet_sum(|n| table.lambda(n, 1), one - s, &k2, n_max)?;
        let second = second * factor;
        value += second;
        err += (e2 + t2) * factor.norm();
        second_sum = Some(second);
    } else {
        warnings.push("table is not self-dual: reflected sum omitted".into());
    }
    err += 64.0 * f64::EPSILON * value.norm();
    Ok(AfeValue { value, err_est: err, first_sum: first, second_sum, warnings })
}
