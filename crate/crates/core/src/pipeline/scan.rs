//! Empirical scans of `|S(N)|` against `N^{3/4} t^{3/10}` with `Q = N^{1/2}/t^{1/5}`.

use super::direct::{require_depth, summation_range};
use super::{s_direct, s_direct_abs, PipelineConfig, DESK_N_MAX, DESK_T_MAX};
use crate::error::{Error, Result};
use crate::gl3::CoefficientTable;
use crate::oscillatory::SmoothWeight;
use crate::sweep::try_ordered_map;
use serde::Serialize;
use std::fmt::Write as _;

pub const SCAN_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: f64,
    pub t: f64,
    pub q: i64,
    /// `round(N^{1/2}/t^{1/5})` before clamping.
    pub q_nominal: i64,
    pub clamped: bool,
    /// No integer lies in `(N/t^{1-ε}, √N)`.
    pub window_empty: bool,
    pub abs_s: f64,
    pub envelope: f64,
    pub ratio: f64,
    /// Number of `n` in the support of `V(n/N)`.
    pub terms: u64,
    /// Rounding budget of the direct sum; the weight has compact support so there is no tail.
    pub budget: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanMetadata {
    pub seed: Option<u64>,
    pub eps: f64,
    pub table_source: String,
    pub table_truncation: u64,
    pub first_row_depth: u64,
    /// Wall-clock seconds; left empty when byte-stable output is wanted.
    pub runtime_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub rows: Vec<ScanRow>,
    pub metadata: ScanMetadata,
}

impl ScanReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    /// Header row plus one line per `N`, floats with 17 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["schema_version", "n", "t", "q", "q_nominal", "clamped", "window_empty", "abs_s", "envelope", "ratio", "terms", "budget"])
            .map_err(io)?;
        for r in &self.rows {
            let f = |x: f64| format!("{x:.16e}");
            w.write_record([
                self.schema_version.to_string(),
                f(r.n),
                f(r.t),
                r.q.to_string(),
                r.q_nominal.to_string(),
                r.clamped.to_string(),
                r.window_empty.to_string(),
                f(r.abs_s),
                f(r.envelope),
                f(r.ratio),
                r.terms.to_string(),
                f(r.budget),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    /// Short human-readable table.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let flag = if r.window_empty { " window-empty" } else if r.clamped { " clamped" } else { "" };
            let _ = writeln!(s, "N={:<8} t={:<6} Q={:<3} |S|={:.6e} env={:.6e} ratio={:.4}{flag}", r.n, r.t, r.q, r.abs_s, r.envelope, r.ratio);
        }
        s
    }
}

/// Integer `Q` for `N`: the nominal choice clamped into the open window, and whether it had to move.
fn choose_q(n: f64, t: f64, eps: f64) -> (i64, i64, bool, bool) {
    let nominal = (n.sqrt() / t.powf(0.2)).round() as i64;
    let lo = n / t.powf(1.0 - eps);
    let hi = n.sqrt();
    let q_lo = lo.floor() as i64 + 1;
    let q_hi = hi.ceil() as i64 - 1;
    if q_lo > q_hi || q_hi < 1 {
        return (nominal.max(1), nominal, nominal.max(1) != nominal, true);
    }
    let q = nominal.clamp(q_lo.max(1), q_hi);
    (q, nominal, q != nominal, false)
}

/// One row per `N` in `n_grid`, in grid order.
pub fn bound_scan(table: &CoefficientTable, t: f64, n_grid: &[f64], v: &SmoothWeight<f64>, seed: Option<u64>) -> Result<ScanReport> {
    if n_grid.iter().any(|&n| n > DESK_N_MAX) || t > DESK_T_MAX {
        return Err(Error::WindowViolation(format!("desk-scale guard: need N <= {DESK_N_MAX}, t <= {DESK_T_MAX}")));
    }
    let rows = try_ordered_map(n_grid, |&n| -> Result<ScanRow> {
        let eps = super::DEFAULT_EPS;
        let (q, q_nominal, clamped, window_empty) = choose_q(n, t, eps);
        let cfg = PipelineConfig::new(n, t, q)?;
        require_depth(table, &cfg)?;
        let s = s_direct(table, &cfg, v)?;
        let majorant = s_direct_abs(table, &cfg, v)?;
        let (lo, hi) = summation_range(n, v);
        let envelope = n.powf(0.75) * t.powf(0.3);
        Ok(ScanRow {
            n,
            t,
            q,
            q_nominal,
            clamped,
            window_empty,
            abs_s: s.norm(),
            envelope,
            ratio: s.norm() / envelope,
            terms: (hi + 1).saturating_sub(lo),
            budget: 64.0 * f64::EPSILON * majorant,
        })
    })?;
    Ok(ScanReport {
        schema_version: SCAN_SCHEMA_VERSION,
        rows,
        metadata: ScanMetadata {
            seed,
            eps: super::DEFAULT_EPS,
            table_source: table.source.clone(),
            table_truncation: table.truncation,
            first_row_depth: table.first_row_depth(),
            runtime_s: None,
        },
    })
}
