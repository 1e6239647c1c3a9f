use super::PipelineConfig;
use crate::error::{Error, Result};
use crate::gl3::CoefficientTable;
use crate::oscillatory::SmoothWeight;
use crate::scalar::{compensated_sum, e};
use crate::Cplx;
use std::f64::consts::TAU;

/// Integers `n ≥ 1` with `n/N` in the support of `v`.
pub fn summation_range(n_len: f64, v: &SmoothWeight<f64>) -> (u64, u64) {
    let lo = (n_len * v.support.0).ceil().max(1.0) as u64;
    let hi = (n_len * v.support.1).floor().max(0.0) as u64;
    (lo, hi)
}

pub(crate) fn require_depth(table: &CoefficientTable, cfg: &PipelineConfig) -> Result<()> {
    let need = (3.0 * cfg.n).ceil() as u64;
    let have = table.first_row_depth();
    if have < need {
        return Err(Error::InsufficientData(format!("first row stored up to {have}, need 3N = {need}")));
    }
    Ok(())
}

/// `Σ λ(1,n) n^{-it} V(n/N)` by direct summation.
pub fn s_direct(table: &CoefficientTable, cfg: &PipelineConfig, v: &SmoothWeight<f64>) -> Result<Cplx> {
    require_depth(table, cfg)?;
    let (lo, hi) = summation_range(cfg.n, v);
    let k = cfg.t / TAU;
    let mut terms = Vec::with_capacity((hi + 1).saturating_sub(lo) as usize);
    for n in lo..=hi {
        let w = v.value(n as f64 / cfg.n);
        if w == 0.0 {
            continue;
        }
        terms.push(table.lambda(1, n)? * e(-k * (n as f64).ln()) * w);
    }
    Ok(compensated_sum(terms))
}

/// The triangle-inequality majorant `Σ |λ(1,n)| V(n/N)`.
pub fn s_direct_abs(table: &CoefficientTable, cfg: &PipelineConfig, v: &SmoothWeight<f64>) -> Result<f64> {
    require_depth(table, cfg)?;
    let (lo, hi) = summation_range(cfg.n, v);
    let mut s = 0.0;
    for n in lo..=hi {
        s += table.lambda(1, n)?.norm() * v.value(n as f64 / cfg.n);
    }
    Ok(s)
}
