//! Piecewise Chebyshev interpolation of expensive complex-valued functions, used to cache
//! Fourier–Mellin transforms along a quadrature variable.

use crate::error::{Error, Result};
use crate::Cplx;
use rayon::prelude::*;
use std::f64::consts::PI;

const DEGREE: usize = 16;

#[derive(Clone, Debug)]
pub struct PiecewiseCheb {
    a: f64,
    b: f64,
    panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<Vec<Cplx>>,
    /// Largest deviation found at the verification points.
    pub err_est: f64,
    pub evaluations: usize,
}

fn cheb_nodes() -> (Vec<f64>, Vec<f64>) {
    // second-kind points on [-1, 1] with barycentric weights
    let n = DEGREE;
    let x: Vec<f64> = (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect();
    let w: Vec<f64> = (0..=n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                0.5 * s
            } else {
                s
            }
        })
        .collect();
    (x, w)
}

impl PiecewiseCheb {
    /// Interpolates `f` on `[a, b]`, doubling the panel count (starting from `panels`) until the
    /// interpolant agrees with `f` to `tol` at the midpoints between nodes of every panel.
    pub fn build<F>(f: F, a: f64, b: f64, panels: usize, tol: f64, max_panels: usize) -> Result<Self>
    where
        F: Fn(f64) -> Cplx + Sync,
    {
        let (nodes, weights) = cheb_nodes();
        let mut panels = panels.max(1);
        loop {
            let h = (b - a) / panels as f64;
            let values: Vec<Vec<Cplx>> = (0..panels)
                .into_par_iter()
                .map(|p| {
                    let lo = a + h * p as f64;
                    nodes.iter().map(|&t| f(lo + 0.5 * h * (t + 1.0))).collect()
                })
                .collect();
            let mut it = PiecewiseCheb {
                a,
                b,
                panels,
                nodes: nodes.clone(),
                weights: weights.clone(),
                values,
                err_est: 0.0,
                evaluations: panels * (DEGREE + 1),
            };
            // verification at two interior points per panel
            let errs: Vec<f64> = (0..panels)
                .into_par_iter()
                .map(|p| {
                    let lo = a + h * p as f64;
                    [0.5 * (nodes[3] + nodes[4]), 0.5 * (nodes[DEGREE / 2] + nodes[DEGREE / 2 + 1])]
                        .iter()
                        .map(|&t| {
                            let x = lo + 0.5 * h * (t + 1.0);
                            (it.eval(x) - f(x)).norm()
                        })
                        .fold(0.0, f64::max)
                })
                .collect();
            it.evaluations += 2 * panels;
            it.err_est = errs.into_iter().fold(0.0, f64::max);
            if it.err_est <= tol {
                return Ok(it);
            }
            if panels * 2 > max_panels {
                return Err(Error::QuadratureNonConvergence { tol, err_est: it.err_est, nodes: it.evaluations });
            }
            panels *= 2;
        }
    }

    pub fn eval(&self, x: f64) -> Cplx {
        let h = (self.b - self.a) / self.panels as f64;
        let p = (((x - self.a) / h).floor().max(0.0) as usize).min(self.panels - 1);
        let lo = self.a + h * p as f64;
        let t = 2.0 * (x - lo) / h - 1.0;
        let vals = &self.values[p];
        let mut num = Cplx::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..=DEGREE {
            let d = t - self.nodes[j];
            if d == 0.0 {
                return vals[j];
            }
            let c = self.weights[j] / d;
            num += vals[j] * c;
            den += c;
        }
        num / den
    }

    pub fn panels(&self) -> usize {
        self.panels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::e;

    #[test]
    fn interpolates_oscillatory_function() {
        let f = |x: f64| e(3.7 * x * x) * (1.0 + x);
        let c = PiecewiseCheb::build(f, -1.0, 2.0, 2, 1e-11, 1 << 12).unwrap();
        for i in 0..=997 {
            let x = -1.0 + 3.0 * i as f64 / 997.0;
            assert!((c.eval(x) - f(x)).norm() < 1e-10);
        }
    }
}
