//! Two-dimensional oscillatory integrals `∬ g(x, y) e(f(x, y))` and the second-derivative
//! bound `var(g) / (p₁ p₂)`.

use super::quad::{integrate_2d, OscResult, QuadOptions};
use crate::error::{Error, Result};
use crate::scalar::{e, Real};
use num_complex::Complex;
use std::sync::Arc;

pub type Fn2<T, O> = Arc<dyn Fn(T, T) -> O + Send + Sync>;

/// A phase in cycles with its gradient and Hessian `[f_xx, f_yy, f_xy]`.
#[derive(Clone)]
pub struct Phase2<T = f64> {
    pub value: Fn2<T, T>,
    pub grad: Fn2<T, [T; 2]>,
    pub hess: Fn2<T, [T; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T = f64> {
    pub x: (T, T),
    pub y: (T, T),
}

impl<T: Real> Rect<T> {
    pub fn grid(&self, n: usize) -> impl Iterator<Item = (T, T)> + '_ {
        (0..=n).flat_map(move |i| {
            (0..=n).map(move |j| {
                let fx = T::from_usize_lossy(i) / T::from_usize_lossy(n);
                let fy = T::from_usize_lossy(j) / T::from_usize_lossy(n);
                (self.x.0 + (self.x.1 - self.x.0) * fx, self.y.0 + (self.y.1 - self.y.0) * fy)
            })
        })
    }
}

/// `∬_rect g(x, y) e(f(x, y)) dx dy` by iterated adaptive quadrature.
pub fn quad_osc_2d<T, G>(g: G, f: &Phase2<T>, rect: Rect<T>, tol: f64) -> Result<OscResult<T>>
where
    T: Real,
    G: Fn(T, T) -> Complex<T>,
{
    let (mut cx, mut cy) = (T::zero(), T::zero());
    for (x, y) in rect.grid(16) {
        let gr = (f.grad)(x, y);
        cx = cx.max(gr[0].abs());
        cy = cy.max(gr[1].abs());
    }
    let ox = QuadOptions::new(tol).with_cycles((cx * (rect.x.1 - rect.x.0)).to_f64().unwrap_or(0.0)).with_panels(2);
    let oy = QuadOptions::new(tol).with_cycles((cy * (rect.y.1 - rect.y.0)).to_f64().unwrap_or(0.0)).with_panels(2);
    integrate_2d(|x, y| g(x, y) * e((f.value)(x, y)), rect.x, rect.y, &ox, &oy)
}

/// Curvature parameters of a phase on a rectangle, sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    /// `p₁² = 2π min |f_xx|`.
    pub p1: f64,
    /// `p₂² = 2π min |f_yy|`.
    pub p2: f64,
    /// Extremes of `4π² (f_xx f_yy - f_xy²)` on the grid.
    pub det_min: f64,
    pub det_max: f64,
    /// `Err(ConditionFViolated)` when the determinant changes sign or drops below `p₁²p₂²/4`.
    pub condition: Result<(), Error>,
}

pub fn curvature<T: Real>(f: &Phase2<T>, rect: Rect<T>, n: usize) -> Curvature {
    let tau = std::f64::consts::TAU;
    let (mut mxx, mut myy) = (f64::INFINITY, f64::INFINITY);
    let (mut dmin, mut dmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in rect.grid(n) {
        let h = (f.hess)(x, y);
        let (a, b, c) = (h[0].to_f64().unwrap(), h[1].to_f64().unwrap(), h[2].to_f64().unwrap());
        mxx = mxx.min(a.abs());
        myy = myy.min(b.abs());
        let d = tau * tau * (a * b - c * c);
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    let p1 = (tau * mxx).sqrt();
    let p2 = (tau * myy).sqrt();
    let need = 0.25 * p1 * p1 * p2 * p2;
    let condition = if dmin > 0.0 && dmin >= need {
        Ok(())
    } else if dmax < 0.0 && -dmax >= need {
        Err(Error::ConditionFViolated(format!("determinant is negative: |det| in [{:e}, {:e}]", -dmax, -dmin)))
    } else {
        Err(Error::ConditionFViolated(format!(
            "determinant range [{dmin:e}, {dmax:e}] does not stay above p1^2 p2^2 / 4 = {need:e}"
        )))
    };
    Curvature { p1, p2, det_min: dmin, det_max: dmax, condition }
}

/// `∬ |∂²g/∂x∂y|` with the mixed partial taken by centered differences.
pub fn mixed_variation<G>(g: G, rect: Rect<f64>, tol: f64) -> Result<f64>
where
    G: Fn(f64, f64) -> Complex<f64>,
{
    let hx = 1e-4 * (rect.x.1 - rect.x.0);
    let hy = 1e-4 * (rect.y.1 - rect.y.0);
    let d = |x: f64, y: f64| {
        let v = (g(x + hx, y + hy) - g(x + hx, y - hy) - g(x - hx, y + hy) + g(x - hx, y - hy)) / (4.0 * hx * hy);
        Complex::new(v.norm(), 0.0)
    };
    let o = QuadOptions::new(tol).with_panels(8);
    Ok(integrate_2d(d, rect.x, rect.y, &o, &o)?.value.re)
}

/// `var(g) / (p₁ p₂)`.
pub fn second_deriv_bound_2d(var_g: f64, p1: f64, p2: f64) -> f64 {
    var_g / (p1 * p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillatory::quad::integrate;
    use crate::oscillatory::weight::SmoothWeight;

    fn quadratic(t: f64) -> Phase2<f64> {
        Phase2 {
            value: Arc::new(move |x, y| t * (x * x + y * y)),
            grad: Arc::new(move |x, y| [2.0 * t * x, 2.0 * t * y]),
            hess: Arc::new(move |_, _| [2.0 * t, 2.0 * t, 0.0]),
        }
    }

    #[test]
    fn separable_equals_product_of_1d() {
        let b = SmoothWeight::<f64>::bump(-1.0, 1.0);
        let t = 40.0;
        let rect = Rect { x: (-1.0, 1.0), y: (-1.0, 1.0) };
        let two = quad_osc_2d(|x, y| Complex::new(b.value(x) * b.value(y), 0.0), &quadratic(t), rect, 1e-10).unwrap();
        let o = QuadOptions::new(1e-12).with_cycles(2.0 * t);
        let one = integrate(|x: f64| e(t * x * x) * b.value(x), -1.0, 1.0, &o).unwrap().value;
        assert!((two.value - one * one).norm() < 1e-9);
    }

    #[test]
    fn curvature_of_quadratic() {
        let t = 100.0;
        let c = curvature(&quadratic(t), Rect { x: (-1.0, 1.0), y: (-1.0, 1.0) }, 8);
        let p = (4.0 * std::f64::consts::PI * t).sqrt();
        assert!((c.p1 - p).abs() < 1e-10 && (c.p2 - p).abs() < 1e-10);
        assert!(c.condition.is_ok());
        let saddle = Phase2 {
            value: Arc::new(|x: f64, y: f64| x * x - y * y),
            grad: Arc::new(|x, y| [2.0 * x, -2.0 * y]),
            hess: Arc::new(|_, _| [2.0, -2.0, 0.0]),
        };
        let c = curvature(&saddle, Rect { x: (0.0, 1.0), y: (0.0, 1.0) }, 4);
        assert!(matches!(c.condition, Err(Error::ConditionFViolated(_))));
    }

    #[test]
    fn mixed_variation_of_product_bump() {
        // ∬|b'(x) b'(y)| = (∫|b'|)² = 4
        let b = SmoothWeight::<f64>::bump(-1.0, 1.0);
        let v = mixed_variation(|x, y| Complex::new(b.value(x) * b.value(y), 0.0), Rect { x: (-1.0, 1.0), y: (-1.0, 1.0) }, 1e-7).unwrap();
        assert!((v - 4.0).abs() < 1e-4, "{v}");
    }
}
