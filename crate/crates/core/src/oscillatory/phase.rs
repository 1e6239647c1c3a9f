//! Phases in cycles (`e(f) = exp(2 pi i f)`) and the one-dimensional integral toolkit:
//! the quadrature oracle, the r-th derivative test, Huxley's boundary and stationary
//! expansions, and the integration-by-parts negligibility bound.

use super::quad::{integrate, OscResult, QuadOptions};
use super::weight::SmoothWeight;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::{e, Real};
use num_complex::Complex;
use std::sync::Arc;

pub type DerivFn<T> = Arc<dyn Fn(T) -> [T; 5] + Send + Sync>;

/// A real phase `f` with derivatives up to order four and its scale parameters.
///
/// `theta`, `omega_f`: `f^(i) ≪ theta / omega_f^i`; `omega_g`: derivative scale of the
/// amplitude; `lambda`: lower bound for `|f'|` (zero when unknown); `kappa`: distance from a
/// stationary point to the ends of the interval (non-positive means "compute it").
#[derive(Clone)]
pub struct PhaseSpec<T = f64> {
    derivs: DerivFn<T>,
    pub theta: T,
    pub omega_f: T,
    pub omega_g: T,
    pub lambda: T,
    pub kappa: T,
}

impl<T: Real> std::fmt::Debug for PhaseSpec<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhaseSpec")
            .field("theta", &self.theta)
            .field("omega_f", &self.omega_f)
            .field("omega_g", &self.omega_g)
            .field("lambda", &self.lambda)
            .field("kappa", &self.kappa)
            .finish()
    }
}

impl<T: Real> PhaseSpec<T> {
    /// Phase given as a function on jets; derivatives come out of the Taylor arithmetic.
    pub fn from_jet<F>(f: F) -> Self
    where
        F: Fn(Jet<T>) -> Jet<T> + Send + Sync + 'static,
    {
        let derivs: DerivFn<T> = Arc::new(move |x| {
            let j = f(Jet::variable(x));
            [j.derivative(0), j.derivative(1), j.derivative(2), j.derivative(3), j.derivative(4)]
        });
        Self::with_derivs(derivs)
    }

    /// Phase given by explicit callables returning `[f, f', f'', f''', f'''']`.
    pub fn from_derivatives<F>(f: F) -> Self
    where
        F: Fn(T) -> [T; 5] + Send + Sync + 'static,
    {
        Self::with_derivs(Arc::new(f))
    }

    fn with_derivs(derivs: DerivFn<T>) -> Self {
        PhaseSpec { derivs, theta: T::one(), omega_f: T::one(), omega_g: T::one(), lambda: T::zero(), kappa: T::zero() }
    }

    pub fn scales(mut self, theta: T, omega_f: T, omega_g: T) -> Self {
        self.theta = theta;
        self.omega_f = omega_f;
        self.omega_g = omega_g;
        self
    }

    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_kappa(mut self, kappa: T) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn value(&self, x: T) -> T {
        (self.derivs)(x)[0]
    }

    pub fn deriv(&self, x: T, k: usize) -> T {
        (self.derivs)(x)[k]
    }

    pub fn all(&self, x: T) -> [T; 5] {
        (self.derivs)(x)
    }

    /// Compares each supplied derivative with a Richardson-extrapolated centered difference
    /// of the one below it, at `samples` points of `[a, b]`. Returns the worst relative gap.
    pub fn check_derivatives(&self, a: T, b: T, samples: usize) -> T {
        let n = samples.max(2);
        let h = (b - a) * T::c(1e-3);
        let mut worst = T::zero();
        for k in 1..5 {
            let mut scale = T::zero();
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                let x = a + (b - a) * (T::c(0.05) + T::c(0.9) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1));
                let d = |hh: T| (self.deriv(x + hh, k - 1) - self.deriv(x - hh, k - 1)) / (hh + hh);
                let fd = (T::c(4.0) * d(h * T::c(0.5)) - d(h)) / T::c(3.0);
                let an = self.deriv(x, k);
                scale = scale.max(an.abs());
                rows.push((fd, an));
            }
            let floor = scale * T::c(1e-6) + T::min_positive_value();
            for (fd, an) in rows {
                let rel = (fd - an).abs() / (an.abs().max(floor));
                worst = worst.max(rel);
            }
        }
        worst
    }

    /// Number of oscillations of `e(f)` over `[a, b]`, from sampled `|f'|`.
    pub fn cycles(&self, a: T, b: T) -> T {
        let n = 256;
        let mut m = T::zero();
        for i in 0..=n {
            let x = a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n);
            m = m.max(self.deriv(x, 1).abs());
        }
        m * (b - a).abs()
    }

    fn min_abs_deriv(&self, a: T, b: T, k: usize, n: usize) -> T {
        let mut m = T::infinity();
        for i in 0..=n {
            let x = a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n);
            m = m.min(self.deriv(x, k).abs());
        }
        m
    }
}

fn clip<T: Real>(g: &SmoothWeight<T>, a: T, b: T) -> (T, T) {
    (a.max(g.support.0), b.min(g.support.1))
}

/// Ground-truth value of `∫_a^b g(x) e(f(x)) dx` by adaptive quadrature.
pub fn quad_osc_1d<T: Real>(g: &SmoothWeight<T>, f: &PhaseSpec<T>, a: T, b: T, tol: f64) -> Result<OscResult<T>> {
    let (lo, hi) = clip(g, a, b);
    if lo >= hi {
        return Ok(OscResult { value: Complex::new(T::zero(), T::zero()), err_est: T::zero(), node_count: 1 });
    }
    let cycles = f.cycles(lo, hi).to_f64().unwrap_or(0.0);
    let opts = QuadOptions::new(tol).with_cycles(cycles).with_panels(4);
    integrate(|x| e(f.value(x)) * g.value(x), lo, hi, &opts)
}

/// `Var(g) / min|f^(r)|^(1/r)` with the minimum taken over a sampled grid.
pub fn derivative_test_bound<T: Real>(g: &SmoothWeight<T>, f: &PhaseSpec<T>, a: T, b: T, r: usize) -> Result<T> {
    if !(1..=4).contains(&r) {
        return Err(Error::InvalidArgument(format!("derivative order {r} not in 1..=4")));
    }
    let (lo, hi) = clip(g, a, b);
    let m = f.min_abs_deriv(lo, hi, r, 2000);
    if !(m > T::zero()) {
        return Err(Error::DegenerateDerivative { order: r });
    }
    Ok(g.variation() / m.powf(T::one() / T::from_usize_lossy(r)))
}

fn boundary_term<T: Real>(g: &SmoothWeight<T>, f: &PhaseSpec<T>, x: T) -> Complex<T> {
    let gx = g.value(x);
    if gx == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let d = f.deriv(x, 1);
    e(f.value(x)) * gx / Complex::new(T::zero(), T::TAU() * d)
}

/// First-derivative expansion: the two endpoint terms and the error envelope
/// `(Θ/(Ω²Λ³))(1 + Ω/Ω_g + (Ω²/Ω_g²)(Λ/(Θ/Ω)))`.
pub fn huxley_boundary<T: Real>(g: &SmoothWeight<T>, f: &PhaseSpec<T>, a: T, b: T) -> Result<OscResult<T>> {
    if f.omega_f < (b - a) * T::c(0.1) {
        return Err(Error::InvalidArgument(format!(
            "omega_f = {} too small for an interval of length {}",
            f.omega_f,
            b - a
        )));
    }
    let n = 2000;
    let s0 = f.deriv(a, 1).signum();
    for i in 0..=n {
        let x = a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n);
        let d1 = f.deriv(x, 1);
        if d1 == T::zero() || d1.signum() != s0 {
            return Err(Error::StationaryPointInside { a: a.to_f64().unwrap(), b: b.to_f64().unwrap() });
        }
    }
    let lambda = if f.lambda > T::zero() { f.lambda } else { f.min_abs_deriv(a, b, 1, n) };
    let value = boundary_term(g, f, b) - boundary_term(g, f, a);
    let (th, om, og) = (f.theta, f.omega_f, f.omega_g);
    let err = th / (om * om * lambda.powi(3)) * (T::one() + om / og + (om * om) / (og * og) * (lambda / (th / om)));
    Ok(OscResult { value, err_est: err, node_count: 1 })
}

/// Locates the zero of `f'` in `[a, b]` where `f'` goes from negative to positive.
pub fn stationary_point<T: Real>(f: &PhaseSpec<T>, a: T, b: T) -> Result<T> {
    let (mut lo, mut hi) = (a, b);
    let (fa, fb) = (f.deriv(lo, 1), f.deriv(hi, 1));
    if !(fa < T::zero() && fb > T::zero()) {
        return Err(Error::NoInteriorStationaryPoint { a: a.to_f64().unwrap(), b: b.to_f64().unwrap() });
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::c(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if f.deriv(mid, 1) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish from the bracket midpoint
    let mut x = (lo + hi) * T::c(0.5);
    for _ in 0..3 {
        let d = f.all(x);
        if d[2] == T::zero() {
            break;
        }
        let nx = x - d[1] / d[2];
        if nx >= a && nx <= b {
            x = nx;
        }
    }
    Ok(x)
}

/// Stationary-phase expansion `g(x0) e(f(x0) + 1/8) / sqrt(f''(x0))` plus boundary terms,
/// with the envelope `Ω⁴/(Θ²κ³) + Ω/Θ^{3/2} + Ω³/(Θ^{3/2}Ω_g²)`.
pub fn huxley_stationary<T: Real>(g: &SmoothWeight<T>, f: &PhaseSpec<T>, a: T, b: T) -> Result<(OscResult<T>, T)> {
    let x0 = stationary_point(f, a, b)?;
    let n = 2000;
    for i in 0..=n {
        let x = a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n);
        let d2 = f.deriv(x, 2);
        if !(d2 > T::zero()) {
            return Err(Error::NonPositiveSecondDerivative { value: d2.to_f64().unwrap_or(f64::NAN) });
        }
    }
    let d = f.all(x0);
    let main = e(d[0] + T::c(0.125)) * g.value(x0) / d[2].sqrt();
    let value = main + boundary_term(g, f, b) - boundary_term(g, f, a);
    let kappa = if f.kappa > T::zero() { f.kappa } else { (x0 - a).min(b - x0) };
    let (th, om, og) = (f.theta, f.omega_f, f.omega_g);
    let th32 = th.powf(T::c(1.5));
    let err = om.powi(4) / (th * th * kappa.powi(3)) + om / th32 + om.powi(3) / (th32 * og * og);
    Ok((OscResult { value, err_est: err, node_count: 1 }, x0))
}

/// `|b - a| [(Ω_f Λ / sqrt Θ)^{-A} + (Λ Ω_g)^{-A}]`.
pub fn bky_negligible<T: Real>(f: &PhaseSpec<T>, a: T, b: T, big_a: i32) -> Result<T> {
    if f.theta < T::one() {
        return Err(Error::InvalidArgument(format!("theta = {} must be at least 1", f.theta)));
    }
    if !(f.lambda > T::zero()) {
        return Err(Error::InvalidArgument("lambda must be positive".into()));
    }
    let x1 = f.omega_f * f.lambda / f.theta.sqrt();
    let x2 = f.lambda * f.omega_g;
    Ok((b - a).abs() * (x1.powi(-big_a) + x2.powi(-big_a)))
}

pub const BKY_EXPONENT: i32 = 6;
pub const NEGLIGIBLE: f64 = 1e-8;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresnel_main_term() {
        let g = SmoothWeight::bump(-1.0, 1.0);
        let f = PhaseSpec::from_jet(|x: Jet<f64>| x * x);
        let (r, x0) = huxley_stationary(&g, &f, -1.0, 1.0).unwrap();
        assert!(x0.abs() < 1e-14);
        let want = e(0.125) / 2f64.sqrt();
        assert!((r.value - want).norm() < 1e-14);
    }

    #[test]
    fn linear_phase_oracle_values() {
        let one = SmoothWeight::one(0.0, 1.0);
        let f0 = PhaseSpec::from_jet(|x: Jet<f64>| x.scale(0.0));
        assert!((quad_osc_1d(&one, &f0, 0.0, 1.0, 1e-12).unwrap().value.re - 1.0).abs() < 1e-14);
        let f = PhaseSpec::from_jet(|x: Jet<f64>| x.scale(0.5));
        let r = quad_osc_1d(&one, &f, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - Complex::new(0.0, 2.0 / std::f64::consts::PI)).norm() < 1e-13);
    }

    #[test]
    fn derivative_check_flags_wrong_derivative() {
        let good = PhaseSpec::from_jet(|x: Jet<f64>| x.ln().scale(3.0));
        assert!(good.check_derivatives(1.0, 2.0, 20) < 1e-5);
        let bad = PhaseSpec::from_derivatives(|x: f64| [x * x, 2.0 * x, 2.0, 1.0, 0.0]);
        assert!(bad.check_derivatives(1.0, 2.0, 20) > 1e-2);
    }

    #[test]
    fn boundary_rejects_stationary_point() {
        let g = SmoothWeight::bump(-1.0, 1.0);
        let f = PhaseSpec::from_jet(|x: Jet<f64>| x * x);
        assert!(matches!(huxley_boundary(&g, &f, -1.0, 1.0), Err(Error::StationaryPointInside { .. })));
    }

    #[test]
    fn bky_formula() {
        let f = PhaseSpec::from_jet(|x: Jet<f64>| x).scales(100.0, 1.0, 1.0).with_lambda(1000.0);
        let b = bky_negligible(&f, 0.0, 2.0, 6).unwrap();
        assert!((b - 2.0 * (1e-12 + 1e-18)).abs() < 1e-24);
    }
}
