//! Compactly supported smooth weights with exact derivatives.
//!
//! Every weight is built from two primitives: the bump `exp(1 - 1/(1 - v^2))` on `[-1, 1]`
//! (peak value 1) and the smooth step `1 / (1 + exp(1/u - 1/(1 - u)))` on `[0, 1]`. Both
//! are evaluated on jets, so all derivatives up to order seven are exact to rounding.

use super::quad::{integrate, QuadOptions};
use crate::jet::{Jet, JET_ORDER};
use crate::scalar::Real;
use num_complex::Complex;
use std::fmt;
use std::sync::Arc;

/// Which derivative bound a weight is expected to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `|W^(j)(x)| <= C_j`.
    Flat,
    /// `|x^k W^(k)(x)| <= C_k`.
    Dyadic,
}

pub type JetFn<T> = Arc<dyn Fn(T) -> Jet<T> + Send + Sync>;

#[derive(Clone)]
pub enum Shape<T> {
    /// Identically one on the support (not smooth at the ends; used for plain integrals).
    One,
    Bump { lo: T, hi: T },
    /// Rises on `[lo, a]`, equals one on `[a, b]`, falls on `[b, hi]`.
    Plateau { lo: T, a: T, b: T, hi: T },
    Custom(JetFn<T>),
}

impl<T: fmt::Debug> fmt::Debug for Shape<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::One => write!(f, "One"),
            Shape::Bump { lo, hi } => write!(f, "Bump({lo:?}, {hi:?})"),
            Shape::Plateau { lo, a, b, hi } => write!(f, "Plateau({lo:?}, {a:?}, {b:?}, {hi:?})"),
            Shape::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmoothWeight<T = f64> {
    pub shape: Shape<T>,
    pub support: (T, T),
    pub profile: Profile,
}

/// Smooth step: 0 for `u <= 0`, 1 for `u >= 1`, with `step(u) + step(1 - u) = 1`.
pub fn step_jet<T: Real>(u: Jet<T>) -> Jet<T> {
    let u0 = u.value();
    if u0 <= T::zero() {
        return Jet::zero();
    }
    if u0 >= T::one() {
        return Jet::constant(T::one());
    }
    let one = Jet::constant(T::one());
    let ex = u.recip() - (one - u).recip();
    let lim = T::max_value().ln() - T::c(2.0);
    if ex.value() > lim {
        return Jet::zero();
    }
    if ex.value() < -lim {
        return Jet::constant(T::one());
    }
    (one + ex.exp()).recip()
}

fn step_value<T: Real>(u: T) -> T {
    if u <= T::zero() {
        return T::zero();
    }
    if u >= T::one() {
        return T::one();
    }
    let ex = T::one() / u - T::one() / (T::one() - u);
    T::one() / (T::one() + ex.exp())
}

/// `exp(1 - 1/(1 - v^2))` for `|v| < 1`, zero outside.
pub fn bump_jet<T: Real>(v: Jet<T>) -> Jet<T> {
    let v0 = v.value();
    if v0.abs() >= T::one() {
        return Jet::zero();
    }
    let one = Jet::constant(T::one());
    let w = one - v * v;
    let ex = one - w.recip();
    if ex.value() < -(T::max_value().ln() - T::c(2.0)) {
        return Jet::zero();
    }
    ex.exp()
}

impl<T: Real> SmoothWeight<T> {
    pub fn one(lo: T, hi: T) -> Self {
        SmoothWeight { shape: Shape::One, support: (lo, hi), profile: Profile::Flat }
    }

    pub fn bump(lo: T, hi: T) -> Self {
        assert!(lo < hi, "empty bump support");
        SmoothWeight { shape: Shape::Bump { lo, hi }, support: (lo, hi), profile: Profile::Flat }
    }

    pub fn plateau(lo: T, a: T, b: T, hi: T) -> Self {
        assert!(lo < a && a <= b && b < hi, "plateau breakpoints out of order");
        SmoothWeight { shape: Shape::Plateau { lo, a, b, hi }, support: (lo, hi), profile: Profile::Flat }
    }

    /// `exp(-(ln(x/c))² / 2w²) - e^{-40}` on `|ln(x/c)| ≤ w sqrt(80)`: zero at the ends, smooth up
    /// to a derivative jump of order `e^{-40}`, with a Mellin transform decaying like `exp(-w² v²/2)`.
    pub fn log_gaussian(center: T, w: T) -> Self {
        assert!(center > T::zero() && w > T::zero());
        let r = w * T::c(80f64.sqrt());
        let support = (center * (-r).exp(), center * r.exp());
        let (lc, k, floor) = (center.ln(), T::one() / (T::c(2.0) * w * w), T::c((-40f64).exp()));
        let f: JetFn<T> = Arc::new(move |x: T| {
            let u = Jet::variable(x).ln().add_scalar(-lc);
            ((u * u).scale(-k)).exp().add_scalar(-floor)
        });
        SmoothWeight { shape: Shape::Custom(f), support, profile: Profile::Dyadic }
    }

    pub fn custom(support: (T, T), profile: Profile, f: JetFn<T>) -> Self {
        SmoothWeight { shape: Shape::Custom(f), support, profile }
    }

    pub fn with_profile(mut self, p: Profile) -> Self {
        self.profile = p;
        self
    }

    /// Taylor jet of the weight at `x`.
    pub fn jet(&self, x: T) -> Jet<T> {
        let (lo, hi) = self.support;
        if x < lo || x > hi {
            return Jet::zero();
        }
        let two = T::c(2.0);
        match &self.shape {
            Shape::One => Jet::constant(T::one()),
            Shape::Bump { lo, hi } => {
                let v = (Jet::variable(x).scale(two).add_scalar(-(*lo + *hi))).scale(T::one() / (*hi - *lo));
                bump_jet(v)
            }
            Shape::Plateau { lo, a, b, hi } => {
                if x < *a {
                    step_jet(Jet::variable(x).add_scalar(-*lo).scale(T::one() / (*a - *lo)))
                } else if x <= *b {
                    Jet::constant(T::one())
                } else {
                    step_jet(Jet::variable(x).add_scalar(-*b).scale(T::one() / (*hi - *b)).scale(-T::one()).add_scalar(T::one()))
                }
            }
            Shape::Custom(f) => f(x),
        }
    }

    pub fn value(&self, x: T) -> T {
        match &self.shape {
            Shape::One => {
                if x >= self.support.0 && x <= self.support.1 {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Shape::Bump { lo, hi } => {
                if x <= *lo || x >= *hi {
                    return T::zero();
                }
                let v = (x + x - *lo - *hi) / (*hi - *lo);
                (T::one() - T::one() / (T::one() - v * v)).exp()
            }
            Shape::Plateau { lo, a, b, hi } => {
                if x <= *lo || x >= *hi {
                    T::zero()
                } else if x < *a {
                    step_value((x - *lo) / (*a - *lo))
                } else if x <= *b {
                    T::one()
                } else {
                    step_value(T::one() - (x - *b) / (*hi - *b))
                }
            }
            Shape::Custom(f) => {
                if x < self.support.0 || x > self.support.1 {
                    T::zero()
                } else {
                    f(x).value()
                }
            }
        }
    }

    pub fn derivative(&self, x: T, k: usize) -> T {
        assert!(k <= JET_ORDER);
        self.jet(x).derivative(k)
    }

    pub fn max_order(&self) -> usize {
        JET_ORDER
    }

    pub fn width(&self) -> T {
        self.support.1 - self.support.0
    }

    /// Total variation `∫|g'|`, plus the endpoint jumps for the unsmoothed `One` shape.
    pub fn variation(&self) -> T {
        if let Shape::One = self.shape {
            return T::c(2.0);
        }
        let (lo, hi) = self.support;
        let opts = QuadOptions::new(1e-9 * (1.0 + self.sup_norm().to_f64().unwrap_or(1.0))).with_panels(64);
        integrate(|x| Complex::new(self.derivative(x, 1).abs(), T::zero()), lo, hi, &opts)
            .map(|r| r.value.re)
            .unwrap_or(T::nan())
    }

    /// Sampled maximum of `|g|`.
    pub fn sup_norm(&self) -> T {
        self.sampled_max(|x| self.value(x).abs())
    }

    /// Sampled maximum of `|x^k g^(k)(x)|` (dyadic profile) or `|g^(k)(x)|` (flat profile).
    pub fn derivative_constant(&self, k: usize) -> T {
        match self.profile {
            Profile::Flat => self.sampled_max(|x| self.derivative(x, k).abs()),
            Profile::Dyadic => self.sampled_max(|x| (x.powi(k as i32) * self.derivative(x, k)).abs()),
        }
    }

    fn sampled_max<F: Fn(T) -> T>(&self, f: F) -> T {
        let (lo, hi) = self.support;
        let n = 2000;
        let mut m = T::zero();
        for i in 0..=n {
            let x = lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n);
            let v = f(x);
            if v > m {
                m = v;
            }
        }
        m
    }
}

/// `x^sigma U(x)` on the support of `U`.
pub fn u0<T: Real>(u: &SmoothWeight<T>, sigma: T, x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    let v = u.value(x);
    if v == T::zero() {
        return T::zero();
    }
    x.powf(sigma) * v
}

/// The weight `U` used for the dual (long) variable: one on `[1, 2]`, supported in `[1/2, 5/2]`.
pub fn standard_u() -> SmoothWeight<f64> {
    SmoothWeight::plateau(0.5, 1.0, 2.0, 2.5)
}

/// The weight `V` cutting the sum to `n ~ N`: a bump on `[1, 2]`.
pub fn standard_v() -> SmoothWeight<f64> {
    SmoothWeight::bump(1.0, 2.0)
}
