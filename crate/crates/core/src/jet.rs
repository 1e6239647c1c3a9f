//! Truncated Taylor arithmetic ("jets") for exact derivatives of smooth weights and phases.
//!
//! A `Jet` stores normalized Taylor coefficients `c[k] = f^(k)(x0) / k!` up to order
//! `JET_ORDER`. Arithmetic and elementary functions propagate the coefficients by the
//! usual recurrences, so derivatives of compositions are exact up to rounding.

use crate::scalar::Real;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub const JET_ORDER: usize = 7;
const LEN: usize = JET_ORDER + 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    pub c: [T; LEN],
}

impl<T: Real> Jet<T> {
    pub fn constant(v: T) -> Self {
        let mut c = [T::zero(); LEN];
        c[0] = v;
        Jet { c }
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: T) -> Self {
        let mut c = [T::zero(); LEN];
        c[0] = x0;
        if LEN > 1 {
            c[1] = T::one();
        }
        Jet { c }
    }

    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// k-th derivative (k <= JET_ORDER).
    pub fn derivative(&self, k: usize) -> T {
        let mut fact = T::one();
        for i in 2..=k {
            fact = fact * T::from_usize_lossy(i);
        }
        self.c[k] * fact
    }

    pub fn scale(self, s: T) -> Self {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v = *v * s;
        }
        Jet { c }
    }

    pub fn add_scalar(mut self, s: T) -> Self {
        self.c[0] = self.c[0] + s;
        self
    }

    pub fn recip(self) -> Self {
        Jet::constant(T::one()) / self
    }

    pub fn exp(self) -> Self {
        let mut y = [T::zero(); LEN];
        y[0] = self.c[0].exp();
        for k in 1..LEN {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::from_usize_lossy(j) * self.c[j] * y[k - j];
            }
            y[k] = acc / T::from_usize_lossy(k);
        }
        Jet { c: y }
    }

    pub fn ln(self) -> Self {
        let a0 = self.c[0];
        let mut y = [T::zero(); LEN];
        y[0] = a0.ln();
        for k in 1..LEN {
            let mut acc = T::from_usize_lossy(k) * self.c[k];
            for j in 1..k {
                acc = acc - T::from_usize_lossy(j) * y[j] * self.c[k - j];
            }
            y[k] = acc / (T::from_usize_lossy(k) * a0);
        }
        Jet { c: y }
    }

    /// `self^p` for a positive leading coefficient.
    pub fn powf(self, p: T) -> Self {
        (self.ln().scale(p)).exp()
    }

    /// Composition with `x -> -x` applied to the expansion variable.
    pub fn reflect(mut self) -> Self {
        for k in (1..LEN).step_by(2) {
            self.c[k] = -self.c[k];
        }
        self
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for k in 0..LEN {
            self.c[k] = self.c[k] + o.c[k];
        }
        self
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for k in 0..LEN {
            self.c[k] = self.c[k] - o.c[k];
        }
        self
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [T::zero(); LEN];
        for (i, ci) in c.iter_mut().enumerate() {
            let mut acc = T::zero();
            for j in 0..=i {
                acc = acc + self.c[j] * o.c[i - j];
            }
            *ci = acc;
        }
        Jet { c }
    }
}

impl<T: Real> Div for Jet<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let mut q = [T::zero(); LEN];
        let b0 = o.c[0];
        for k in 0..LEN {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc = acc - o.c[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Jet { c: q }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_variable_has_exp_derivatives() {
        let j = Jet::variable(0.3_f64).exp();
        for k in 0..=JET_ORDER {
            assert!((j.derivative(k) - 0.3_f64.exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn reciprocal_derivatives() {
        // d^k/dx^k 1/x = (-1)^k k! / x^{k+1}
        let x0 = 1.7_f64;
        let j = Jet::variable(x0).recip();
        let mut fact = 1.0;
        for k in 0..=JET_ORDER {
            if k > 0 {
                fact *= k as f64;
            }
            let want = (-1f64).powi(k as i32) * fact / x0.powi(k as i32 + 1);
            assert!((j.derivative(k) - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn ln_and_powf_consistent() {
        let x0 = 2.5_f64;
        let j = Jet::variable(x0).powf(1.5);
        assert!((j.derivative(1) - 1.5 * x0.sqrt()).abs() < 1e-13);
        assert!((j.derivative(2) - 0.75 / x0.sqrt()).abs() < 1e-13);
        let l = Jet::variable(x0).ln();
        assert!((l.derivative(3) - 2.0 / x0.powi(3)).abs() < 1e-13);
    }

    #[test]
    fn reflect_matches_chain_rule() {
        let x0 = 0.4_f64;
        // g(x) = exp(x) at -x0 composed with negation
        let g = Jet::variable(-x0).exp().reflect();
        assert!((g.derivative(1) + (-x0).exp()).abs() < 1e-14);
        assert!((g.derivative(2) - (-x0).exp()).abs() < 1e-14);
    }
}
