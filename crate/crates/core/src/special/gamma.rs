//! Complex `ln Γ` by Stirling's series after an upward shift, completed by reflection.

use super::BERNOULLI_EVEN;
use crate::scalar::Real;
use num_complex::Complex;

const SHIFT_TO: f64 = 12.0;
const STIRLING_TERMS: usize = 12;

/// True at the poles `z = 0, -1, -2, ...`.
pub fn is_gamma_pole<T: Real>(z: Complex<T>) -> bool {
    z.im == T::zero() && z.re <= T::zero() && z.re == z.re.round()
}

/// `ln sin(πz)` without overflow for large `|Im z|`; any branch.
fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.im < T::zero() {
        return ln_sin_pi(z.conj()).conj();
    }
    if z.im < T::one() {
        return (z * T::PI()).sin().ln();
    }
    // sin(w) = e^{-iw} (1 - e^{2iw}) / (-2i)
    let i = Complex::new(T::zero(), T::one());
    let w = z * T::PI();
    let one = Complex::new(T::one(), T::zero());
    -i * w + (one - (i * w * T::c(2.0)).exp()).ln() - Complex::new(T::c(2.0).ln(), -T::FRAC_PI_2())
}

fn stirling<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::c(0.5);
    let mut s = (z - half) * z.ln() - z + T::c(0.5 * (2.0 * std::f64::consts::PI).ln());
    let zi = z.inv();
    let z2 = zi * zi;
    let mut p = zi;
    for (k, b) in BERNOULLI_EVEN.iter().take(STIRLING_TERMS).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        s = s + p * T::c(b / (n * (n - 1.0)));
        p = p * z2;
    }
    s
}

/// Principal-ish `ln Γ(z)`; the imaginary part is correct modulo `2π`.
/// Returns `+∞` real part at the poles.
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    if is_gamma_pole(z) {
        return Complex::new(T::infinity(), T::zero());
    }
    if z.re < T::c(0.5) {
        let one = Complex::new(T::one(), T::zero());
        return Complex::new(T::PI().ln(), T::zero()) - ln_sin_pi(z) - ln_gamma(one - z);
    }
    let mut z = z;
    let mut shift = Complex::new(T::zero(), T::zero());
    while z.re < T::c(SHIFT_TO) && z.norm() < T::c(SHIFT_TO) {
        shift = shift + z.ln();
        z = z + T::one();
    }
    stirling(z) - shift
}

pub fn gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    if is_gamma_pole(z) {
        return Complex::new(T::infinity(), T::zero());
    }
    ln_gamma(z).exp()
}
