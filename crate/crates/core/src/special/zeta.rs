//! Riemann zeta by Euler–Maclaurin summation, accurate to ~1e-13 for `|Im s| <= 100`.

use super::BERNOULLI_EVEN;
use crate::Cplx;

fn rpow(x: f64, s: Cplx) -> Cplx {
    (s * x.ln()).exp()
}

/// `ζ(s)` for `s != 1`, using `N = 40 + |Im s|` terms and twelve correction terms.
pub fn zeta(s: Cplx) -> Cplx {
    let n = 40 + s.im.abs().ceil() as usize;
    let nf = n as f64;
    let mut acc = Cplx::new(0.0, 0.0);
    for k in (1..n).rev() {
        acc += rpow(k as f64, -s);
    }
    let n_s = rpow(nf, -s);
    acc += rpow(nf, 1.0 - s) / (s - 1.0) + n_s * 0.5;
    // B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n_s / nf;
    for (k, b) in BERNOULLI_EVEN.iter().take(12).enumerate() {
        acc += rising * npow * (b / fact);
        let m = 2.0 * k as f64 + 2.0;
        rising = rising * (s + (m - 1.0)) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow /= nf * nf;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert!((zeta(Cplx::new(2.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(Cplx::new(0.0, 0.0)).re + 0.5).abs() < 1e-14);
        assert!((zeta(Cplx::new(0.5, 0.0)).re + 1.4603545088095868).abs() < 1e-13);
        // first nontrivial zero
        assert!(zeta(Cplx::new(0.5, 14.134725141734693)).norm() < 1e-12);
    }
}
