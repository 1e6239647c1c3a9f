//! Spectral parameters of a GL(3) form.

use crate::Cplx;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GL3Params {
    pub nu1: Cplx,
    pub nu2: Cplx,
    pub alpha: [Cplx; 3],
}

/// Langlands parameters from the spectral type `(ν₁, ν₂)`.
pub fn langlands(nu1: Cplx, nu2: Cplx) -> GL3Params {
    let one = Cplx::new(1.0, 0.0);
    let alpha = [-nu1 - nu2 * 2.0 + one, -nu1 + nu2, nu1 * 2.0 + nu2 - one];
    GL3Params { nu1, nu2, alpha }
}

impl GL3Params {
    pub fn from_real(nu1: f64, nu2: f64) -> Self {
        langlands(Cplx::new(nu1, 0.0), Cplx::new(nu2, 0.0))
    }

    /// Parameters of the contragredient form: `(-α₃, -α₂, -α₁)`, i.e. `(ν₁, ν₂) ↦ (ν₂, ν₁)`.
    pub fn dual(&self) -> GL3Params {
        GL3Params { nu1: self.nu2, nu2: self.nu1, alpha: [-self.alpha[2], -self.alpha[1], -self.alpha[0]] }
    }

    pub fn alpha_sum(&self) -> Cplx {
        self.alpha.iter().sum()
    }

    pub fn is_real(&self) -> bool {
        self.alpha.iter().all(|a| a.im == 0.0)
    }

    /// `max_i Re(-α_i)`: the Hankel contour must satisfy `σ > -1 + max_i Re(-α_i)`.
    pub fn max_neg_re_alpha(&self) -> f64 {
        self.alpha.iter().map(|a| -a.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_type_has_zero_parameters() {
        let p = GL3Params::from_real(1.0 / 3.0, 1.0 / 3.0);
        for a in p.alpha {
            assert!(a.norm() < 1e-15);
        }
    }

    #[test]
    fn dual_is_involution_and_matches_swapped_nu() {
        let p = langlands(Cplx::new(0.3, 4.0), Cplx::new(0.4, -1.5));
        assert!(p.alpha_sum().norm() < 1e-14);
        let d = p.dual();
        let swapped = langlands(p.nu2, p.nu1);
        for i in 0..3 {
            assert!((d.alpha[i] - swapped.alpha[i]).norm() < 1e-14);
        }
        assert_eq!(d.dual(), p);
    }
}
