use gl3_core::gl3::*;
use gl3_core::special::{gamma, ln_gamma, zeta};
use gl3_core::{Cplx, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Cplx {
    Cplx::new(re, im)
}

#[test]
fn gamma_known_values() {
    assert!((gamma(c(0.5, 0.0)) - c(PI.sqrt(), 0.0)).norm() < 1e-13);
    assert!((gamma(c(5.0, 0.0)) - c(24.0, 0.0)).norm() < 1e-11);
    for &y in &[0.3, 4.0, 40.0, 300.0] {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        let lhs = 2.0 * ln_gamma(c(0.5, y)).re;
        let rhs = PI.ln() - (PI * y + (-2.0 * PI * y).exp().ln_1p() - 2f64.ln());
        assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "y = {y}");
    }
}

proptest! {
    #[test]
    fn gamma_recurrence(re in -5.5f64..10.0, im in -200.0f64..200.0) {
        let z = c(re, im);
        prop_assume!((z.re - z.re.round()).abs() > 1e-3 || z.im.abs() > 1e-3);
        let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
        // equal modulo 2πi
        prop_assert!(d.re.abs() < 1e-10 * (1.0 + im.abs()));
        prop_assert!(((d.im / (2.0 * PI)).round() * 2.0 * PI - d.im).abs() < 1e-9 * (1.0 + im.abs()));
    }

    #[test]
    fn hecke_relation(m in 1u64..60, n in 1u64..12) {
        // λ(m,1) λ(1,n) = Σ_{d | (m,n)} λ(m/d, n/d)
        let t = d3_full_table(60 * 144);
        let lhs = t.get(m, 1).unwrap() * t.get(1, n).unwrap();
        let rhs: Cplx = (1..=m.min(n)).filter(|d| m % d == 0 && n % d == 0).map(|d| t.get(m / d, n / d).unwrap()).sum();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn stirling_normalisation_is_flat() {
    let p = GL3Params::from_real(1.0 / 3.0, 1.0 / 3.0);
    for &tau in &[200.0, 2000.0, 20000.0] {
        // the dominant sign for τ > 0 is γ₋, for τ < 0 it is γ₊
        let big = stirling_phi(tau, Sign::Minus, &p).unwrap().norm();
        let big_neg = stirling_phi(-tau, Sign::Plus, &p).unwrap().norm();
        assert!((big - 1.0).abs() < 2.0 / tau && (big_neg - 1.0).abs() < 2.0 / tau, "τ = {tau}: {big} {big_neg}");
        let h = 1e-3;
        for s in Sign::BOTH {
            let d = (stirling_phi(tau + h, s, &p).unwrap() - stirling_phi(tau - h, s, &p).unwrap()) / (2.0 * h);
            assert!(tau * d.norm() < 10.0, "τ = {tau}");
        }
    }
}

#[test]
fn gamma_pm_combines_the_two_parities() {
    let p = GL3Params::from_real(0.1, -0.2);
    for &s in &[c(-0.5, 3.0), c(0.25, -17.0), c(1.0, 40.0)] {
        let g0 = gamma_ell(s, 0, &p).unwrap();
        let g1 = gamma_ell(s, 1, &p).unwrap();
        let (gp, gm) = (gamma_pm(s, Sign::Plus, &p).unwrap(), gamma_pm(s, Sign::Minus, &p).unwrap());
        assert!(((gp + gm) * 0.5 - g0).norm() < 1e-12 * g0.norm().max(1e-300));
        assert!(((gm - gp) * c(0.0, -0.5) - g1).norm() < 1e-12 * g1.norm().max(1e-300) + 1e-300);
    }
}

#[test]
fn coefficient_file_round_trip() {
    let dir = tempfile_dir();
    let t = d3_full_table(300);
    let path = dir.join("d3.txt");
    t.write(&path).unwrap();
    let back = load_coefficients(&path).unwrap();
    assert_eq!(back.entries, t.entries);
    assert!(!back.cuspidal);
    assert!(back.self_dual);
    assert_eq!(back.params.nu1, t.params.nu1);
    std::fs::remove_dir_all(&dir).unwrap();

    let complex = "#nu1 0.25\n#nu2 -0.125\n#selfdual 0\n1 1 1 0\n1 2 0.3 -0.7\n2 1 1e-3 2.5\n";
    let t = parse_coefficients(complex, "mem").unwrap();
    let again = parse_coefficients(&t.to_text(), "mem").unwrap();
    assert_eq!(again.entries, t.entries);
    assert!(again.cuspidal);
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("gl3-test-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn malformed_tables_are_rejected() {
    let bad = [
        ("#nu1 0\n#nu2 0\n#selfdual 1\n1 1 1 0\n1 2 x 0\n", "format"),
        ("#nu1 0\n#nu2 0\n#selfdual 1\n1 1 1 0\n0 2 1 0\n", "format"),
        ("#nu1 0\n#nu2 0\n1 1 1 0\n", "format"),
        ("#nu1 0\n#nu2 0\n#selfdual 1\n1 1 1 0\n1 2 1 1\n2 1 1 1\n", "format"),
        ("#nu1 0\n#nu2 0\n#selfdual 0\n1 1 2 0\n", "normalization"),
        ("#nu1 0\n#nu2 0\n#selfdual 0\n1 2 1 0\n", "normalization"),
    ];
    for (text, kind) in bad {
        let e = parse_coefficients(text, "mem").unwrap_err();
        match kind {
            "format" => assert!(matches!(e, Error::Format(_)), "{text:?}: {e}"),
            _ => assert!(matches!(e, Error::Normalization(_)), "{text:?}: {e}"),
        }
    }
    assert!(matches!(load_coefficients(std::path::Path::new("/nonexistent/table.txt")), Err(Error::Io(_))));
}

#[test]
fn voronoi_refuses_divisor_tables() {
    let w = gl3_core::oscillatory::SmoothWeight::bump(10.0, 20.0);
    for t in [d3_table(200), d3_full_table(200)] {
        assert!(matches!(voronoi_check(&t, 1, 3, &w), Err(Error::NonCuspidal(_))));
    }
}

#[test]
fn zeta_values() {
    assert!((zeta(c(2.0, 0.0)) - c(PI * PI / 6.0, 0.0)).norm() < 1e-13);
    assert!((zeta(c(0.0, 0.0)) - c(-0.5, 0.0)).norm() < 1e-13);
    assert!((zeta(c(-1.0, 0.0)) - c(-1.0 / 12.0, 0.0)).norm() < 1e-12);
    // first zero on the critical line
    assert!(zeta(c(0.5, 14.134_725_141_734_693)).norm() < 1e-10);
}

#[test]
fn afe_reproduces_zeta_cubed() {
    let table = d3_table(3000);
    let p = table.params;
    for &(sigma, t) in &[(0.5, 8.0), (0.7, 14.134_725_141_734_693), (0.3, 20.0)] {
        let s = c(sigma, t);
        // the pole-killing weight needs about 20 times the nominal length
        let len = (20 * AfeConfig::suggested_length(t)).min(3000);
        let got = afe_value(&table, &p, &AfeConfig::new(s, len).with_g(GFactor::pole_killing())).unwrap();
        let want = zeta(s).powi(3);
        assert!((got.value - want).norm() < 1e-6 * (1.0 + want.norm()), "s = {s}: {} vs {want}", got.value);
    }
    let short = afe_value(&table, &p, &AfeConfig::new(c(0.5, 10.0), 5000));
    assert!(matches!(short, Err(Error::InsufficientData(_))));
}
