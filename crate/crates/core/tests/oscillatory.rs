use gl3_core::jet::Jet;
use gl3_core::oscillatory::weight::{standard_u, standard_v};
use gl3_core::oscillatory::*;
use gl3_core::pipeline::farey_a;
use gl3_core::Cplx;
use num_complex::Complex;
use proptest::prelude::*;
use std::sync::Arc;

fn quadratic(t: f64, c: f64, mu: f64) -> PhaseSpec<f64> {
    PhaseSpec::from_jet(move |x: Jet<f64>| {
        let y = x - Jet::constant(c);
        (y * y).scale(t) + x.scale(mu)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn second_derivative_test(t in 20.0f64..3000.0, c in -0.8f64..0.8) {
        let g = SmoothWeight::bump(-1.0, 1.0);
        let f = quadratic(t, c, 0.0);
        let got = quad_osc_1d(&g, &f, -1.0, 1.0, 1e-11).unwrap().value.norm();
        let bound = derivative_test_bound(&g, &f, -1.0, 1.0, 2).unwrap();
        prop_assert!(got <= 4.0 * bound, "{got} > 4 * {bound}");
    }

    #[test]
    fn first_derivative_test(lam in 5.0f64..2000.0, curv in 0.0f64..50.0) {
        // f' = λ + 2 curv x is monotone and positive on [0, 1]
        let g = SmoothWeight::one(0.0, 1.0);
        let f = quadratic(curv, 0.0, lam);
        let got = quad_osc_1d(&g, &f, 0.0, 1.0, 1e-11).unwrap().value.norm();
        let bound = derivative_test_bound(&g, &f, 0.0, 1.0, 1).unwrap();
        prop_assert!(got <= 4.0 * bound, "{got} > 4 * {bound}");
    }

    #[test]
    fn stationary_expansion_within_envelope(t in 50.0f64..5000.0, c in -0.5f64..0.5) {
        let g = SmoothWeight::bump(-1.0, 1.0);
        let f = quadratic(t, c, 0.0).scales(t, 1.0, 0.25);
        let want = quad_osc_1d(&g, &f, -1.0, 1.0, 1e-11).unwrap().value;
        let (got, x0) = huxley_stationary(&g, &f, -1.0, 1.0).unwrap();
        prop_assert!((x0 - c).abs() < 1e-10);
        prop_assert!((got.value - want).norm() <= got.err_est, "{} > {}", (got.value - want).norm(), got.err_est);
    }

    #[test]
    fn partition_of_unity(r in 2.0f64..1e6, frac in -1.0f64..1.0) {
        let pieces = build_partition(r, None);
        let x = frac * r;
        prop_assert!((partition_sum(&pieces, x) - 1.0).abs() < 1e-12, "x = {x}");
    }

    #[test]
    fn fourier_mellin_conjugation(r in 5.0f64..400.0, beta in -3000.0f64..3000.0, sigma in 0.0f64..1.0) {
        // conj U†(r, σ + iβ) = U†(-r, σ - iβ)
        let u = standard_u();
        let a = fourier_mellin_exact(&u, r, Complex::new(sigma, beta), 1e-11).unwrap().value;
        let b = fourier_mellin_exact(&u, -r, Complex::new(sigma, -beta), 1e-11).unwrap().value;
        prop_assert!((a.conj() - b).norm() < 1e-9);
    }
}

#[test]
fn linear_phase_boundary_terms_are_exact() {
    for &t in &[7.0, 40.0, 300.0] {
        let g = SmoothWeight::one(0.5, 1.5);
        let f = quadratic(0.0, 0.0, t).scales(t, 1.0, 1.0);
        let got = huxley_boundary(&g, &f, 0.5, 1.5).unwrap().value;
        let e = |x: f64| Cplx::from_polar(1.0, std::f64::consts::TAU * x);
        let want = (e(1.5 * t) - e(0.5 * t)) / Cplx::new(0.0, std::f64::consts::TAU * t);
        assert!((got - want).norm() < 1e-13, "T = {t}");
    }
}

#[test]
fn boundary_expansion_refuses_stationary_points() {
    let g = SmoothWeight::one(-1.0, 1.0);
    let f = quadratic(10.0, 0.0, 0.0).scales(10.0, 1.0, 1.0);
    assert!(huxley_boundary(&g, &f, -1.0, 1.0).is_err());
}

#[test]
fn negligible_integrals_are_small() {
    for &t in &[50.0, 200.0, 1000.0] {
        let g = SmoothWeight::bump(1.0, 2.0);
        let f = quadratic(t, 0.0, 0.0).scales(4.0 * t, 1.0, 0.1).with_lambda(2.0 * t);
        let b = bky_negligible(&f, 1.0, 2.0, BKY_EXPONENT).unwrap();
        let got = quad_osc_1d(&g, &f, 1.0, 2.0, 1e-13).unwrap().value.norm();
        assert!(got <= b, "T = {t}: {got} > {b}");
    }
}

#[test]
fn two_dimensional_second_derivative_test() {
    let bump = SmoothWeight::bump(-1.0, 1.0);
    let g = move |x: f64, y: f64| Cplx::new(bump.value(x) * bump.value(y), 0.0);
    let rect = Rect { x: (-1.0, 1.0), y: (-1.0, 1.0) };
    let var = mixed_variation(g.clone(), rect, 1e-5).unwrap();
    for &(a, b) in &[(30.0, 30.0), (60.0, 120.0), (150.0, 40.0)] {
        let f = Phase2 {
            value: Arc::new(move |x: f64, y: f64| a * x * x + b * y * y + 0.3 * x * y),
            grad: Arc::new(move |x: f64, y: f64| [2.0 * a * x + 0.3 * y, 2.0 * b * y + 0.3 * x]),
            hess: Arc::new(move |_, _| [2.0 * a, 2.0 * b, 0.3]),
        };
        let k = curvature(&f, rect, 8);
        assert!(k.condition.is_ok());
        let got = quad_osc_2d(g.clone(), &f, rect, 1e-7).unwrap().value.norm();
        let bound = second_deriv_bound_2d(var, k.p1, k.p2);
        // a Gaussian phase reaches π/2 times the bound
        assert!(got <= 2.0 * bound, "({a}, {b}): {got} > {bound}");
    }
}

#[test]
fn fourier_mellin_main_term_decays_faster() {
    let u = standard_u();
    for &(r, beta) in &[(-64.0f64, -400.0f64), (-256.0, -1500.0), (128.0, 900.0)] {
        let s = Complex::new(0.5, beta);
        let exact = fourier_mellin_exact(&u, r, s, 1e-12).unwrap().value;
        let main = fourier_mellin_main(&u, r, s);
        assert!(main.norm() > 0.0);
        // the main term has size |β|^{-1/2}; the residual is an order smaller
        assert!((exact - main).norm() < 5.0 * main.norm() / beta.abs().sqrt(), "r = {r}");
    }
    // outside the support only the tails remain
    let s = Complex::new(0.5, -1200.0);
    assert_eq!(fourier_mellin_main(&u, -40.0, s), Complex::new(0.0, 0.0));
    assert!(fourier_mellin_exact(&u, -40.0, s, 1e-12).unwrap().value.norm() < 1e-3);
}

/// Parameters on the diagonal `N = q t / (2π |r| X)` with `C = q`.
fn sp_sample(q: i64, r: i64, t: f64, x: f64) -> SpParams {
    let qf = 20;
    let a = farey_a(q, r, qf).unwrap();
    let n = -(q as f64) * t / (std::f64::consts::TAU * r as f64 * x);
    SpParams::new(q, a, r, t, 0.0, n, q as f64, qf as f64).unwrap()
}

#[test]
fn istarstar_size_and_error_integral() {
    let (u, v) = (standard_u(), standard_v());
    for &(q, r, t, x) in &[(3, -1, 2000.0, 1.5), (4, -3, 5000.0, 1.3), (2, -1, 3000.0, 1.7)] {
        let p0 = sp_sample(q, r, t, x);
        let te = t.powf(p0.eps);
        let reach = p0.n * te / (p0.q_farey * p0.c);
        let size = p0.q_farey * p0.c * te / (p0.n * t.sqrt());
        for k in 0..15 {
            let p = SpParams { tau: -reach + 2.0 * reach * k as f64 / 14.0, ..p0 };
            if p.validate().is_err() {
                continue;
            }
            let got = istarstar(&p, &u, &v, 1e-10).unwrap().value.norm();
            assert!(got <= 4.0 * size, "q = {q} τ = {}: {got} vs {size}", p.tau);
        }
        // midpoint rule for ∫ B(τ) dτ over the τ range. The |τ|^{-3/2} term alone integrates to
        // about 8 sqrt(aq/N)/sqrt(t), so at these heights the ratio sits near 5-9 rather than 3.
        let m = 20000;
        let h = 2.0 * reach / m as f64;
        let ib: f64 = (0..m).map(|i| b_error_bound(&SpParams { tau: -reach + (i as f64 + 0.5) * h, ..p0 }) * h).sum();
        let want = 10.0 * te * (p0.q_farey * p0.c / (p0.n * t)).sqrt();
        assert!(ib <= want, "q = {q}: {ib} > {want}");
    }
}
