use gl3_core::arith::gcd;
use gl3_core::circle::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn delta_is_exact(n in -2000i64..2000, q in 1i64..14) {
        let want = if n == 0 { 1.0 } else { 0.0 };
        prop_assert!((delta_eval(n, &CircleConfig::new(q)) - want).abs() < 1e-9);
    }

    #[test]
    fn quadrature_path_agrees(n in -60i64..60, q in 1i64..6) {
        let cfg = CircleConfig::new(q);
        prop_assert!((delta_eval_quadrature(n, &cfg).unwrap() - delta_eval(n, &cfg)).abs() < 1e-10);
    }
}

#[test]
fn one_term_per_unit_class() {
    // a runs over q consecutive integers, so each modulus contributes φ(q) terms
    for q_max in 1..=20 {
        let terms = farey_terms(q_max);
        let want: usize = (1..=q_max).map(|q| (1..=q).filter(|&k| gcd(k, q) == 1).count()).sum();
        assert_eq!(terms.len(), want);
        assert!(terms.iter().all(|t| t.q <= q_max && q_max < t.a && t.a <= t.q + q_max && gcd(t.a, t.q) == 1));
    }
}

#[test]
fn zero_frequency_normalisation() {
    for q_max in 1..=12 {
        let s: f64 = farey_terms(q_max).iter().map(|t| 2.0 / (t.a * t.q) as f64).sum();
        assert!((s - 1.0).abs() < 1e-13, "Q = {q_max}: {s}");
    }
}
