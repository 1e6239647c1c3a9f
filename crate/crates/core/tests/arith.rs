use gl3_core::arith::*;
use gl3_core::Cplx;
use proptest::prelude::*;
use std::f64::consts::TAU;

/// Kloosterman sum by plain enumeration with a brute-force inverse.
fn kloosterman_naive(a: i64, b: i64, c: i64) -> Cplx {
    let mut s = Cplx::new(0.0, 0.0);
    for x in 0..c {
        let Some(xb) = (0..c).find(|&y| (x * y).rem_euclid(c) == 1 % c) else { continue };
        let k = (a * x + b * xb).rem_euclid(c) as f64 / c as f64;
        s += Cplx::from_polar(1.0, TAU * k);
    }
    s
}

fn phi(n: i64) -> i64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as i64
}

proptest! {
    #[test]
    fn weil_bound_holds(a in -500i64..500, b in -500i64..500, c in 1i64..400) {
        let s = kloosterman(a, b, c);
        prop_assert!(s.norm() <= weil_bound(a, b, c) * (1.0 + 1e-12));
    }

    #[test]
    fn kloosterman_is_real_and_symmetric(a in -200i64..200, b in -200i64..200, c in 1i64..150) {
        let s = kloosterman(a, b, c);
        prop_assert!(s.im.abs() < 1e-10 * (c as f64));
        prop_assert!((s - kloosterman(b, a, c)).norm() < 1e-10 * (c as f64));
        prop_assert!((s - kloosterman(-a, -b, c)).norm() < 1e-10 * (c as f64));
    }

    #[test]
    fn kloosterman_matches_enumeration(a in -50i64..50, b in -50i64..50, c in 1i64..60) {
        prop_assert!((kloosterman(a, b, c) - kloosterman_naive(a, b, c)).norm() < 1e-10);
    }

    #[test]
    fn twisted_multiplicativity(a in -40i64..40, b in -40i64..40, c1 in 1i64..25, c2 in 1i64..25) {
        prop_assume!(gcd(c1, c2) == 1);
        let i1 = mod_inverse(c1.rem_euclid(c2), c2).unwrap_or(0);
        let i2 = mod_inverse(c2.rem_euclid(c1), c1).unwrap_or(0);
        let lhs = kloosterman(a, b, c1 * c2);
        let rhs = kloosterman(a * i2, b * i2, c1) * kloosterman(a * i1, b * i1, c2);
        prop_assert!((lhs - rhs).norm() < 1e-9 * (c1 * c2) as f64);
    }

    #[test]
    fn d3_is_multiplicative(m in 1u64..400, n in 1u64..400) {
        prop_assume!(gcd(m as i64, n as i64) == 1);
        prop_assert_eq!(divisor3(m * n), divisor3(m) * divisor3(n));
    }

    #[test]
    fn d3_is_divisor_sum_of_d(n in 1u64..3000) {
        let want: u64 = divisors(n).into_iter().map(divisor_count).sum();
        prop_assert_eq!(divisor3(n), want);
    }

    #[test]
    fn ramanujan_sum_is_kloosterman_with_zero(q in 1i64..200, m in -300i64..300) {
        prop_assert!((kloosterman(m, 0, q).re - ramanujan_sum(q, m) as f64).abs() < 1e-9);
    }
}

/// The character sum from its definition, with every Kloosterman sum enumerated.
fn character_sum_naive(r1: i64, r2: i64, q1: i64, q2: i64, n1: i64, n2: i64) -> Cplx {
    let (h1, h2) = (q1 / n1, q2 / n1);
    let inv = |r: i64, h: i64| (0..h).find(|&y| (r * y).rem_euclid(h) == 1 % h).unwrap();
    let (rb1, rb2) = (inv(r1, h1), inv(r2, h2));
    let m = h1 * h2;
    let mut s = Cplx::new(0.0, 0.0);
    for beta in 0..m {
        let k = kloosterman_naive(rb1, beta, h1) * kloosterman_naive(rb2, beta, h2);
        s += k * Cplx::from_polar(1.0, TAU * (beta * n2).rem_euclid(m) as f64 / m as f64);
    }
    s
}

#[test]
fn character_sum_matches_double_loop() {
    for &(r1, r2, n2) in &[(1, 1, 0), (1, 5, 0), (5, 7, 3), (-1, 1, -4), (7, 11, 12)] {
        for &n1 in &[1, 2, 3, 6] {
            let args = CharSumArgs { r1, r2, q1: 6 * 2, q2: 6 * 2, n1, n2 };
            if args.validate().is_err() {
                continue;
            }
            let got = character_sum(&args).unwrap();
            let want = character_sum_naive(r1, r2, 12, 12, n1, n2);
            assert!((got - want).norm() < 1e-8, "{args:?}: {got} vs {want}");
        }
    }
    let args = CharSumArgs { r1: 1, r2: 1, q1: 6, q2: 6, n1: 3, n2: 0 };
    assert!((character_sum(&args).unwrap() - character_sum_naive(1, 1, 6, 6, 3, 0)).norm() < 1e-10);
}

#[test]
fn character_sum_vanishes_off_diagonal_at_zero_frequency() {
    // n2 = 0 with q̂1 ≠ q̂2
    for &(q1, q2) in &[(5, 7), (4, 9), (6, 10)] {
        let n1 = gcd(q1, q2);
        let args = CharSumArgs { r1: 1, r2: 1, q1, q2, n1, n2: 0 };
        let v = character_sum(&args).unwrap();
        assert!(v.norm() < 1e-9 * (q1 * q2) as f64, "{args:?}: {v}");
    }
}

#[test]
fn character_sum_guards() {
    let bad_divisor = CharSumArgs { r1: 1, r2: 1, q1: 6, q2: 9, n1: 2, n2: 0 };
    assert!(character_sum(&bad_divisor).is_err());
    let not_coprime = CharSumArgs { r1: 2, r2: 1, q1: 6, q2: 6, n1: 1, n2: 0 };
    assert!(character_sum(&not_coprime).is_err());
}

#[test]
fn totient_counts_units() {
    for n in 1..60 {
        let units = (0..n).filter(|&x| mod_inverse(x, n).is_some()).count() as i64;
        assert_eq!(units, phi(n), "n = {n}");
    }
}
