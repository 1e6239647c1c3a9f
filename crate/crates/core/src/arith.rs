//! Modular arithmetic, Kloosterman sums, the bilinear character sum and divisor functions.

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, e};
use crate::Cplx;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b)`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `a` modulo `m` in `[0, m)`, if it exists. Modulus 1 gives 0.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// `e(k / m)` with the numerator reduced exactly first.
#[inline]
pub fn e_frac(k: i128, m: i64) -> Cplx {
    let r = k.rem_euclid(m as i128) as f64;
    e(r / m as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KloostermanArgs {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// `S(a, b; c) = Σ_{x mod c, (x,c)=1} e((a x + b x̄)/c)`.
pub fn kloosterman(a: i64, b: i64, c: i64) -> Cplx {
    assert!(c >= 1, "modulus must be positive");
    compensated_sum((0..c).filter_map(|x| {
        let xb = mod_inverse(x, c)?;
        if c > 1 && gcd(x, c) != 1 {
            return None;
        }
        Some(e_frac(a as i128 * x as i128 + b as i128 * xb as i128, c))
    }))
}

impl KloostermanArgs {
    pub fn eval(&self) -> Cplx {
        kloosterman(self.a, self.b, self.c)
    }
}

/// Weil's bound `d(c) sqrt(c) sqrt(gcd(a, b, c))`.
pub fn weil_bound(a: i64, b: i64, c: i64) -> f64 {
    divisor_count(c as u64) as f64 * (c as f64).sqrt() * (gcd(gcd(a, b), c) as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharSumArgs {
    pub r1: i64,
    pub r2: i64,
    pub q1: i64,
    pub q2: i64,
    pub n1: i64,
    pub n2: i64,
}

impl CharSumArgs {
    pub fn validate(&self) -> Result<()> {
        if self.q1 < 1 || self.q2 < 1 || self.n1 < 1 {
            return Err(Error::InvalidArgument("moduli must be positive".into()));
        }
        if self.q1 % self.n1 != 0 || self.q2 % self.n1 != 0 {
            return Err(Error::InvalidArgument(format!("n1 = {} must divide q1 = {} and q2 = {}", self.n1, self.q1, self.q2)));
        }
        if gcd(self.r1, self.q1) != 1 || gcd(self.r2, self.q2) != 1 {
            return Err(Error::InvalidArgument("r1, r2 must be coprime to q1, q2".into()));
        }
        Ok(())
    }

    pub fn q_hat(&self) -> (i64, i64) {
        (self.q1 / self.n1, self.q2 / self.n1)
    }
}

/// `Σ_{β mod q̂1 q̂2} S(r̄1, β; q̂1) S(r̄2, β; q̂2) e(β n2 / (q̂1 q̂2))` with `q̂i = qi / n1`.
pub fn character_sum(args: &CharSumArgs) -> Result<Cplx> {
    args.validate()?;
    let (h1, h2) = args.q_hat();
    let rb1 = mod_inverse(args.r1, h1).expect("coprime checked");
    let rb2 = mod_inverse(args.r2, h2).expect("coprime checked");
    let s1: Vec<Cplx> = (0..h1).map(|b| kloosterman(rb1, b, h1)).collect();
    let s2: Vec<Cplx> = (0..h2).map(|b| kloosterman(rb2, b, h2)).collect();
    let m = h1 * h2;
    Ok(compensated_sum(
        (0..m).map(|beta| s1[(beta % h1) as usize] * s2[(beta % h2) as usize] * e_frac(beta as i128 * args.n2 as i128, m)),
    ))
}

/// Ramanujan sum `c_q(m) = Σ_{x mod q, (x,q)=1} e(m x / q)`, via `Σ_{d | (q,m)} μ(q/d) d`.
pub fn ramanujan_sum(q: i64, m: i64) -> i64 {
    let g = gcd(q, m);
    let g = if g == 0 { q } else { g };
    divisors(g as u64).into_iter().map(|d| mobius(q as u64 / d) * d as i64).sum()
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, k) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, k)| k as u64 + 1).product()
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of ordered triples `(a, b, c)` with `a b c = n`: `Π C(k + 2, 2)` over `p^k || n`.
pub fn divisor3(n: u64) -> u64 {
    assert!(n >= 1);
    factorize(n).iter().map(|&(_, k)| (k as u64 + 2) * (k as u64 + 1) / 2).product()
}

/// `d_3(n)` for all `n <= n_max` by a multiplicative sieve (index 0 unused).
pub fn divisor3_table(n_max: usize) -> Vec<u64> {
    let mut d2 = vec![0u64; n_max + 1];
    for a in 1..=n_max {
        for m in (a..=n_max).step_by(a) {
            d2[m] += 1;
        }
    }
    let mut d3 = vec![0u64; n_max + 1];
    for a in 1..=n_max {
        for (j, m) in (a..=n_max).step_by(a).enumerate() {
            d3[m] += d2[j + 1];
        }
    }
    d3
}
