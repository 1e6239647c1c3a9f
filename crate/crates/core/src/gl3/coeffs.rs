//! Hecke eigenvalue tables `λ(n₁, n₂)`: file ingestion, writing, and the `d₃` check form.

use super::params::GL3Params;
use crate::arith::{divisor3_table, factorize};
use crate::error::{Error, Result};
use crate::Cplx;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Tolerance on `|λ(1,1) - 1|` and on the Hecke-dual spot checks.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub params: GL3Params,
    pub entries: BTreeMap<(u64, u64), Cplx>,
    /// Largest `n₁²n₂` over the stored `λ(n₂, n₁)`.
    pub max_norm: u64,
    /// Every `λ(n₂, n₁)` with `n₁²n₂ ≤ truncation` is present (for the `d₃` table: every
    /// first-row and first-column entry up to this bound).
    pub truncation: u64,
    pub source: String,
    pub self_dual: bool,
    pub cuspidal: bool,
}

/// Size `n₁²n₂` attached to the key `(n₂, n₁)`, the indexing of dual Voronoi sums.
fn norm(m: u64, n: u64) -> u64 {
    n.saturating_mul(n).saturating_mul(m)
}

/// Largest `X` such that `λ(n₂, n₁)` is stored for every `n₁²n₂ ≤ X`.
fn complete_norm(entries: &BTreeMap<(u64, u64), Cplx>, max_norm: u64) -> u64 {
    let mut best = max_norm;
    let mut n1 = 1u64;
    while norm(1, n1) <= best {
        let mut n2 = 1u64;
        while norm(n2, n1) <= best {
            if !entries.contains_key(&(n2, n1)) {
                best = norm(n2, n1) - 1;
                break;
            }
            n2 += 1;
        }
        n1 += 1;
    }
    best
}

impl CoefficientTable {
    /// Validates `λ(1,1) = 1` and, for self-dual tables, `λ(n₁,n₂) = conj λ(n₂,n₁)` on stored pairs.
    pub fn from_entries(
        params: GL3Params,
        entries: BTreeMap<(u64, u64), Cplx>,
        self_dual: bool,
        source: impl Into<String>,
    ) -> Result<Self> {
        let one = entries.get(&(1, 1)).copied().ok_or_else(|| Error::Normalization("missing".into()))?;
        if (one - Cplx::new(1.0, 0.0)).norm() > NORMALIZATION_TOL {
            return Err(Error::Normalization(format!("{one}")));
        }
        if entries.keys().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::Format("indices must be positive".into()));
        }
        if self_dual {
            for (&(a, b), &v) in &entries {
                if let Some(&w) = entries.get(&(b, a)) {
                    if (v - w.conj()).norm() > 1e-8 * (1.0 + v.norm()) {
                        return Err(Error::Format(format!("self-dual flag but λ({a},{b}) ≠ conj λ({b},{a})")));
                    }
                }
            }
        }
        let max_norm = entries.keys().map(|&(a, b)| norm(a, b)).max().unwrap_or(1);
        let truncation = complete_norm(&entries, max_norm);
        Ok(CoefficientTable {
            params,
            entries,
            max_norm,
            truncation,
            source: source.into(),
            self_dual,
            cuspidal: true,
        })
    }

    pub fn get(&self, n1: u64, n2: u64) -> Option<Cplx> {
        self.entries.get(&(n1, n2)).copied()
    }

    /// `λ(n₁, n₂)`, or `InsufficientData` when the pair is not stored.
    pub fn lambda(&self, n1: u64, n2: u64) -> Result<Cplx> {
        self.get(n1, n2)
            .ok_or_else(|| Error::InsufficientData(format!("λ({n1},{n2}) not in table ({})", self.source)))
    }

    /// Largest `M` with `λ(1, n)` stored for every `n ≤ M`.
    pub fn first_row_depth(&self) -> u64 {
        let mut m = 0;
        while self.entries.contains_key(&(1, m + 1)) {
            m += 1;
        }
        m
    }

    /// Largest `M` with `λ(n, 1)` stored for every `n ≤ M`.
    pub fn first_column_depth(&self) -> u64 {
        let mut m = 0;
        while self.entries.contains_key(&(m + 1, 1)) {
            m += 1;
        }
        m
    }

    /// Serializes in the line format read by [`load_coefficients`], 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#nu1 {:.16e}", self.params.nu1.re);
        let _ = writeln!(out, "#nu2 {:.16e}", self.params.nu2.re);
        let _ = writeln!(out, "#selfdual {}", u8::from(self.self_dual));
        if !self.cuspidal {
            let _ = writeln!(out, "#cuspidal 0");
        }
        for (&(a, b), v) in &self.entries {
            let _ = writeln!(out, "{a} {b} {:.16e} {:.16e}", v.re, v.im);
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::Io(e.to_string()))
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>().map_err(|_| Error::Format(format!("line {line}: bad number {tok:?}")))
}

/// Parses the line format: `#nu1 <real>`, `#nu2 <real>`, `#selfdual <0|1>` headers,
/// optional `#cuspidal <0|1>`, then `n1 n2 re im` data lines. Other `#` lines are comments.
pub fn parse_coefficients(text: &str, source: &str) -> Result<CoefficientTable> {
    let (mut nu1, mut nu2, mut self_dual, mut cuspidal) = (None, None, None, true);
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(h) = l.strip_prefix('#') {
            let mut it = h.split_whitespace();
            let key = it.next().unwrap_or("");
            let val = it.next();
            match (key, val) {
                ("nu1", Some(v)) => nu1 = Some(parse_f64(v, line)?),
                ("nu2", Some(v)) => nu2 = Some(parse_f64(v, line)?),
                ("selfdual", Some("0")) => self_dual = Some(false),
                ("selfdual", Some("1")) => self_dual = Some(true),
                ("cuspidal", Some("0")) => cuspidal = false,
                ("cuspidal", Some("1")) => cuspidal = true,
                ("nu1" | "nu2" | "selfdual" | "cuspidal", _) => {
                    return Err(Error::Format(format!("line {line}: malformed header {l:?}")))
                }
                _ => {}
            }
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(Error::Format(format!("line {line}: expected `n1 n2 re im`")));
        }
        let n1: u64 = toks[0].parse().map_err(|_| Error::Format(format!("line {line}: bad index {:?}", toks[0])))?;
        let n2: u64 = toks[1].parse().map_err(|_| Error::Format(format!("line {line}: bad index {:?}", toks[1])))?;
        let v = Cplx::new(parse_f64(toks[2], line)?, parse_f64(toks[3], line)?);
        if entries.insert((n1, n2), v).is_some() {
            return Err(Error::Format(format!("line {line}: duplicate entry ({n1},{n2})")));
        }
    }
    let nu1 = nu1.ok_or_else(|| Error::Format("missing #nu1 header".into()))?;
    let nu2 = nu2.ok_or_else(|| Error::Format("missing #nu2 header".into()))?;
    let self_dual = self_dual.ok_or_else(|| Error::Format("missing #selfdual header".into()))?;
    let mut t = CoefficientTable::from_entries(GL3Params::from_real(nu1, nu2), entries, self_dual, source)?;
    t.cuspidal = cuspidal;
    if !cuspidal {
        t.truncation = t.first_row_depth().min(t.first_column_depth());
    }
    Ok(t)
}

pub fn load_coefficients(path: &Path) -> Result<CoefficientTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_coefficients(&text, &path.display().to_string())
}

/// The degenerate form with `α = (0,0,0)`: `λ(1,n) = λ(n,1) = d₃(n)` for `n ≤ n_max`.
/// Flagged non-cuspidal.
pub fn d3_table(n_max: u64) -> CoefficientTable {
    assert!(n_max >= 1);
    let d3 = divisor3_table(n_max as usize);
    let mut entries = BTreeMap::new();
    for n in 1..=n_max {
        let v = Cplx::new(d3[n as usize] as f64, 0.0);
        entries.insert((1, n), v);
        entries.insert((n, 1), v);
    }
    let max_norm = n_max * n_max;
    CoefficientTable {
        params: GL3Params::from_real(1.0 / 3.0, 1.0 / 3.0),
        entries,
        max_norm,
        truncation: n_max,
        source: format!("d3(n), n <= {n_max}"),
        self_dual: true,
        cuspidal: false,
    }
}

/// The same degenerate form with every `λ(n₂, n₁)`, `n₁²n₂ ≤ norm_max`: multiplicative, with
/// `λ(p^a, p^b) = (a+1)(b+1)(a+b+2)/2`, the dimension of the GL(3) representation of highest
/// weight `(a+b, b, 0)`. Flagged non-cuspidal.
pub fn d3_full_table(norm_max: u64) -> CoefficientTable {
    assert!(norm_max >= 1);
    let mut entries = BTreeMap::new();
    let mut n1 = 1u64;
    while n1 * n1 <= norm_max {
        let f1 = factorize(n1);
        for n2 in 1..=norm_max / (n1 * n1) {
            let f2 = factorize(n2);
            let mut primes: Vec<u64> = f1.iter().chain(f2.iter()).map(|&(p, _)| p).collect();
            primes.sort_unstable();
            primes.dedup();
            let exp = |f: &[(u64, u32)], p: u64| f.iter().find(|&&(q, _)| q == p).map_or(0u64, |&(_, e)| e as u64);
            let v: u64 = primes
                .iter()
                .map(|&p| {
                    let (a, b) = (exp(&f1, p), exp(&f2, p));
                    (a + 1) * (b + 1) * (a + b + 2) / 2
                })
                .product();
            entries.insert((n2, n1), Cplx::new(v as f64, 0.0));
        }
        n1 += 1;
    }
    CoefficientTable {
        params: GL3Params::from_real(1.0 / 3.0, 1.0 / 3.0),
        entries,
        max_norm: norm_max,
        truncation: norm_max,
        source: format!("d3 Hecke table, n1^2 n2 <= {norm_max}"),
        self_dual: true,
        cuspidal: false,
    }
}

/// `Σ_{n₁²n₂ ≤ x} |λ(n₂, n₁)|² / x` over the stored entries.
pub fn ramanujan_avg(table: &CoefficientTable, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::InvalidArgument(format!("x = {x} must be ≥ 1")));
    }
    if x > table.truncation as f64 {
        return Err(Error::InsufficientData(format!("x = {x} exceeds table truncation {}", table.truncation)));
    }
    let s: f64 = table
        .entries
        .iter()
        .filter(|(&(a, b), _)| (norm(a, b) as f64) <= x)
        .map(|(_, v)| v.norm_sqr())
        .sum();
    Ok(s / x)
}
