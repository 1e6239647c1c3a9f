//! Smooth partition of unity `Σ_J W_J = 1` on `[-R, R]`: a flat piece on `[-1, 1]` and
//! dyadic-type pieces supported on `±[J, 4J/3]`.

use super::weight::{Profile, SmoothWeight};

/// Admissible growth ratios: consecutive supports must overlap (`ρ < 4/3`) and each
/// piece must reach one on a nonempty plateau (`ρ² >= 4/3`).
pub const RATIO_MIN: f64 = 1.154_700_538_379_251_6;
pub const RATIO_MAX: f64 = 4.0 / 3.0;
const DEFAULT_RATIO: f64 = 7.0 / 6.0;

#[derive(Clone, Debug)]
pub struct PartitionPiece {
    /// Signed left end of the support of `W_J` (0 for the central piece).
    pub j: f64,
    pub weight: SmoothWeight<f64>,
}

/// Builds the family for `range_bound > 1`. `count_hint` asks for roughly that many pieces
/// per side; the ratio is clamped to the admissible window.
pub fn build_partition(range_bound: f64, count_hint: Option<usize>) -> Vec<PartitionPiece> {
    assert!(range_bound > 1.0, "range bound must exceed 1");
    let j0 = 0.75;
    let ratio = match count_hint {
        Some(k) if k > 0 => (range_bound / j0).powf(1.0 / (k as f64 + 1.0)).clamp(RATIO_MIN + 1e-9, RATIO_MAX - 1e-3),
        _ => DEFAULT_RATIO,
    };
    // J_0 = 3/4 is notional: the central piece falls on [J_1, 4 J_0 / 3] = [J_1, 1]
    let mut js = vec![j0, j0 * ratio];
    while *js.last().unwrap() < range_bound {
        let next = js.last().unwrap() * ratio;
        js.push(next);
    }
    // js[k] = J_k; pieces k = 1..K where J_{K+1} >= R
    let k_max = js.len() - 2;
    let mut out = Vec::with_capacity(2 * k_max + 1);
    let j1 = js[1];
    out.push(PartitionPiece { j: 0.0, weight: SmoothWeight::plateau(-1.0, -j1, j1, 1.0) });
    for k in 1..=k_max {
        let (lo, a, b, hi) = (js[k], 4.0 * js[k - 1] / 3.0, js[k + 1], 4.0 * js[k] / 3.0);
        let w = SmoothWeight::plateau(lo, a, b, hi).with_profile(Profile::Dyadic);
        let m = SmoothWeight::plateau(-hi, -b, -a, -lo).with_profile(Profile::Dyadic);
        out.push(PartitionPiece { j: lo, weight: w });
        out.push(PartitionPiece { j: -lo, weight: m });
    }
    out.sort_by(|x, y| x.j.total_cmp(&y.j));
    out
}

pub fn partition_sum(pieces: &[PartitionPiece], x: f64) -> f64 {
    pieces.iter().map(|p| p.weight.value(x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_to_one() {
        for &(r, hint) in &[(1.5, None), (50.0, None), (1.0e4, Some(30))] {
            let p = build_partition(r, hint);
            for i in 0..=1000 {
                let x = -r + 2.0 * r * i as f64 / 1000.0;
                assert!((partition_sum(&p, x) - 1.0).abs() < 1e-12, "r={r} x={x}");
            }
        }
    }

    #[test]
    fn supports() {
        let p = build_partition(100.0, None);
        for piece in &p {
            let (lo, hi) = piece.weight.support;
            if piece.j == 0.0 {
                assert_eq!((lo, hi), (-1.0, 1.0));
            } else if piece.j > 0.0 {
                assert!((hi - 4.0 * lo / 3.0).abs() < 1e-12);
            } else {
                assert!((lo - 4.0 * hi / 3.0).abs() < 1e-12);
            }
        }
        let count = p.len();
        assert!(count < 2 * ((100f64).ln() / (7.0f64 / 6.0).ln()) as usize + 6);
    }
}
