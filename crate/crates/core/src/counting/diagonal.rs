use serde::{Deserialize, Serialize};

use crate::forms::{pow_f64, DiminishingRanges};
use crate::{Error, Result};

/// Solutions of `|Σⱼ λⱼ(xⱼ^k − yⱼ^k) + d| < δ` and how many of them are off the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalCheck {
    pub count: u64,
    pub off_diagonal: u64,
    pub all_diagonal: bool,
    /// Inclusive integer ranges enumerated for each `xⱼ, yⱼ`.
    pub ranges: Vec<(i64, i64)>,
}

pub const DIAGONAL_BUDGET: u128 = 2_000_000_000;

/// Brute force over `xⱼ, yⱼ ∈ [loⱼ, hiⱼ]`.
pub fn diagonal_check_on(
    coeffs: &[f64],
    k: u32,
    ranges: &[(i64, i64)],
    delta: f64,
    d: f64,
) -> Result<DiagonalCheck> {
    const OP: &str = "diagonal_solution_check";
    if coeffs.len() != ranges.len() || coeffs.is_empty() {
        return Err(Error::validation(OP, "need one range per coefficient"));
    }
    if !(delta > 0.0) {
        return Err(Error::validation(
            OP,
            format!("δ = {delta} must be positive"),
        ));
    }
    let work: u128 = ranges
        .iter()
        .map(|&(lo, hi)| ((hi - lo + 1).max(0) as u128).pow(2))
        .product();
    if work > DIAGONAL_BUDGET {
        return Err(Error::resource(
            OP,
            format!("{work} tuples exceed the enumeration budget {DIAGONAL_BUDGET}"),
        ));
    }
    // per variable: every difference λ(x^k − y^k) with its diagonal flag
    let diffs: Vec<Vec<(f64, bool)>> = coeffs
        .iter()
        .zip(ranges)
        .map(|(&l, &(lo, hi))| {
            let mut v = Vec::new();
            for x in lo..=hi {
                for y in lo..=hi {
                    v.push((l * (pow_f64(x, k) - pow_f64(y, k)), x == y));
                }
            }
            v
        })
        .collect();
    let mut count = 0u64;
    let mut off = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn walk(
        diffs: &[Vec<(f64, bool)>],
        j: usize,
        acc: f64,
        diag: bool,
        d: f64,
        delta: f64,
        count: &mut u64,
        off: &mut u64,
    ) {
        if j == diffs.len() {
            if (acc + d).abs() < delta {
                *count += 1;
                if !diag {
                    *off += 1;
                }
            }
            return;
        }
        for &(v, dg) in &diffs[j] {
            walk(diffs, j + 1, acc + v, diag && dg, d, delta, count, off);
        }
    }
    walk(&diffs, 0, 0.0, true, d, delta, &mut count, &mut off);
    Ok(DiagonalCheck {
        count,
        off_diagonal: off,
        all_diagonal: off == 0,
        ranges: ranges.to_vec(),
    })
}

/// Integers in `(P, 2P]`.
pub fn dyadic_range(p: f64) -> (i64, i64) {
    (p.floor() as i64 + 1, (2.0 * p).floor() as i64)
}

/// Enumerates `Pⱼ < xⱼ, yⱼ ≤ 2Pⱼ` with `|μ − ν| ≤ P_t^{k−1}` required.
pub fn diagonal_solution_check(
    coeffs: &[f64],
    ranges: &DiminishingRanges,
    delta: f64,
    mu_minus_nu: f64,
) -> Result<DiagonalCheck> {
    const OP: &str = "diagonal_solution_check";
    if coeffs.len() != ranges.t as usize {
        return Err(Error::validation(
            OP,
            format!("{} coefficients for t = {}", coeffs.len(), ranges.t),
        ));
    }
    if mu_minus_nu.abs() > ranges.m_max {
        return Err(Error::domain(
            OP,
            format!(
                "|μ − ν| = {} exceeds P_t^(k−1) = {}",
                mu_minus_nu.abs(),
                ranges.m_max
            ),
        ));
    }
    let int_ranges: Vec<(i64, i64)> = ranges.ranges.iter().map(|&p| dyadic_range(p)).collect();
    diagonal_check_on(coeffs, ranges.k, &int_ranges, delta, mu_minus_nu)
}
