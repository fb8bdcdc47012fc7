use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fixed;
use super::interval::IntervalUnion;
use super::mitm::{
    count_pairs, halves, measures_from_stream, stream_union, tau_fixed, window_bounds,
    EnumerationStats,
};
use crate::analysis::{main_term_with, OmegaOptions};
use crate::forms::{
    detect_rational, p_from_n, DiagonalForm, EnumerationCost, Growth, SearchBox, Window,
    DEFAULT_HALF_BUDGET,
};
use crate::numbers::sieve_primes;
use crate::{Error, Result};

/// Representable and exceptional sets for `|λ₁p₁ + λ₂p₂ − μ| < τ` over primes `p ≤ X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPrimeScan {
    pub union: IntervalUnion,
    pub window_length: f64,
    pub representable: f64,
    pub exceptional: f64,
    pub primes: usize,
    pub stats: EnumerationStats,
    /// Set when `λ₁/λ₂` is within rounding of a rational with denominator ≤ 10⁶.
    pub rational_ratio: Option<(i64, u64)>,
}

pub fn two_prime_scan(
    lambda1: f64,
    lambda2: f64,
    tau: f64,
    x: u64,
    window: &Window,
) -> Result<TwoPrimeScan> {
    const OP: &str = "two_prime_scan";
    if lambda1 == 0.0 || lambda2 == 0.0 || !lambda1.is_finite() || !lambda2.is_finite() {
        return Err(Error::validation(
            OP,
            "coefficients must be finite and nonzero",
        ));
    }
    let t = tau_fixed(OP, tau)?;
    let (w0, w1) = window_bounds(OP, window)?;
    let primes = sieve_primes(x)?.primes;
    let side = |l: f64| -> Result<Vec<i64>> {
        let mut v = primes
            .iter()
            .map(|&p| fixed::from_f64(OP, l * p as f64))
            .collect::<Result<Vec<_>>>()?;
        v.sort_unstable();
        Ok(v)
    };
    let left = side(lambda1)?;
    let right = side(lambda2)?;
    let (pieces, visited) = stream_union(&left, &right, t, w0, w1);
    let n = primes.len() as u128;
    let m = measures_from_stream(
        &pieces,
        w0,
        w1,
        EnumerationStats {
            cost: EnumerationCost {
                split: 1,
                left: n,
                right: n,
            },
            visited,
        },
    );
    Ok(TwoPrimeScan {
        union: m.union,
        window_length: m.window_length,
        representable: m.representable,
        exceptional: m.exceptional,
        primes: primes.len(),
        stats: m.stats,
        rational_ratio: detect_rational(lambda1 / lambda2, 1_000_000).map(|r| (r.a, r.q)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub mu: f64,
    pub count: u64,
    pub main_term: f64,
    pub rel_error: f64,
    pub flagged: bool,
}

/// Grid scan of the asymptotic formula over `μ ∈ (N/2, N]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticScan {
    pub n: f64,
    pub p: i64,
    pub tau: f64,
    /// `N^{s/k−1} ψ(N)^{−1}`
    pub threshold: f64,
    pub rows: Vec<ScanRow>,
    pub flagged_fraction: f64,
    /// Flagged fraction times the window length `N/2`.
    pub measure_estimate: f64,
    pub cost: EnumerationCost,
}

pub fn asymptotic_error_scan(
    form: &DiagonalForm,
    n: f64,
    tau: f64,
    grid: usize,
    psi: Growth,
) -> Result<AsymptoticScan> {
    asymptotic_error_scan_with(form, n, tau, grid, psi, &OmegaOptions::default())
}

pub fn asymptotic_error_scan_with(
    form: &DiagonalForm,
    n: f64,
    tau: f64,
    grid: usize,
    psi: Growth,
    opts: &OmegaOptions,
) -> Result<AsymptoticScan> {
    const OP: &str = "asymptotic_error_scan";
    if grid == 0 {
        return Err(Error::validation(
            OP,
            "grid must contain at least one point",
        ));
    }
    if !(n >= 1.0) {
        return Err(Error::validation(OP, format!("N = {n} must be at least 1")));
    }
    let k = form.k();
    let mut p = p_from_n(n, k).round() as i64;
    while p > 1 && pow_ge(p, k, n) {
        p -= 1;
    }
    while !pow_ge(p + 1, k, n) {
        p += 1;
    }
    let search_box = SearchBox::positive(form.s(), p.max(1))?;
    let t = tau_fixed(OP, tau)?;
    let h = halves(OP, form, &search_box, DEFAULT_HALF_BUDGET)?;
    let exponent = form.s() as f64 / k as f64 - 1.0;
    let threshold = n.powf(exponent) / psi.eval(n);
    let mus: Vec<f64> = (1..=grid)
        .map(|i| n / 2.0 + (n / 2.0) * i as f64 / grid as f64)
        .collect();
    let rows: Vec<ScanRow> = mus
        .par_iter()
        .map(|&mu| {
            let m = fixed::from_f64(OP, mu)?;
            let count = count_pairs(&h.left, &h.right, m - t, m + t).0;
            let main = main_term_with(form, mu, n, tau, opts)?;
            let diff = (count as f64 - main).abs();
            Ok(ScanRow {
                mu,
                count,
                main_term: main,
                rel_error: if main > 0.0 {
                    diff / main
                } else {
                    f64::INFINITY
                },
                flagged: diff > threshold,
            })
        })
        .collect::<Result<_>>()?;
    let flagged = rows.iter().filter(|r| r.flagged).count();
    let flagged_fraction = flagged as f64 / grid as f64;
    Ok(AsymptoticScan {
        n,
        p,
        tau,
        threshold,
        rows,
        flagged_fraction,
        measure_estimate: flagged_fraction * n / 2.0,
        cost: h.cost,
    })
}

/// `p^k > N`
fn pow_ge(p: i64, k: u32, n: f64) -> bool {
    crate::forms::pow_f64(p, k) > n
}
