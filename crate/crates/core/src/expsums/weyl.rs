use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::phase::{e_frac, frac_mul, CompensatedSum};
use crate::numbers::{sieve_primes, smooth_set, PrimeTable, SmoothSet};
use crate::{Error, Result};

/// `Σ_{Q<x≤P} e(λα x^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylSumSpec {
    pub k: u32,
    pub lambda: f64,
    pub q: u64,
    pub p: u64,
}

/// `(P + k)^k` must stay below this so that every difference fits in `i128`.
const EXACT_LIMIT: f64 = 1.0e37;

impl WeylSumSpec {
    pub fn new(k: u32, lambda: f64, q: u64, p: u64) -> Result<Self> {
        const OP: &str = "WeylSumSpec";
        if k < 2 {
            return Err(Error::validation(OP, format!("k = {k} must be at least 2")));
        }
        if !(lambda.is_finite() && lambda != 0.0) {
            return Err(Error::validation(OP, "λ must be finite and nonzero"));
        }
        if q > p {
            return Err(Error::validation(
                OP,
                format!("range ({q}, {p}] is reversed"),
            ));
        }
        if ((p + k as u64) as f64).powi(k as i32) * 2f64.powi(k as i32) > EXACT_LIMIT {
            return Err(Error::resource(
                OP,
                format!("P = {p} is too large for exact phases at k = {k}"),
            ));
        }
        Ok(Self { k, lambda, q, p })
    }

    pub fn len(&self) -> u64 {
        self.p - self.q
    }

    pub fn is_empty(&self) -> bool {
        self.p == self.q
    }
}

fn binomial(n: u32, r: u32) -> i128 {
    let mut b = 1i128;
    for i in 0..r {
        b = b * (n - i) as i128 / (i + 1) as i128;
    }
    b
}

/// `Δ^j x^k` at `x` for `j = 0..=k`, unit step.
fn forward_differences(x: i128, k: u32) -> Vec<i128> {
    (0..=k)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(j, i) * (x + i as i128).pow(k)
                })
                .sum()
        })
        .collect()
}

/// Steps between exact restarts, keeping drift from the rounded top multiplier near `1e−12`.
pub fn block_length(k: u32) -> usize {
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    ((fact * 1.0e-12 / 1.2e-16).powf(1.0 / k as f64) as usize).clamp(8, 1 << 16)
}

fn engine_block(c: f64, k: u32, start: u64, len: usize) -> CompensatedSum {
    let mut z: Vec<Complex64> = forward_differences(start as i128, k)
        .into_iter()
        .map(|d| e_frac(frac_mul(c, d)))
        .collect();
    let mut acc = CompensatedSum::default();
    for _ in 0..len {
        acc.add(z[0]);
        for j in 0..k as usize {
            let next = z[j + 1];
            z[j] *= next;
        }
    }
    acc
}

/// Finite-difference phase engine: `k` running multipliers, exact restarts per block.
pub fn weyl_sum(spec: &WeylSumSpec, alpha: f64) -> Complex64 {
    weyl_sum_scaled(spec, spec.lambda * alpha)
}

/// As [`weyl_sum`] with the product `c = λα` given directly.
pub fn weyl_sum_scaled(spec: &WeylSumSpec, c: f64) -> Complex64 {
    let n = spec.len();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    if c == 0.0 {
        return Complex64::new(n as f64, 0.0);
    }
    let b = block_length(spec.k) as u64;
    let blocks = n.div_ceil(b);
    let parts: Vec<Complex64> = (0..blocks)
        .into_par_iter()
        .map(|i| {
            let start = spec.q + 1 + i * b;
            let len = b.min(spec.p + 1 - start) as usize;
            engine_block(c, spec.k, start, len).value()
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for p in parts {
        acc.add(p);
    }
    acc.value()
}

/// Term-by-term evaluation with exact phases.
pub fn weyl_sum_naive(spec: &WeylSumSpec, alpha: f64) -> Complex64 {
    let c = spec.lambda * alpha;
    let mut acc = CompensatedSum::default();
    for x in spec.q + 1..=spec.p {
        acc.add(e_frac(frac_mul(c, (x as i128).pow(spec.k))));
    }
    acc.value()
}

const CHUNK: usize = 4096;

fn sum_over(
    values: &[u64],
    weight: impl Fn(u64) -> f64 + Sync,
    phase: impl Fn(u64) -> f64 + Sync,
) -> Complex64 {
    let parts: Vec<Complex64> = values
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = CompensatedSum::default();
            for &v in chunk {
                acc.add(e_frac(phase(v)) * weight(v));
            }
            acc.value()
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for p in parts {
        acc.add(p);
    }
    acc.value()
}

/// `Σ_{x∈𝒜(P,R)} e(c x^k)` with `c = λα`.
pub fn smooth_weyl_sum(p: u64, r: u64, k: u32, c: f64) -> Result<Complex64> {
    let set = smooth_set(p, r)?;
    smooth_weyl_sum_on(&set, k, c)
}

pub fn smooth_weyl_sum_on(set: &SmoothSet, k: u32, c: f64) -> Result<Complex64> {
    WeylSumSpec::new(k, 1.0, 0, set.bound)?;
    Ok(sum_over(
        &set.members,
        |_| 1.0,
        |x| frac_mul(c, (x as i128).pow(k)),
    ))
}

/// `Σ_{p≤X} (log p) e(λαp)`.
pub fn prime_sum(x: u64, lambda: f64, alpha: f64) -> Result<Complex64> {
    let table = sieve_primes(x)?;
    prime_sum_on(&table, x, lambda, alpha)
}

pub fn prime_sum_on(table: &PrimeTable, x: u64, lambda: f64, alpha: f64) -> Result<Complex64> {
    if x > table.limit {
        return Err(Error::domain(
            "prime_sum",
            format!("table stops at {} < X = {x}", table.limit),
        ));
    }
    let c = lambda * alpha;
    Ok(sum_over(
        table.up_to(x),
        |p| (p as f64).ln(),
        |p| frac_mul(c, p as i128),
    ))
}
