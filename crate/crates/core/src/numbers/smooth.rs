use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Integers `1 ≤ n ≤ bound` whose prime factors all satisfy the set's defining predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothSet {
    pub bound: u64,
    pub smoothness: u64,
    pub members: Vec<u64>,
}

impl SmoothSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

pub const SMOOTH_BOUND_MAX: u64 = 1 << 30;

fn largest_prime_factors(p: usize) -> Vec<u32> {
    let mut lpf = vec![1u32; p + 1];
    for i in 2..=p {
        if lpf[i] == 1 {
            let mut j = i;
            while j <= p {
                lpf[j] = i as u32;
                j += i;
            }
        }
    }
    lpf
}

fn check_bound(op: &'static str, p: u64) -> Result<()> {
    if p > SMOOTH_BOUND_MAX {
        return Err(Error::resource(
            op,
            format!("bound {p} exceeds {SMOOTH_BOUND_MAX}"),
        ));
    }
    Ok(())
}

/// The set of `R`-smooth integers in `[1, P]`.
pub fn smooth_set(p: u64, r: u64) -> Result<SmoothSet> {
    const OP: &str = "smooth_set";
    if p == 0 || r == 0 {
        return Err(Error::domain(OP, "P and R must be positive"));
    }
    check_bound(OP, p)?;
    let members = if r >= p {
        (1..=p).collect()
    } else {
        let lpf = largest_prime_factors(p as usize);
        (1..=p).filter(|&n| lpf[n as usize] as u64 <= r).collect()
    };
    Ok(SmoothSet {
        bound: p,
        smoothness: r,
        members,
    })
}

/// Products `l·m` with `l ≤ √R`, `m ≤ P/√R` and every prime factor of `m` in `(√R, R]`.
pub fn c_set(p: u64, r: u64) -> Result<SmoothSet> {
    const OP: &str = "c_set";
    if p == 0 {
        return Err(Error::domain(OP, "P must be positive"));
    }
    if r < 4 {
        return Err(Error::domain(
            OP,
            format!("R = {r} < 4 admits no primes in (√R, R]"),
        ));
    }
    check_bound(OP, p)?;
    let l_max = (1..).take_while(|l: &u64| l * l <= r).last().unwrap_or(1);
    // m ≤ P/√R  ⇔  m²R ≤ P²
    let m_max = {
        let mut m = ((p as f64) / (r as f64).sqrt()).floor() as u64 + 1;
        while m > 0 && (m as u128) * (m as u128) * (r as u128) > (p as u128) * (p as u128) {
            m -= 1;
        }
        m
    };
    let lpf = largest_prime_factors(m_max as usize);
    let admissible = |mut m: usize| {
        while m > 1 {
            let q = lpf[m] as u64;
            if q * q <= r || q > r {
                return false;
            }
            m /= q as usize;
            // strip remaining copies and move to the next largest prime
            while m % q as usize == 0 {
                m /= q as usize;
            }
        }
        true
    };
    let mut members: Vec<u64> = Vec::new();
    for m in 1..=m_max {
        if admissible(m as usize) {
            members.extend((1..=l_max).map(|l| l * m));
        }
    }
    members.sort_unstable();
    members.dedup();
    Ok(SmoothSet {
        bound: p,
        smoothness: r,
        members,
    })
}
