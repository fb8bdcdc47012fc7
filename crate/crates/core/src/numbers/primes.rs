use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTable {
    pub limit: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `p ≤ x` (for `x ≤ limit`).
    pub fn up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }
}

pub const SIEVE_LIMIT_MAX: u64 = 1 << 31;

/// Sieve of Eratosthenes over odd numbers.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit > SIEVE_LIMIT_MAX {
        return Err(Error::resource(
            "sieve_primes",
            format!("limit {limit} exceeds sieve budget {SIEVE_LIMIT_MAX}"),
        ));
    }
    let mut primes = Vec::new();
    if limit >= 2 {
        primes.push(2);
    }
    if limit >= 3 {
        // index i stands for 2i + 1
        let half = ((limit - 1) / 2) as usize + 1;
        let mut composite = vec![false; half];
        let mut i = 1usize;
        while (2 * i + 1) * (2 * i + 1) <= limit as usize {
            if !composite[i] {
                let p = 2 * i + 1;
                let mut j = (p * p) / 2;
                while j < half {
                    composite[j] = true;
                    j += p;
                }
            }
            i += 1;
        }
        primes.extend(
            (1..half)
                .filter(|&i| !composite[i])
                .map(|i| 2 * i as u64 + 1),
        );
    }
    Ok(PrimeTable { limit, primes })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
