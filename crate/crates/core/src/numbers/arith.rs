use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn gcd_i(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Prime factorization by trial division, as ascending `(p, e)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius: n must be positive");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Tables of smallest prime factor, Möbius and Euler φ up to a limit (linear sieve).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticFnCache {
    limit: usize,
    spf: Vec<u32>,
    mu: Vec<i8>,
    phi: Vec<u32>,
}

impl ArithmeticFnCache {
    pub const MAX_LIMIT: usize = 1 << 28;

    pub fn new(limit: usize) -> Result<Self> {
        if limit > Self::MAX_LIMIT {
            return Err(Error::resource(
                "ArithmeticFnCache::new",
                format!("limit {limit} exceeds table budget {}", Self::MAX_LIMIT),
            ));
        }
        let n = limit + 1;
        let mut spf = vec![0u32; n];
        let mut mu = vec![0i8; n];
        let mut phi = vec![0u32; n];
        let mut primes: Vec<u32> = Vec::new();
        if n > 1 {
            mu[1] = 1;
            phi[1] = 1;
        }
        for i in 2..n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mu[i] = -1;
                phi[i] = i as u32 - 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m >= n {
                    break;
                }
                spf[m] = p;
                if p == spf[i] {
                    mu[m] = 0;
                    phi[m] = phi[i] * p;
                } else {
                    mu[m] = -mu[i];
                    phi[m] = phi[i] * (p - 1);
                }
            }
        }
        Ok(Self {
            limit,
            spf,
            mu,
            phi,
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Smallest prime factor of `n`; `spf(1) = 1`.
    pub fn spf(&self, n: usize) -> u32 {
        if n == 1 {
            1
        } else {
            self.spf[n]
        }
    }

    pub fn mobius(&self, n: usize) -> i8 {
        self.mu[n]
    }

    pub fn phi(&self, n: usize) -> u32 {
        self.phi[n]
    }

    pub fn gcd(&self, a: u64, b: u64) -> u64 {
        gcd(a, b)
    }

    /// Largest prime factor of `n` via repeated smallest-factor division; 1 for `n = 1`.
    pub fn largest_prime_factor(&self, mut n: usize) -> u32 {
        let mut last = 1;
        while n > 1 {
            let p = self.spf[n];
            last = p;
            n /= p as usize;
        }
        last
    }
}
