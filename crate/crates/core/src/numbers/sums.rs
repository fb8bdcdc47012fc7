use num_complex::Complex64;

use super::arith::{divisors, factorize, gcd, gcd_i, mobius, pow_mod};
use crate::{Error, Result};

/// `e(x) = exp(2πi x)`.
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    Complex64::new(c, s)
}

/// `e(n/q)` with `0 ≤ n < q`, folded to `[-1/2, 1/2]` before the trigonometric call.
pub fn e_rational(n: u64, q: u64) -> Complex64 {
    let n = n % q;
    if 2 * n > q {
        e(-((q - n) as f64) / q as f64)
    } else {
        e(n as f64 / q as f64)
    }
}

fn power_histogram(q: u64, k: u32) -> Vec<u64> {
    let mut hist = vec![0u64; q as usize];
    for r in 0..q {
        hist[pow_mod(r, k as u64, q) as usize] += 1;
    }
    hist
}

/// `S_k(q,a) = Σ_{r=1}^{q} e(a r^k / q)`; one exponential per distinct residue of `a r^k mod q`.
pub fn complete_sum(q: u64, a: i64, k: u32) -> Result<Complex64> {
    const OP: &str = "complete_sum";
    if q == 0 {
        return Err(Error::domain(OP, "q must be positive"));
    }
    if k < 2 {
        return Err(Error::domain(OP, "k must be at least 2"));
    }
    if gcd_i(a, q as i64) != 1 {
        return Err(Error::domain(OP, format!("gcd({a}, {q}) ≠ 1")));
    }
    let a_mod = a.rem_euclid(q as i64) as u64;
    let hist = power_histogram(q, k);
    let mut by_phase = vec![0u64; q as usize];
    for (res, &c) in hist.iter().enumerate() {
        if c > 0 {
            by_phase[((a_mod as u128 * res as u128) % q as u128) as usize] += c;
        }
    }
    Ok(by_phase
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(n, &c)| e_rational(n as u64, q) * c as f64)
        .sum())
}

/// Ramanujan's sum `c_q(h)` by the divisor formula `Σ_{d | (q,h)} d·μ(q/d)`.
pub fn ramanujan(q: u64, h: i64) -> i64 {
    assert!(q >= 1, "ramanujan: q must be positive");
    let g = gcd(q, h.unsigned_abs());
    let g = if g == 0 { q } else { g };
    divisors(g)
        .into_iter()
        .map(|d| d as i64 * mobius(q / d))
        .sum()
}

/// `Σ_{1 ≤ a ≤ q, (a,q)=1} e(ah/q)` evaluated term by term.
pub fn ramanujan_direct(q: u64, h: i64) -> Complex64 {
    let h_mod = h.rem_euclid(q as i64) as u64;
    (1..=q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| e_rational(((a as u128 * h_mod as u128) % q as u128) as u64, q))
        .sum()
}

/// The multiplicative weight with `w_k(p^{uk+v}) = k p^{-u-1/2}` for `v = 1`
/// and `p^{-u-1}` for `2 ≤ v ≤ k`.
pub fn weight_wk(q: u64, k: u32) -> f64 {
    assert!(q >= 1 && k >= 2, "weight_wk: need q ≥ 1 and k ≥ 2");
    factorize(q)
        .into_iter()
        .map(|(p, e)| prime_power_weight(p, e, k))
        .product()
}

pub fn prime_power_weight(p: u64, e: u32, k: u32) -> f64 {
    if e == 0 {
        return 1.0;
    }
    let u = (e - 1) / k;
    let v = e - u * k;
    let p = p as f64;
    if v == 1 {
        k as f64 * p.powf(-(u as f64) - 0.5)
    } else {
        p.powi(-(u as i32) - 1)
    }
}

/// Number of pairs `(x, y) ∈ [1,d]²` with `x^k ≡ y^k (mod d)`, by CRT over prime powers.
pub fn rho(d: u64, k: u32) -> u64 {
    assert!(d >= 1, "rho: d must be positive");
    factorize(d)
        .into_iter()
        .map(|(p, e)| rho_residue(p.pow(e), k))
        .product()
}

/// `ρ(d)` from the histogram of `x^k mod d` over a full residue system (no factorization).
pub fn rho_residue(d: u64, k: u32) -> u64 {
    power_histogram(d, k).iter().map(|&c| c * c).sum()
}

/// `ρ(d)` by enumerating all `d²` pairs.
pub fn rho_brute(d: u64, k: u32) -> u64 {
    let pw: Vec<u64> = (1..=d).map(|x| pow_mod(x, k as u64, d)).collect();
    let mut n = 0;
    for &a in &pw {
        for &b in &pw {
            n += (a == b) as u64;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_sum_examples() {
        let z = complete_sum(1, 0, 3).unwrap();
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(complete_sum(2, 1, 2).unwrap().norm() < 1e-15);
        let z = complete_sum(7, 1, 3).unwrap();
        let direct: Complex64 = (1..=7u64).map(|r| e((r * r * r) as f64 / 7.0)).sum();
        assert!((z - direct).norm() < 1e-12);
        let expect = 1.0 + 6.0 * (std::f64::consts::TAU / 7.0).cos();
        assert!((z.re - expect).abs() < 1e-12 && z.im.abs() < 1e-12);
        assert!((expect - 4.7410).abs() < 1e-4);
        assert!(matches!(complete_sum(4, 2, 3), Err(Error::Domain { .. })));
    }

    #[test]
    fn gauss_sum_magnitude() {
        for q in [3u64, 5, 7, 11, 13, 101] {
            for a in 1..q as i64 {
                assert!((complete_sum(q, a, 2).unwrap().norm() - (q as f64).sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan(2, 1), -1);
        assert_eq!(ramanujan(6, 4), -1);
        assert_eq!(ramanujan(1, 5), 1);
        for q in 1..50 {
            assert_eq!(ramanujan(q, 0), crate::numbers::arith::euler_phi(q) as i64);
        }
        let d = ramanujan_direct(6, 4);
        assert!((d.re + 1.0).abs() < 1e-12 && d.im.abs() < 1e-12);
    }

    #[test]
    fn weight_examples() {
        assert!((weight_wk(2, 3) - 3.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(weight_wk(8, 3), 0.5);
        assert!((weight_wk(16, 3) - 3.0 * 2f64.powf(-1.5)).abs() < 1e-15);
        assert_eq!(weight_wk(1, 5), 1.0);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(1, 3), 1);
        assert_eq!(rho_brute(7, 3), 19);
        assert_eq!(rho(7, 3), 19);
        assert_eq!(rho_brute(14, 3), rho_brute(2, 3) * rho_brute(7, 3));
        for d in 1..300 {
            assert_eq!(rho(d, 3), rho_brute(d, 3), "d={d}");
            assert_eq!(rho_residue(d, 4), rho_brute(d, 4), "d={d}");
        }
    }
}
