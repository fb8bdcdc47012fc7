//! Primes, smooth numbers, continued fractions and the arithmetic of complete sums.

pub mod arith;
mod cf;
mod primes;
mod smooth;
mod sums;

pub use arith::ArithmeticFnCache;
pub use cf::{convergents, nearest_numerator, residual, RationalApprox};
pub use primes::{is_prime, sieve_primes, PrimeTable, SIEVE_LIMIT_MAX};
pub use smooth::{c_set, smooth_set, SmoothSet, SMOOTH_BOUND_MAX};
pub use sums::{
    complete_sum, e, e_rational, prime_power_weight, ramanujan, ramanujan_direct, rho, rho_brute,
    rho_residue, weight_wk,
};
