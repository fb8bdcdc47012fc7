//! Weyl sums, smooth and prime exponential sums, and Weyl differencing.

mod phase;
mod poly;
mod weyl;

pub use phase::{e_frac, frac_mul, CompensatedSum};
pub use poly::{
    iterated_difference, weyl_difference_poly, weyl_inequality_check, DifferencedPoly, Monomial,
    WeylInequality, WEYL_CHECK_BUDGET,
};
pub use weyl::{
    block_length, prime_sum, prime_sum_on, smooth_weyl_sum, smooth_weyl_sum_on, weyl_sum,
    weyl_sum_naive, weyl_sum_scaled, WeylSumSpec,
};
