//! Computational laboratory for diagonal Diophantine inequalities
//! `|λ₁x₁^k + … + λ_s x_s^k − μ| < τ`.
//!
//! The crate provides exact solution counting by meet-in-the-middle enumeration,
//! exact measures of representable and exceptional sets, Freeman's kernels and
//! their Fourier transforms, Weyl sums over integers, smooth numbers and primes,
//! arc dissections, the singular integral Ω, and the arithmetic of complete sums.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod arcs;
pub mod counting;
mod error;
pub mod expsums;
pub mod forms;
pub mod kernels;
pub mod numbers;
pub mod quad;

pub use error::{Error, Result};

pub use analysis::{
    exponent_fit, main_term, mean_value_parseval, minor_arc_mean_value, omega, MeanValueResult,
    OmegaEstimate, SingularIntegralSpec,
};
pub use arcs::{
    choose_t, dh_classify, hl_classify, minor_sup_profile, ArcDissection, ArcFamily, ArcLabel,
};
pub use counting::{
    asymptotic_error_scan, count_solutions, diagonal_solution_check, exceptional_measure,
    representable_measure_y, representable_union, two_prime_scan, CountResult, IntervalUnion,
};
pub use expsums::{
    prime_sum, smooth_weyl_sum, weyl_difference_poly, weyl_inequality_check, weyl_sum,
    DifferencedPoly, WeylSumSpec,
};
pub use forms::{
    diminishing_ranges, p_from_n, parameter_lookup, BoxConvention, DiagonalForm, DiminishingRanges,
    Growth, ParameterTable, SearchBox, TableId, TableRecord, ToleranceParams, Window,
};
pub use kernels::{
    eval_kernel, fourier_k1, fourier_k_sec9, h_l2_k1, sandwich_residual, HSupport, KernelKind,
    KernelSpec,
};
pub use numbers::{
    c_set, complete_sum, convergents, ramanujan, rho, sieve_primes, smooth_set, weight_wk,
    ArithmeticFnCache, PrimeTable, RationalApprox, SmoothSet,
};
