//! Exact solution counts, representable and exceptional measures, diagonality checks
//! and windowed scans.

mod diagonal;
pub(crate) mod fixed;
mod interval;
mod mitm;
mod scan;

pub use diagonal::{
    diagonal_check_on, diagonal_solution_check, dyadic_range, DiagonalCheck, DIAGONAL_BUDGET,
};
pub use interval::IntervalUnion;
pub use mitm::{
    count_solutions, count_solutions_many, count_solutions_naive, count_solutions_with_budget,
    exceptional_measure, representable_measure_y, representable_union, window_measures,
    CountResult, EnumerationStats, WindowMeasures, NAIVE_BUDGET,
};
pub use scan::{
    asymptotic_error_scan, asymptotic_error_scan_with, two_prime_scan, AsymptoticScan, ScanRow,
    TwoPrimeScan,
};

/// Fixed-point resolution of enumerated sums.
pub const RESOLUTION: f64 = 1.0 / fixed::SCALE;
