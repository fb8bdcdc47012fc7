//! The singular integral, main terms, Parseval mean values and exponent fits.

mod fit;
mod meanvalue;
mod omega;

pub use fit::{exponent_fit, MeanValueResult};
pub use meanvalue::{
    mean_value_brute, mean_value_parseval, mean_value_quadrature, minor_arc_mean_value,
    smooth_members, MinorArcMeanValue, QuadratureMeanValue, MINOR_NODE_BUDGET,
    PARSEVAL_TUPLE_BUDGET,
};
pub use omega::{
    main_term, main_term_with, omega, omega_estimate, OmegaEstimate, OmegaMethod, OmegaOptions,
    SingularIntegralSpec,
};
