//! Fixed-point reals with `2⁻²⁴` resolution. Every enumerated sum is an exact integer
//! combination of individually rounded terms, so results do not depend on summation order.

use crate::{Error, Result};

pub const BITS: i32 = 24;
pub const SCALE: f64 = (1u64 << BITS) as f64;
/// Largest admissible magnitude of a single term or endpoint.
pub const MAGNITUDE_LIMIT: f64 = 4_294_967_296.0;

pub fn from_f64(op: &'static str, v: f64) -> Result<i64> {
    if !(v.abs() <= MAGNITUDE_LIMIT) {
        return Err(Error::resource(
            op,
            format!("value {v} exceeds the exact-arithmetic range ±{MAGNITUDE_LIMIT}"),
        ));
    }
    Ok((v * SCALE).round() as i64)
}

pub fn to_f64(v: i64) -> f64 {
    v as f64 / SCALE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_dyadic() {
        for v in [0.0, 1.0, -3.5, 1234.0625, 4096.0] {
            assert_eq!(to_f64(from_f64("t", v).unwrap()), v);
        }
        assert!(from_f64("t", 1e10).is_err());
        assert!(from_f64("t", f64::NAN).is_err());
    }
}
