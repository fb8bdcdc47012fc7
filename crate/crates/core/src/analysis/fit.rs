use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Least-squares fit of `log value = intercept + slope · log P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanValueResult {
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// `log value − fitted` per pair.
    pub residuals: Vec<f64>,
    pub max_abs_residual: f64,
}

impl MeanValueResult {
    /// `slope − (2s − k)`.
    pub fn delta_estimate(&self, k: u32, s: u32) -> f64 {
        self.slope - (2.0 * s as f64 - k as f64)
    }

    pub fn predict(&self, p: f64) -> f64 {
        (self.intercept + self.slope * p.ln()).exp()
    }
}

pub fn exponent_fit(pairs: &[(f64, f64)]) -> Result<MeanValueResult> {
    const OP: &str = "exponent_fit";
    if pairs.len() < 3 {
        return Err(Error::validation(
            OP,
            format!("need at least three pairs, got {}", pairs.len()),
        ));
    }
    if pairs
        .iter()
        .any(|&(p, v)| !(p > 0.0 && v > 0.0 && p.is_finite() && v.is_finite()))
    {
        return Err(Error::validation(
            OP,
            "P and values must be positive and finite",
        ));
    }
    let mut ps: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    ps.sort_by(f64::total_cmp);
    if ps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::validation(OP, "P values must be distinct"));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-300) {
        return Err(Error::numeric(OP, "degenerate design matrix"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    if !slope.is_finite() {
        return Err(Error::numeric(OP, "slope is not finite"));
    }
    let residuals: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let max_abs_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    Ok(MeanValueResult {
        pairs: pairs.to_vec(),
        slope,
        intercept,
        residuals,
        max_abs_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_cube_law() {
        let pairs: Vec<(f64, f64)> = [2.0f64, 5.0, 11.0, 40.0]
            .iter()
            .map(|&p| (p, p.powi(3)))
            .collect();
        let f = exponent_fit(&pairs).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-9);
        assert!(f.max_abs_residual < 1e-9);
    }

    #[test]
    fn constant_has_zero_slope() {
        let f = exponent_fit(&[(1.0, 7.0), (2.0, 7.0), (3.0, 7.0)]).unwrap();
        assert!(f.slope.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_designs() {
        assert!(exponent_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(exponent_fit(&[(2.0, 1.0), (2.0, 2.0), (3.0, 1.0)]).is_err());
    }
}
