use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::forms::DiagonalForm;
use crate::quad::gauss_legendre;
use crate::{Error, Result};

/// `Ω_{s,k}(Λ, θ)` as the density at `θ` of `Σ λᵢtᵢ^k` with `t` uniform on `[0,1]^s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularIntegralSpec {
    pub form: DiagonalForm,
    pub theta: f64,
    pub options: OmegaOptions,
}

impl SingularIntegralSpec {
    pub fn new(form: DiagonalForm, theta: f64) -> Self {
        Self {
            form,
            theta,
            options: OmegaOptions::default(),
        }
    }

    /// `νᵢ = |λᵢ|`
    pub fn nu(&self) -> Vec<f64> {
        self.form.lambda().iter().map(|l| l.abs()).collect()
    }

    /// `σᵢ = λᵢ/νᵢ`
    pub fn sigma(&self) -> Vec<f64> {
        self.form.lambda().iter().map(|l| l.signum()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaOptions {
    /// Gauss–Legendre nodes per piece; `None` picks by `s`.
    pub nodes: Option<usize>,
    /// Above this many variables the outer variables are sampled.
    pub nested_max: usize,
    pub mc_points: usize,
    pub mc_shifts: usize,
    pub seed: u64,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        Self {
            nodes: None,
            nested_max: 8,
            mc_points: 1024,
            mc_shifts: 8,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMethod {
    Closed,
    Nested,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaEstimate {
    pub value: f64,
    /// Difference from a reduced-resolution run, or the standard error when sampled.
    pub error: f64,
    pub method: OmegaMethod,
    pub evaluations: u64,
}

fn default_nodes(s: usize) -> usize {
    match s {
        0..=4 => 32,
        5 => 20,
        6 => 12,
        7 => 8,
        _ => 6,
    }
}

/// Density of `λ t^k` at `y`, `t` uniform on `[0, 1]`.
fn base_density(y: f64, lambda: f64, k: u32) -> f64 {
    let r = y / lambda;
    if r > 0.0 && r <= 1.0 {
        (r.powf(1.0 / k as f64 - 1.0)) / (k as f64 * lambda.abs())
    } else {
        0.0
    }
}

/// `I_t(k, k)` and its derivative: maps `[0,1]` onto itself with order-`k` contact at both ends.
struct Smoother {
    binom: Vec<f64>,
    k: u32,
    norm: f64,
}

impl Smoother {
    fn new(k: u32) -> Self {
        let n = 2 * k - 1;
        let mut binom = vec![1.0f64; n as usize + 1];
        for j in 1..=n as usize {
            binom[j] = binom[j - 1] * (n as usize + 1 - j) as f64 / j as f64;
        }
        // 1/B(k,k) = (2k−1)!/((k−1)!)² = k·C(2k−1, k)
        let norm = k as f64 * binom[k as usize];
        Self { binom, k, norm }
    }

    fn map(&self, t: f64) -> (f64, f64) {
        let n = 2 * self.k - 1;
        let mut v = 0.0;
        for j in self.k..=n {
            v += self.binom[j as usize] * t.powi(j as i32) * (1.0 - t).powi((n - j) as i32);
        }
        let d = self.norm * (t * (1.0 - t)).powi(self.k as i32 - 1);
        (v, d)
    }
}

struct Nested<'a> {
    k: u32,
    lambdas: &'a [f64],
    /// per level: (mapped offset, weight) pairs on [0,1]
    rule: Vec<(f64, f64)>,
    /// corners of the tail starting at each level
    corners: Vec<Vec<f64>>,
    evals: u64,
}

impl<'a> Nested<'a> {
    fn new(k: u32, lambdas: &'a [f64], nodes: usize) -> Self {
        let (x, w) = gauss_legendre(nodes);
        let sm = Smoother::new(k);
        let rule = x
            .iter()
            .zip(&w)
            .map(|(&x, &w)| {
                let t = 0.5 * (x + 1.0);
                let (b, db) = sm.map(t);
                (b, 0.5 * w * db)
            })
            .collect();
        let corners = (0..lambdas.len())
            .map(|m| {
                let tail = &lambdas[m..];
                let mut c = vec![0.0f64];
                for &l in tail {
                    let more: Vec<f64> = c.iter().map(|v| v + l).collect();
                    c.extend(more);
                }
                c.sort_by(f64::total_cmp);
                c.dedup();
                c
            })
            .collect();
        Self {
            k,
            lambdas,
            rule,
            corners,
            evals: 0,
        }
    }

    fn density(&mut self, m: usize, theta: f64) -> f64 {
        let lams = self.lambdas;
        if m + 1 == lams.len() {
            self.evals += 1;
            return base_density(theta, lams[m], self.k);
        }
        let lam = lams[m];
        let rest = &self.corners[m + 1];
        let (lo, hi) = (rest[0], rest[rest.len() - 1]);
        let kf = self.k as f64;
        // u at which θ − λu^k equals c, when that happens inside (0, 1)
        let cross = |c: f64| {
            let r = (theta - c) / lam;
            if r > 0.0 && r < 1.0 {
                Some(r.powf(1.0 / kf))
            } else {
                None
            }
        };
        let split_all = lams.len() - m - 1 <= self.k as usize + 1;
        let mut breaks = vec![0.0, 1.0];
        if split_all {
            breaks.extend(rest.iter().filter_map(|&c| cross(c)));
        } else {
            breaks.extend([lo, hi].iter().filter_map(|&c| cross(c)));
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let y_mid = theta - lam * mid.powf(kf);
            if !(y_mid > lo && y_mid < hi) {
                continue;
            }
            let len = b - a;
            let mut piece = 0.0;
            for i in 0..self.rule.len() {
                let (t, wt) = self.rule[i];
                let u = a + len * t;
                piece += wt * self.density(m + 1, theta - lam * u.powf(kf));
            }
            total += len * piece;
        }
        total
    }
}

fn nested(k: u32, lambdas: &[f64], theta: f64, nodes: usize) -> (f64, u64) {
    let mut n = Nested::new(k, lambdas, nodes);
    let v = n.density(0, theta);
    (v, n.evals)
}

/// `Ω_{s,k}(Λ, θ)` with an error estimate.
pub fn omega_estimate(spec: &SingularIntegralSpec) -> Result<OmegaEstimate> {
    const OP: &str = "omega";
    let lams = spec.form.lambda();
    let k = spec.form.k();
    let s = lams.len();
    let theta = spec.theta;
    if !theta.is_finite() {
        return Err(Error::validation(OP, "θ must be finite"));
    }
    if s < 2 {
        return Err(Error::domain(OP, "need at least two variables"));
    }
    let lo: f64 = lams.iter().filter(|&&l| l < 0.0).sum();
    let hi: f64 = lams.iter().filter(|&&l| l > 0.0).sum();
    if !(theta > lo && theta < hi) {
        return Ok(OmegaEstimate {
            value: 0.0,
            error: 0.0,
            method: OmegaMethod::Closed,
            evaluations: 0,
        });
    }
    let opts = spec.options;
    if s <= opts.nested_max {
        let n = opts.nodes.unwrap_or_else(|| default_nodes(s)).max(4);
        let (v, e1) = nested(k, lams, theta, n);
        let (coarse, e2) = nested(k, lams, theta, (2 * n / 3).max(3));
        if !v.is_finite() {
            return Err(Error::numeric(
                OP,
                format!("nested quadrature produced {v}"),
            ));
        }
        return Ok(OmegaEstimate {
            value: v,
            error: (v - coarse).abs(),
            method: OmegaMethod::Nested,
            evaluations: e1 + e2,
        });
    }
    monte_carlo(spec, opts)
}

fn monte_carlo(spec: &SingularIntegralSpec, opts: OmegaOptions) -> Result<OmegaEstimate> {
    const OP: &str = "omega";
    let lams = spec.form.lambda();
    let k = spec.form.k();
    let s = lams.len();
    let inner = (k as usize / 2 + 1).max(3).min(s - 1);
    let outer = s - inner;
    let (outer_l, inner_l) = lams.split_at(outer);
    let n = opts.nodes.unwrap_or(12);
    if opts.mc_shifts < 2 || opts.mc_points == 0 {
        return Err(Error::validation(
            OP,
            "sampling needs at least two shifts and one point",
        ));
    }
    // Kronecker sequence with generalised golden-ratio directions
    let phi = {
        let mut x = 2.0f64;
        for _ in 0..64 {
            x = (1.0 + x).powf(1.0 / (outer as f64 + 1.0));
        }
        x
    };
    let dirs: Vec<f64> = (1..=outer).map(|i| phi.powi(-(i as i32)).fract()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut evals = 0u64;
    let mut est = Vec::with_capacity(opts.mc_shifts);
    let kf = k as f64;
    let mut nest = Nested::new(k, inner_l, n);
    for _ in 0..opts.mc_shifts {
        let shift: Vec<f64> = (0..outer).map(|_| rng.gen::<f64>()).collect();
        let mut sum = 0.0;
        for j in 0..opts.mc_points {
            let mut y = spec.theta;
            for i in 0..outer {
                let u = (shift[i] + dirs[i] * (j as f64 + 1.0)).fract();
                y -= outer_l[i] * u.powf(kf);
            }
            sum += nest.density(0, y);
        }
        est.push(sum / opts.mc_points as f64);
    }
    evals += nest.evals;
    let m = est.len() as f64;
    let mean = est.iter().sum::<f64>() / m;
    let var = est.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1.0);
    if !mean.is_finite() {
        return Err(Error::numeric(OP, "sampled estimate is not finite"));
    }
    Ok(OmegaEstimate {
        value: mean,
        error: (var / m).sqrt(),
        method: OmegaMethod::MonteCarlo,
        evaluations: evals,
    })
}

pub fn omega(spec: &SingularIntegralSpec) -> Result<f64> {
    Ok(omega_estimate(spec)?.value)
}

/// `2τ Ω_{s,k}(Λ, μ/N) N^{s/k−1}`.
pub fn main_term(form: &DiagonalForm, mu: f64, n: f64, tau: f64) -> Result<f64> {
    main_term_with(form, mu, n, tau, &OmegaOptions::default())
}

pub fn main_term_with(
    form: &DiagonalForm,
    mu: f64,
    n: f64,
    tau: f64,
    opts: &OmegaOptions,
) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::validation(
            "main_term",
            format!("N = {n} must be positive"),
        ));
    }
    let spec = SingularIntegralSpec {
        form: form.clone(),
        theta: mu / n,
        options: *opts,
    };
    let om = omega(&spec)?;
    Ok(2.0 * tau * om * n.powf(form.s() as f64 / form.k() as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BETA_THIRD: f64 = 5.299_916_250_856_348;

    fn spec(k: u32, l: Vec<f64>, theta: f64) -> SingularIntegralSpec {
        SingularIntegralSpec::new(DiagonalForm::new(k, l).unwrap(), theta)
    }

    #[test]
    fn smoother_is_a_bijection() {
        for k in 2..6 {
            let s = Smoother::new(k);
            assert!(s.map(0.0).0.abs() < 1e-15);
            assert!((s.map(1.0).0 - 1.0).abs() < 1e-14);
            assert!((s.map(0.5).0 - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn two_cubes_at_one() {
        let e = omega_estimate(&spec(3, vec![1.0, 1.0], 1.0)).unwrap();
        assert!((e.value - BETA_THIRD / 9.0).abs() < 1e-10, "{}", e.value);
    }

    #[test]
    fn outside_envelope_is_zero() {
        assert_eq!(omega(&spec(3, vec![1.0, 2.0], 3.5)).unwrap(), 0.0);
        assert_eq!(omega(&spec(3, vec![1.0, 2.0], -0.1)).unwrap(), 0.0);
    }

    #[test]
    fn total_mass_one() {
        // ∫ Ω(θ) dθ = 1
        let (x, w) = gauss_legendre(200);
        let f = spec(2, vec![1.0, 0.7], 0.0);
        let mut total = 0.0;
        // kinks at 0.7 and 1.0 split the range
        for &(a, b) in &[(0.0, 0.7), (0.7, 1.0), (1.0, 1.7)] {
            for (xi, wi) in x.iter().zip(&w) {
                let th = a + (b - a) * 0.5 * (xi + 1.0);
                let mut s = f.clone();
                s.theta = th;
                total += wi * 0.5 * (b - a) * omega(&s).unwrap();
            }
        }
        assert!((total - 1.0).abs() < 1e-4, "{total}");
    }
}
