//! Freeman's kernels `K±`, the positive factors `K₁`, `K₂±`, the Fejér-type kernel
//! `(sin πατ / πα)²`, their Fourier transforms, and the quadratic form `∫|H|²K₁`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counting::IntervalUnion;
use crate::quad::{cos_over_square_tail, gk21_panel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    KPlus,
    KMinus,
    K1,
    K2Plus,
    K2Minus,
    KSec9,
}

impl KernelKind {
    pub const ALL: [KernelKind; 6] = [
        KernelKind::KPlus,
        KernelKind::KMinus,
        KernelKind::K1,
        KernelKind::K2Plus,
        KernelKind::K2Minus,
        KernelKind::KSec9,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::KPlus => "K_plus",
            KernelKind::KMinus => "K_minus",
            KernelKind::K1 => "K1",
            KernelKind::K2Plus => "K2_plus",
            KernelKind::K2Minus => "K2_minus",
            KernelKind::KSec9 => "K_sec9",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub tau: f64,
    pub delta: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, tau: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= tau && tau <= 1.0) {
            return Err(Error::validation(
                "KernelSpec",
                format!("need 0 < δ ≤ τ ≤ 1, got τ = {tau}, δ = {delta}"),
            ));
        }
        Ok(Self { kind, tau, delta })
    }

    /// `2τ ± δ` for the signed kinds, `τ` for the Fejér kernel, `δ` for `K₁`.
    pub fn width(&self) -> f64 {
        match self.kind {
            KernelKind::KPlus | KernelKind::K2Plus => 2.0 * self.tau + self.delta,
            KernelKind::KMinus | KernelKind::K2Minus => 2.0 * self.tau - self.delta,
            KernelKind::K1 => self.delta,
            KernelKind::KSec9 => self.tau,
        }
    }

    /// Highest oscillation frequency of the kernel, in cycles per unit `α`.
    pub fn max_frequency(&self) -> f64 {
        match self.kind {
            KernelKind::KPlus | KernelKind::KMinus => 0.5 * (self.width() + self.delta),
            _ => self.width(),
        }
    }

    /// The kernel as `α⁻² Σ cⱼ cos(ωⱼ α)`.
    fn cosine_terms(&self) -> [(f64, f64); 2] {
        let b = self.width();
        let pi2 = PI * PI;
        match self.kind {
            KernelKind::KPlus | KernelKind::KMinus => {
                let c = 1.0 / (2.0 * pi2 * self.delta);
                [(c, PI * (b - self.delta)), (-c, PI * (b + self.delta))]
            }
            KernelKind::K1 => {
                let c = 1.0 / (2.0 * pi2 * self.delta * self.delta);
                [(c, 0.0), (-c, 2.0 * PI * b)]
            }
            KernelKind::K2Plus | KernelKind::K2Minus | KernelKind::KSec9 => {
                let c = 1.0 / (2.0 * pi2);
                [(c, 0.0), (-c, 2.0 * PI * b)]
            }
        }
    }
}

/// `sin x / x` with a four-term Taylor series below `|x| < 10⁻³`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

pub fn eval_kernel(spec: &KernelSpec, alpha: f64) -> f64 {
    let b = spec.width();
    match spec.kind {
        KernelKind::KPlus | KernelKind::KMinus => {
            b * sinc(PI * spec.delta * alpha) * sinc(PI * b * alpha)
        }
        KernelKind::K1 => sinc(PI * spec.delta * alpha).powi(2),
        KernelKind::K2Plus | KernelKind::K2Minus | KernelKind::KSec9 => {
            (b * sinc(PI * b * alpha)).powi(2)
        }
    }
}

/// `K̂₁(t) = δ⁻¹ max{0, 1 − |t|/δ}`.
pub fn fourier_k1(t: f64, delta: f64) -> f64 {
    (1.0 - t.abs() / delta).max(0.0) / delta
}

/// `max{0, τ − |t|}`.
pub fn fourier_k_sec9(t: f64, tau: f64) -> f64 {
    (tau - t.abs()).max(0.0)
}

/// Closed-form Fourier transform `∫ e(αt) K(α) dα` of any kernel kind.
pub fn fourier_transform(spec: &KernelSpec, t: f64) -> f64 {
    let b = spec.width();
    match spec.kind {
        KernelKind::K1 => fourier_k1(t, spec.delta),
        KernelKind::KSec9 => fourier_k_sec9(t, spec.tau),
        KernelKind::K2Plus | KernelKind::K2Minus => (b - t.abs()).max(0.0),
        KernelKind::KPlus | KernelKind::KMinus => {
            // convolution of the indicators of (−δ/2, δ/2) and (−b/2, b/2), scaled by 1/δ
            let lo = (t - 0.5 * spec.delta).max(-0.5 * b);
            let hi = (t + 0.5 * spec.delta).min(0.5 * b);
            (hi - lo).max(0.0) / spec.delta
        }
    }
}

/// `∫_{|α|>A} |K±(α)| dα ≤ 2/(π²δA)`, from `|K±(α)| ≤ (π²δα²)⁻¹`.
pub fn sandwich_tail_bound(delta: f64, a: f64) -> f64 {
    2.0 / (PI * PI * delta * a)
}

/// Smallest truncation `A` with `sandwich_tail_bound(δ, A) ≤ tol`.
pub fn sandwich_truncation(delta: f64, tol: f64) -> f64 {
    2.0 / (PI * PI * delta * tol)
}

/// `∫_{|α|>A} K₁ ≤ 2/(π²δ²A)`.
pub fn k1_tail_bound(delta: f64, a: f64) -> f64 {
    2.0 / (PI * PI * delta * delta * a)
}

/// Kernel values on fixed Gauss–Kronrod panels of `[0, A]`, reusable across many `t`.
#[derive(Debug, Clone)]
pub struct KernelQuadrature {
    spec: KernelSpec,
    truncation: f64,
    nodes: Vec<f64>,
    kronrod: Vec<f64>,
    gauss: Vec<f64>,
    panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformEstimate {
    /// `∫_{−A}^{A} e(αt)K(α) dα`
    pub truncated: f64,
    /// Kronrod–Gauss discrepancy summed over panels.
    pub quad_error: f64,
    /// Exact value of `∫_{|α|>A} e(αt)K(α) dα`.
    pub tail: f64,
    pub nodes: usize,
}

impl TransformEstimate {
    pub fn full(&self) -> f64 {
        self.truncated + self.tail
    }
}

impl KernelQuadrature {
    /// Panels narrow enough to resolve `e(αt)K(α)` for `|t| ≤ t_max`.
    pub fn new(spec: KernelSpec, truncation: f64, t_max: f64) -> Result<Self> {
        const OP: &str = "KernelQuadrature::new";
        if !(truncation > 0.0 && truncation.is_finite()) {
            return Err(Error::validation(
                OP,
                format!("truncation A = {truncation} must be positive"),
            ));
        }
        let freq = t_max.abs() + spec.max_frequency();
        let width = 0.5 / freq;
        let panels = (truncation / width).ceil() as usize;
        if panels > 20_000_000 {
            return Err(Error::resource(
                OP,
                format!("{panels} panels exceed the quadrature budget"),
            ));
        }
        let h = truncation / panels as f64;
        let mut nodes = Vec::with_capacity(21 * panels);
        let mut kronrod = Vec::with_capacity(21 * panels);
        let mut gauss = Vec::with_capacity(21 * panels);
        for p in 0..panels {
            let (x, wk, wg) = gk21_panel(p as f64 * h, (p + 1) as f64 * h);
            for i in 0..21 {
                let k = eval_kernel(&spec, x[i]);
                nodes.push(x[i]);
                kronrod.push(wk[i] * k);
                gauss.push(wg[i] * k);
            }
        }
        Ok(Self {
            spec,
            truncation,
            nodes,
            kronrod,
            gauss,
            panels,
        })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn transform(&self, t: f64) -> TransformEstimate {
        let w = 2.0 * PI * t;
        let mut value = 0.0;
        let mut comp = 0.0;
        let mut err = 0.0;
        for p in 0..self.panels {
            let mut k = 0.0;
            let mut g = 0.0;
            for i in 21 * p..21 * (p + 1) {
                let c = (w * self.nodes[i]).cos();
                k += self.kronrod[i] * c;
                g += self.gauss[i] * c;
            }
            let s = value + k;
            comp += if value.abs() >= k.abs() {
                (value - s) + k
            } else {
                (k - s) + value
            };
            value = s;
            err += (k - g).abs();
        }
        let a = self.truncation;
        let tail: f64 = self
            .spec
            .cosine_terms()
            .iter()
            .map(|&(c, om)| c * (cos_over_square_tail(om + w, a) + cos_over_square_tail(om - w, a)))
            .sum();
        TransformEstimate {
            truncated: 2.0 * (value + comp),
            quad_error: 2.0 * err,
            tail,
            nodes: 21 * self.panels,
        }
    }
}

/// Numerical `∫ e(αt)K(α) dα`: quadrature on `[−A, A]` plus the exact tail.
pub fn fourier_numeric(spec: &KernelSpec, t: f64, truncation: f64) -> Result<TransformEstimate> {
    Ok(KernelQuadrature::new(*spec, truncation, t)?.transform(t))
}

/// Signed distances of the truncated transform of `K±` from the indicator sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichResidual {
    pub t: f64,
    pub integral: f64,
    /// `integral − lower indicator`
    pub lower_gap: f64,
    /// `upper indicator − integral`
    pub upper_gap: f64,
    pub tail_bound: f64,
    pub quad_error: f64,
    pub nodes: usize,
}

impl SandwichResidual {
    pub fn tolerance(&self) -> f64 {
        self.tail_bound + self.quad_error
    }

    pub fn holds(&self) -> bool {
        self.lower_gap >= -self.tolerance() && self.upper_gap >= -self.tolerance()
    }
}

fn indicator(a: f64, t: f64) -> f64 {
    (t.abs() < a) as u8 as f64
}

/// Sandwich residuals at every `t`, sharing one panel set.
pub fn sandwich_sweep(
    ts: &[f64],
    spec: &KernelSpec,
    truncation: f64,
) -> Result<Vec<SandwichResidual>> {
    const OP: &str = "sandwich_residual";
    let (lo_a, hi_a) = match spec.kind {
        KernelKind::KMinus => (spec.tau - spec.delta, spec.tau),
        KernelKind::KPlus => (spec.tau, spec.tau + spec.delta),
        other => {
            return Err(Error::domain(
                OP,
                format!("{} has no indicator sandwich", other.name()),
            ))
        }
    };
    let t_max = ts.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let quad = KernelQuadrature::new(*spec, truncation, t_max)?;
    let tail_bound = sandwich_tail_bound(spec.delta, truncation);
    ts.iter()
        .map(|&t| {
            let est = quad.transform(t);
            if !est.truncated.is_finite() || est.quad_error > 1e-6 {
                return Err(Error::numeric(
                    OP,
                    format!(
                        "t = {t}: quadrature error {:.3e} over {} nodes",
                        est.quad_error, est.nodes
                    ),
                ));
            }
            Ok(SandwichResidual {
                t,
                integral: est.truncated,
                lower_gap: est.truncated - indicator(lo_a, t),
                upper_gap: indicator(hi_a, t) - est.truncated,
                tail_bound,
                quad_error: est.quad_error,
                nodes: est.nodes,
            })
        })
        .collect()
}

pub fn sandwich_residual(t: f64, spec: &KernelSpec, truncation: f64) -> Result<SandwichResidual> {
    Ok(sandwich_sweep(&[t], spec, truncation)?[0])
}

/// Unit-modulus weight `η_μ = e(φ(μ))`.
#[derive(Clone)]
pub enum Phase {
    Constant,
    /// `η_μ = e(ξμ)`
    Linear(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Phase {
    /// `φ(μ)` in turns.
    pub fn angle(&self, mu: f64) -> f64 {
        match self {
            Phase::Constant => 0.0,
            Phase::Linear(xi) => xi * mu,
            Phase::Custom(f) => f(mu),
        }
    }
}

impl std::fmt::Debug for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phase::Constant => write!(f, "Constant"),
            Phase::Linear(xi) => write!(f, "Linear({xi})"),
            Phase::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// The support `𝒵` and phase `η` defining `H(α) = ∫_𝒵 η_μ e(−αμ) dμ`.
#[derive(Debug, Clone)]
pub struct HSupport {
    pub support: IntervalUnion,
    pub eta: Phase,
}

impl HSupport {
    pub fn new(support: IntervalUnion) -> Self {
        Self {
            support,
            eta: Phase::Constant,
        }
    }

    /// Builds a support from raw intervals, rejecting overlaps.
    pub fn from_disjoint(intervals: &[(f64, f64)]) -> Result<Self> {
        Ok(Self::new(IntervalUnion::from_disjoint(
            "HSupport::from_disjoint",
            intervals,
        )?))
    }

    pub fn with_phase(mut self, eta: Phase) -> Self {
        self.eta = eta;
        self
    }
}

/// Second antiderivative of `K̂₁`, even, with `Φ(0) = Φ'(0) = 0`.
fn phi_k1(z: f64, delta: f64) -> f64 {
    let z = z.abs();
    if z <= delta {
        (0.5 * z * z - z * z * z / (6.0 * delta)) / delta
    } else {
        0.5 * z - delta / 6.0
    }
}

fn block(a: f64, b: f64, c: f64, d: f64, delta: f64) -> f64 {
    phi_k1(b - c, delta) - phi_k1(a - c, delta) - phi_k1(b - d, delta) + phi_k1(a - d, delta)
}

/// `∫|H|²K₁ = ∫∫_{𝒵×𝒵} K̂₁(μ − ν) dμ dν` for `η ≡ 1`, exactly, summed by clusters of
/// intervals closer than `δ`.
pub fn h_l2_k1(support: &HSupport, delta: f64) -> Result<f64> {
    const OP: &str = "h_l2_k1";
    if !(delta > 0.0) {
        return Err(Error::validation(
            OP,
            format!("δ = {delta} must be positive"),
        ));
    }
    if !matches!(support.eta, Phase::Constant) {
        return Err(Error::domain(
            OP,
            "closed form requires η ≡ 1; use h_l2_k1_sampled",
        ));
    }
    support.support.validate(OP)?;
    let iv = support.support.intervals();
    let mut total = 0.0;
    let mut start = 0;
    while start < iv.len() {
        let mut end = start + 1;
        while end < iv.len() && iv[end].0 - iv[end - 1].1 < delta {
            end += 1;
        }
        let mut cluster = 0.0;
        for i in start..end {
            let (a, b) = iv[i];
            cluster += 2.0 * phi_k1(b - a, delta);
            for &(c, d) in &iv[i + 1..end] {
                if c - b >= delta {
                    break;
                }
                cluster += 2.0 * block(a, b, c, d, delta);
            }
        }
        total += cluster;
        start = end;
    }
    Ok(total)
}

/// Low-discrepancy estimate of `∫∫ conj(η_μ) η_ν K̂₁(μ − ν)` with a standard error
/// from independent random shifts.
pub fn h_l2_k1_sampled(
    support: &HSupport,
    delta: f64,
    points: usize,
    shifts: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    const OP: &str = "h_l2_k1_sampled";
    support.support.validate(OP)?;
    if points == 0 || shifts < 2 {
        return Err(Error::validation(
            OP,
            "need at least one point and two shifts",
        ));
    }
    let z = support.support.measure();
    if z == 0.0 {
        return Ok((0.0, 0.0));
    }
    let iv = support.support.intervals();
    let mut cum = Vec::with_capacity(iv.len());
    let mut acc = 0.0;
    for &(a, b) in iv {
        acc += b - a;
        cum.push(acc);
    }
    let locate = |u: f64| {
        let m = u * z;
        let i = cum.partition_point(|&c| c <= m).min(iv.len() - 1);
        let before = if i == 0 { 0.0 } else { cum[i - 1] };
        iv[i].0 + (m - before)
    };
    // R₂ sequence
    let g = 1.324_717_957_244_746_f64;
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut estimates = Vec::with_capacity(shifts);
    for _ in 0..shifts {
        let (s1, s2): (f64, f64) = (rng.gen(), rng.gen());
        let mut sum = 0.0;
        for n in 0..points {
            let u1 = (s1 + a1 * (n as f64 + 1.0)).fract();
            let u2 = (s2 + a2 * (n as f64 + 1.0)).fract();
            let nu = locate(u1);
            let v = delta * (2.0 * u2 - 1.0);
            let mu = nu + v;
            if support.support.contains(mu) {
                let ang = support.eta.angle(nu) - support.eta.angle(mu);
                sum += fourier_k1(v, delta) * (2.0 * PI * ang).cos();
            }
        }
        estimates.push(z * 2.0 * delta * sum / points as f64);
    }
    let mean = estimates.iter().sum::<f64>() / shifts as f64;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (shifts - 1) as f64;
    Ok((mean, (var / shifts as f64).sqrt()))
}
