//! Diagonal forms, tolerances, windows, search boxes and stored parameter tables.

mod growth;
mod params;

use serde::{Deserialize, Serialize};

pub use growth::{Growth, ToleranceParams};
pub use params::{
    parameter_lookup, ParameterTable, Table1Row, Table2Row, Table3Row, TableId, TableRecord,
    ThetaConstant,
};

use crate::numbers::{convergents, RationalApprox};
use crate::{Error, Result};

/// `x^k` as `f64`, exact whenever the power fits in 53 bits.
pub fn pow_f64(x: i64, k: u32) -> f64 {
    match (x as i128).checked_pow(k) {
        Some(v) => v as f64,
        None => (x as f64).powi(k as i32),
    }
}

/// `F(x) = λ₁x₁^k + … + λ_s x_s^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalForm {
    k: u32,
    lambda: Vec<f64>,
    irrational_pair: Option<(usize, usize)>,
}

impl DiagonalForm {
    pub fn new(k: u32, lambda: Vec<f64>) -> Result<Self> {
        const OP: &str = "DiagonalForm::new";
        if k < 2 {
            return Err(Error::validation(
                OP,
                format!("exponent k = {k} must be at least 2"),
            ));
        }
        if lambda.is_empty() {
            return Err(Error::validation(
                OP,
                "at least one coefficient is required",
            ));
        }
        if let Some(i) = lambda.iter().position(|l| !l.is_finite() || *l == 0.0) {
            return Err(Error::validation(
                OP,
                format!(
                    "coefficient λ{} = {} must be finite and nonzero",
                    i + 1,
                    lambda[i]
                ),
            ));
        }
        Ok(Self {
            k,
            lambda,
            irrational_pair: None,
        })
    }

    /// Flag `λ_i/λ_j` as irrational after checking that no convergent with `q ≤ 10⁶` hits it.
    pub fn with_irrational_pair(mut self, i: usize, j: usize) -> Result<Self> {
        const OP: &str = "DiagonalForm::with_irrational_pair";
        if i >= self.s() || j >= self.s() || i == j {
            return Err(Error::validation(
                OP,
                format!("invalid index pair ({i}, {j})"),
            ));
        }
        if let Some(r) = detect_rational(self.lambda[i] / self.lambda[j], 1_000_000) {
            return Err(Error::validation(
                OP,
                format!(
                    "λ{}/λ{} is within rounding of {}/{}",
                    i + 1,
                    j + 1,
                    r.a,
                    r.q
                ),
            ));
        }
        self.irrational_pair = Some((i, j));
        Ok(self)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn s(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn irrational_pair(&self) -> Option<(usize, usize)> {
        self.irrational_pair
    }

    pub fn term(&self, i: usize, x: i64) -> f64 {
        self.lambda[i] * pow_f64(x, self.k)
    }

    pub fn eval(&self, x: &[i64]) -> f64 {
        assert_eq!(x.len(), self.s());
        x.iter().enumerate().map(|(i, &xi)| self.term(i, xi)).sum()
    }

    /// The form with the coefficients reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            k: self.k,
            lambda: perm.iter().map(|&i| self.lambda[i]).collect(),
            irrational_pair: None,
        }
    }

    /// The form with extra coefficients appended.
    pub fn extended(&self, extra: &[f64]) -> Result<Self> {
        let mut lambda = self.lambda.clone();
        lambda.extend_from_slice(extra);
        Self::new(self.k, lambda)
    }

    pub fn is_definite(&self) -> bool {
        self.lambda.iter().all(|&l| l > 0.0) || self.lambda.iter().all(|&l| l < 0.0)
    }
}

/// A convergent of `r` with `q ≤ q_max` that matches `r` to rounding, if any.
pub fn detect_rational(r: f64, q_max: u64) -> Option<RationalApprox> {
    convergents(r, q_max)
        .into_iter()
        .find(|c| c.residual <= 64.0 * f64::EPSILON * r.abs().max(1.0) * c.q as f64)
}

/// `P = N^{1/k}`.
pub fn p_from_n(n: f64, k: u32) -> f64 {
    if n == 1.0 {
        1.0
    } else {
        n.powf(1.0 / k as f64)
    }
}

/// The interval `[start, start + length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub start: f64,
    pub length: f64,
}

impl Window {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(start.is_finite()
            && length.is_finite()
            && length > 0.0
            && (start + length).is_finite())
        {
            return Err(Error::validation(
                "Window",
                format!("window [{start}, {start}+{length}] must be finite with positive length"),
            ));
        }
        Ok(Self { start, length })
    }

    pub fn from_bounds(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b - a)
    }

    pub fn end(&self) -> f64 {
        self.start + self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxConvention {
    /// `[1, P]^s`
    Positive,
    /// `[0, P]^s`
    ZeroInclusive,
    Custom,
}

/// Sizes of the two halves in a meet-in-the-middle split of a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCost {
    /// Number of leading variables in the first half.
    pub split: usize,
    pub left: u128,
    pub right: u128,
}

impl EnumerationCost {
    pub fn total(&self) -> u128 {
        self.left * self.right
    }
}

/// Default cap on the size of either half of a meet-in-the-middle split.
pub const DEFAULT_HALF_BUDGET: u128 = 50_000_000;

/// Integer ranges `[lo_i, hi_i]` for each variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub convention: BoxConvention,
}

impl SearchBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        Self::with_convention(lo, hi, BoxConvention::Custom)
    }

    fn with_convention(lo: Vec<i64>, hi: Vec<i64>, convention: BoxConvention) -> Result<Self> {
        const OP: &str = "SearchBox";
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::validation(
                OP,
                "lower and upper bounds must be nonempty and of equal length",
            ));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::validation(
                OP,
                format!("range {i} is empty: [{}, {}]", lo[i], hi[i]),
            ));
        }
        Ok(Self { lo, hi, convention })
    }

    /// `[1, P]^s`.
    pub fn positive(s: usize, p: i64) -> Result<Self> {
        Self::with_convention(vec![1; s], vec![p; s], BoxConvention::Positive)
    }

    /// `[0, P_1] × … × [0, P_s]`.
    pub fn zero_inclusive(caps: Vec<i64>) -> Result<Self> {
        Self::with_convention(vec![0; caps.len()], caps, BoxConvention::ZeroInclusive)
    }

    /// Smallest box of the given convention containing every `x` with `|F(x)| < max(|a|,|b|) + τ`,
    /// for a definite form and a window `[a, b]`.
    pub fn covering_window(
        form: &DiagonalForm,
        window: &Window,
        tau: f64,
        convention: BoxConvention,
    ) -> Result<Self> {
        const OP: &str = "SearchBox::covering_window";
        if !form.is_definite() {
            return Err(Error::domain(
                OP,
                "indefinite forms need user-supplied caps",
            ));
        }
        let reach = window.start.abs().max(window.end().abs()) + tau;
        let caps: Vec<i64> = form
            .lambda()
            .iter()
            .map(|l| {
                let mut c = (reach / l.abs()).powf(1.0 / form.k() as f64).floor() as i64;
                while (l.abs() * pow_f64(c + 1, form.k())) < reach {
                    c += 1;
                }
                while c > 0 && l.abs() * pow_f64(c, form.k()) >= reach {
                    c -= 1;
                }
                c
            })
            .collect();
        let lo: Vec<i64> = match convention {
            BoxConvention::Positive => vec![1; caps.len()],
            BoxConvention::ZeroInclusive => vec![0; caps.len()],
            BoxConvention::Custom => caps.iter().map(|&c| -c).collect(),
        };
        let hi = if convention == BoxConvention::Positive {
            caps.iter().map(|&c| c.max(1)).collect()
        } else {
            caps
        };
        Self::with_convention(lo, hi, convention)
    }

    pub fn s(&self) -> usize {
        self.lo.len()
    }

    pub fn side(&self, i: usize) -> u128 {
        (self.hi[i] - self.lo[i] + 1) as u128
    }

    pub fn volume(&self) -> u128 {
        (0..self.s()).map(|i| self.side(i)).product()
    }

    /// Prefix split minimising the larger half.
    pub fn split(&self) -> EnumerationCost {
        let total = self.volume();
        let mut best = EnumerationCost {
            split: 0,
            left: 1,
            right: total,
        };
        let mut left = 1u128;
        for i in 0..self.s() {
            left *= self.side(i);
            let right = total / left;
            if left.max(right) < best.left.max(best.right) {
                best = EnumerationCost {
                    split: i + 1,
                    left,
                    right,
                };
            }
        }
        best
    }

    pub fn check_budget(&self, op: &'static str, half_budget: u128) -> Result<EnumerationCost> {
        let cost = self.split();
        if cost.left.max(cost.right) > half_budget {
            return Err(Error::resource(
                op,
                format!(
                    "halves of {} and {} points exceed the budget {half_budget}; split the box into sub-boxes along variable {}",
                    cost.left,
                    cost.right,
                    cost.split.max(1)
                ),
            ));
        }
        Ok(cost)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.s() && (0..self.s()).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i])
    }

    /// The box with extra ranges appended.
    pub fn extended(&self, lo: &[i64], hi: &[i64]) -> Result<Self> {
        let mut l = self.lo.clone();
        let mut h = self.hi.clone();
        l.extend_from_slice(lo);
        h.extend_from_slice(hi);
        Self::with_convention(l, h, self.convention)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            lo: perm.iter().map(|&i| self.lo[i]).collect(),
            hi: perm.iter().map(|&i| self.hi[i]).collect(),
            convention: self.convention,
        }
    }
}

/// `P_j = c^{−j} P^{(1−1/k)^{j−1}}` for `1 ≤ j ≤ t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiminishingRanges {
    pub base: f64,
    pub k: u32,
    pub c: f64,
    pub t: u32,
    pub ranges: Vec<f64>,
    /// `P_t^{k−1}`
    pub m_max: f64,
}

pub fn diminishing_ranges(p: f64, k: u32, t: u32, c: f64) -> Result<DiminishingRanges> {
    const OP: &str = "diminishing_ranges";
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::domain(OP, format!("c = {c} must exceed 1")));
    }
    if t == 0 || k < 2 {
        return Err(Error::domain(OP, "need t ≥ 1 and k ≥ 2"));
    }
    if !(p > c.powi(t as i32)) || !p.is_finite() {
        return Err(Error::domain(
            OP,
            format!("P = {p} must exceed c^t = {}", c.powi(t as i32)),
        ));
    }
    let r = 1.0 - 1.0 / k as f64;
    let ranges: Vec<f64> = (1..=t)
        .map(|j| c.powi(-(j as i32)) * p.powf(r.powi(j as i32 - 1)))
        .collect();
    let m_max = ranges[t as usize - 1].powi(k as i32 - 1);
    Ok(DiminishingRanges {
        base: p,
        k,
        c,
        t,
        ranges,
        m_max,
    })
}
