use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::phase::{e_frac, frac_mul, CompensatedSum};
use super::weyl::{weyl_sum, WeylSumSpec};
use crate::{Error, Result};

/// A monomial `c · x^a · h₁^{b₁} ⋯ h_j^{b_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: i128,
    pub x_exp: u32,
    pub h_exps: Vec<u32>,
}

/// `p_j(x; h)` with `Δ_{h_j}∘…∘Δ_{h₁}(x^k) = h₁⋯h_j · p_j(x; h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferencedPoly {
    pub k: u32,
    pub j: u32,
    pub terms: Vec<Monomial>,
}

type Poly = BTreeMap<Vec<u32>, i128>;

fn binomial(n: u32, r: u32) -> i128 {
    let mut b = 1i128;
    for i in 0..r {
        b = b * (n - i) as i128 / (i + 1) as i128;
    }
    b
}

/// `(f(x + h_i) − f(x)) / h_i`, with slot 0 holding the exponent of `x`.
fn difference(f: &Poly, i: usize) -> Poly {
    let mut g = Poly::new();
    for (exps, &c) in f {
        let a = exps[0];
        for t in 0..a {
            let mut e = exps.clone();
            e[0] = t;
            e[i] += a - t - 1;
            *g.entry(e).or_insert(0) += c * binomial(a, t);
        }
    }
    g.retain(|_, c| *c != 0);
    g
}

pub fn weyl_difference_poly(k: u32, j: u32) -> Result<DifferencedPoly> {
    if k < 2 || j == 0 || j >= k {
        return Err(Error::domain(
            "weyl_difference_poly",
            format!("need 1 ≤ j ≤ k − 1, got k = {k}, j = {j}"),
        ));
    }
    let mut f = Poly::new();
    let mut x = vec![0u32; j as usize + 1];
    x[0] = k;
    f.insert(x, 1);
    for i in 1..=j as usize {
        f = difference(&f, i);
    }
    let mut terms: Vec<Monomial> = f
        .into_iter()
        .map(|(e, coeff)| Monomial {
            coeff,
            x_exp: e[0],
            h_exps: e[1..].to_vec(),
        })
        .collect();
    terms.sort_by(|a, b| b.x_exp.cmp(&a.x_exp).then_with(|| b.h_exps.cmp(&a.h_exps)));
    Ok(DifferencedPoly { k, j, terms })
}

impl DifferencedPoly {
    pub fn degree_in_x(&self) -> u32 {
        self.terms.iter().map(|t| t.x_exp).max().unwrap_or(0)
    }

    /// Coefficient of the pure `x^{k−j}` term.
    pub fn leading_x_coefficient(&self) -> i128 {
        let d = self.degree_in_x();
        self.terms
            .iter()
            .filter(|t| t.x_exp == d)
            .map(|t| t.coeff)
            .sum()
    }

    pub fn eval(&self, x: i128, h: &[i128]) -> i128 {
        assert_eq!(h.len(), self.j as usize, "one shift per differencing step");
        self.terms
            .iter()
            .map(|t| {
                let mut v = t.coeff * x.pow(t.x_exp);
                for (hi, &b) in h.iter().zip(&t.h_exps) {
                    v *= hi.pow(b);
                }
                v
            })
            .sum()
    }
}

impl fmt::Display for DifferencedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.terms {
            let mut vars = Vec::new();
            match t.x_exp {
                0 => {}
                1 => vars.push("x".to_string()),
                a => vars.push(format!("x^{a}")),
            }
            for (i, &b) in t.h_exps.iter().enumerate() {
                match b {
                    0 => {}
                    1 => vars.push(format!("h{}", i + 1)),
                    b => vars.push(format!("h{}^{b}", i + 1)),
                }
            }
            let mag = t.coeff.abs();
            let body = match (mag, vars.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => vars.join(" "),
                _ => format!("{mag} {}", vars.join(" ")),
            };
            let sign = if t.coeff < 0 { "-" } else { "+" };
            if first {
                write!(f, "{}{body}", if t.coeff < 0 { "-" } else { "" })?;
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `Δ_{h_j}∘…∘Δ_{h₁}(x^k)` by inclusion–exclusion over the shifts.
pub fn iterated_difference(k: u32, x: i128, h: &[i128]) -> i128 {
    let j = h.len();
    (0u32..1 << j)
        .map(|mask| {
            let shift: i128 = (0..j).filter(|&i| mask >> i & 1 == 1).map(|i| h[i]).sum();
            let sign = if (j as u32 - mask.count_ones()) % 2 == 0 {
                1
            } else {
                -1
            };
            sign * (x + shift).pow(k)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylInequality {
    /// `|f(λα)|^{2^j}`
    pub lhs: f64,
    /// `(2P)^{2^j−j−1} Σ_h Σ_{x∈I_j(h)} e(λα h₁⋯h_j p_j(x; h))`, real part
    pub rhs: f64,
    /// Imaginary part of the same sum, which vanishes identically.
    pub rhs_imag: f64,
    /// The same quantity as `(2P)^{2^j−j−1} Σ_{h'} |S_{j−1}(h')|²`.
    pub rhs_squares: f64,
    pub points: u64,
}

impl WeylInequality {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-9) + 1e-9
    }
}

/// Interval recursion `I₀ = [1, P]`, `I_i = I_{i−1} ∩ (I_{i−1} − h_i)`.
fn shrink(iv: (i64, i64), h: i64) -> (i64, i64) {
    (iv.0.max(iv.0 - h), iv.1.min(iv.1 - h))
}

pub const WEYL_CHECK_BUDGET: u64 = 200_000_000;

/// Both sides of `|f(λα)|^{2^j} ≤ (2P)^{2^j−j−1} Σ_h Σ_{x∈I_j(h)} e(λα h₁⋯h_j p_j(x; h))`.
pub fn weyl_inequality_check(
    k: u32,
    j: u32,
    lambda: f64,
    alpha: f64,
    p: u64,
) -> Result<WeylInequality> {
    const OP: &str = "weyl_inequality_check";
    let poly = weyl_difference_poly(k, j)?;
    if p == 0 {
        return Err(Error::validation(OP, "P must be positive"));
    }
    let cost = (2 * p as u128).pow(j) * p as u128;
    if cost > WEYL_CHECK_BUDGET as u128 {
        return Err(Error::resource(
            OP,
            format!("(2P)^j·P = {cost} exceeds the budget"),
        ));
    }
    let c = lambda * alpha;
    let f = weyl_sum(&WeylSumSpec::new(k, lambda, 0, p)?, alpha);
    let lhs = f.norm().powi(1 << j);
    let pi = p as i64;
    let mult = (2.0 * p as f64).powi((1i32 << j) - j as i32 - 1);

    let mut total = CompensatedSum::default();
    let mut squares = 0.0f64;
    let mut points = 0u64;
    let mut h = vec![0i64; j as usize];
    let mut ivs = vec![(1i64, pi); j as usize + 1];
    // odometer over h ∈ (−P, P)^j, innermost digit last
    let depth = j as usize;
    let mut digit = vec![-(pi - 1); depth];
    loop {
        h[..depth].copy_from_slice(&digit);
        for d in 0..depth {
            ivs[d + 1] = shrink(ivs[d], h[d]);
        }
        let (a, b) = ivs[depth];
        let hh: Vec<i128> = h.iter().map(|&v| v as i128).collect();
        let prod: i128 = hh.iter().product();
        for x in a..=b {
            let n = prod * poly.eval(x as i128, &hh);
            total.add(e_frac(frac_mul(c, n)));
            points += 1;
        }
        if digit[depth - 1] == -(pi - 1) {
            // |S_{j−1}(h')|² for the outer shifts h' = (h₁..h_{j−1})
            let (a, b) = ivs[depth - 1];
            let mut s = CompensatedSum::default();
            let hp: Vec<i128> = hh[..depth - 1].to_vec();
            for x in a..=b {
                s.add(e_frac(frac_mul(c, iterated_difference(k, x as i128, &hp))));
            }
            squares += s.value().norm_sqr();
        }
        let mut d = depth;
        loop {
            if d == 0 {
                let sum = total.value();
                return Ok(WeylInequality {
                    lhs,
                    rhs: mult * sum.re,
                    rhs_imag: mult * sum.im,
                    rhs_squares: mult * squares,
                    points,
                });
            }
            d -= 1;
            if digit[d] < pi - 1 {
                digit[d] += 1;
                for e in digit.iter_mut().skip(d + 1) {
                    *e = -(pi - 1);
                }
                break;
            }
        }
    }
}
