use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcs::{ArcDissection, ArcFamily};
use crate::counting::IntervalUnion;
use crate::expsums::{e_frac, frac_mul, weyl_sum_scaled, CompensatedSum, WeylSumSpec};
use crate::numbers::arith::{gcd, mul_mod, pow_mod};
use crate::numbers::{is_prime, smooth_set};
use crate::quad::gauss_legendre;
use crate::{Error, Result};

/// Largest number of nondecreasing `s`-tuples enumerated by [`mean_value_parseval`].
pub const PARSEVAL_TUPLE_BUDGET: u128 = 1 << 34;
/// Target size of one residue class.
const CLASS_TARGET: u128 = 1 << 22;

/// `𝒜(P, R)`; `None` means every integer in `[1, P]`.
pub fn smooth_members(p: u64, r: Option<u64>) -> Result<Vec<u64>> {
    Ok(smooth_set(p, r.unwrap_or(p).max(1).min(p.max(1)))?.members)
}

fn binomial_u128(n: u128, r: u128) -> Option<u128> {
    let mut b: u128 = 1;
    for i in 0..r {
        b = b.checked_mul(n - i)? / (i + 1);
    }
    Some(b)
}

fn choose_modulus(tuples: u128, k: u32, target: u128) -> u64 {
    let want = (tuples / target).max(1) as u64;
    if want == 1 {
        return 1;
    }
    let mut m = want | 1;
    let mut fallback = None;
    loop {
        if is_prime(m) {
            if gcd(k as u64, m - 1) == 1 {
                return m;
            }
            fallback.get_or_insert(m);
            if m > 2 * want {
                return fallback.unwrap_or(m);
            }
        }
        m += 2;
    }
}

/// `s! / Π mult!` indexed by `Π mult!` across all partitions of `s`.
fn weight_codes(s: u32) -> Vec<u64> {
    fn parts(rem: u32, max: u32, acc: u64, out: &mut Vec<u64>) {
        if rem == 0 {
            out.push(acc);
            return;
        }
        let mut f = 1u64;
        for p in 1..=rem.min(max) {
            f *= p as u64;
            parts(rem - p, p, acc * f, out);
        }
    }
    let mut out = Vec::new();
    parts(s, s, 1, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

struct Enumerator<'a> {
    values: &'a [u64],
    buckets: &'a [Vec<u32>],
    m: u64,
    s: u32,
    codes: &'a [u64],
    code_bits: u32,
}

impl Enumerator<'_> {
    fn class_sum(&self, class: u64) -> u128 {
        let mut keys: Vec<u64> = Vec::new();
        self.prefix(class, 0, 0, 0, 1, 0, &mut keys);
        keys.sort_unstable();
        let fact: u64 = (1..=self.s as u64).product();
        let mask = (1u64 << self.code_bits) - 1;
        let mut total: u128 = 0;
        let mut i = 0;
        while i < keys.len() {
            let n = keys[i] >> self.code_bits;
            let mut r: u128 = 0;
            while i < keys.len() && keys[i] >> self.code_bits == n {
                r += (fact / self.codes[(keys[i] & mask) as usize]) as u128;
                i += 1;
            }
            total += r * r;
        }
        total
    }

    /// Extends a nondecreasing prefix of `depth` indices with sum `sum`, last index `last`,
    /// current run length `run` and `Π mult!` so far `denom`.
    #[allow(clippy::too_many_arguments)]
    fn prefix(
        &self,
        class: u64,
        depth: u32,
        sum: u64,
        last: usize,
        denom: u64,
        run: u64,
        keys: &mut Vec<u64>,
    ) {
        if depth + 1 == self.s {
            let need = (class + self.m - sum % self.m) % self.m;
            let bucket = &self.buckets[need as usize];
            let from = bucket.partition_point(|&i| (i as usize) < last);
            for &i in &bucket[from..] {
                let i = i as usize;
                let d = if depth > 0 && i == last {
                    denom * (run + 1)
                } else {
                    denom
                };
                let n = sum + self.values[i];
                let code = self
                    .codes
                    .binary_search(&d)
                    .expect("weight is a partition product") as u64;
                keys.push(((n / self.m) << self.code_bits) | code);
            }
            return;
        }
        for i in last..self.values.len() {
            let (d, r) = if depth > 0 && i == last {
                (denom * (run + 1), run + 1)
            } else {
                (denom, 1)
            };
            self.prefix(class, depth + 1, sum + self.values[i], i, d, r, keys);
        }
    }
}

/// `∫₀¹ |g(α)|^{2s} dα`, the number of `x, y ∈ 𝒜(P,R)^s` with `Σ x_i^k = Σ y_i^k`.
pub fn mean_value_parseval(k: u32, s: u32, p: u64, r: Option<u64>) -> Result<u128> {
    parseval_with_target(k, s, p, r, CLASS_TARGET)
}

fn parseval_with_target(k: u32, s: u32, p: u64, r: Option<u64>, target: u128) -> Result<u128> {
    const OP: &str = "mean_value_parseval";
    if k < 2 {
        return Err(Error::validation(OP, "k must be at least 2"));
    }
    if s == 0 {
        return Ok(1);
    }
    let members = smooth_members(p, r)?;
    if members.is_empty() {
        return Ok(0);
    }
    let pk = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if pk.saturating_mul(s as u128) >= 1 << 62 {
        return Err(Error::resource(
            OP,
            format!("s·P^k overflows at P = {p}, k = {k}"),
        ));
    }
    let count = members.len() as u128;
    let tuples = binomial_u128(count + s as u128 - 1, s as u128).unwrap_or(u128::MAX);
    if tuples > PARSEVAL_TUPLE_BUDGET {
        return Err(Error::resource(
            OP,
            format!("{tuples} tuples exceed the budget {PARSEVAL_TUPLE_BUDGET}"),
        ));
    }
    let values: Vec<u64> = members.iter().map(|&x| x.pow(k)).collect();
    let m = choose_modulus(tuples, k, target);
    let mut buckets = vec![Vec::new(); m as usize];
    for (i, v) in values.iter().enumerate() {
        buckets[(v % m) as usize].push(i as u32);
    }
    let codes = weight_codes(s);
    let code_bits = (usize::BITS - (codes.len() - 1).leading_zeros()).max(1);
    let max_key = (s as u128 * pk) / m as u128;
    if (max_key << code_bits) >= 1u128 << 64 {
        return Err(Error::resource(OP, "packed keys overflow"));
    }
    let en = Enumerator {
        values: &values,
        buckets: &buckets,
        m,
        s,
        codes: &codes,
        code_bits,
    };
    Ok((0..m).into_par_iter().map(|c| en.class_sum(c)).sum())
}

/// Ordered-tuple brute force, for small cases.
pub fn mean_value_brute(k: u32, s: u32, p: u64, r: Option<u64>) -> Result<u128> {
    let members = smooth_members(p, r)?;
    let values: Vec<u64> = members.iter().map(|&x| x.pow(k)).collect();
    let mut sums = vec![0u64];
    for _ in 0..s {
        sums = sums
            .iter()
            .flat_map(|&a| values.iter().map(move |&v| a + v))
            .collect();
    }
    sums.sort_unstable();
    let mut total = 0u128;
    let mut i = 0;
    while i < sums.len() {
        let j = i + sums[i..].partition_point(|&v| v == sums[i]);
        total += ((j - i) as u128).pow(2);
        i = j;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMeanValue {
    pub value: f64,
    pub nodes: u64,
    /// Whether the node count exceeds the integrand's bandwidth, making the rule exact.
    pub exact_rule: bool,
}

/// Periodic trapezoid rule for `∫₀¹ |g|^{2s}` with phases reduced exactly modulo the node count.
pub fn mean_value_quadrature(
    k: u32,
    s: u32,
    p: u64,
    r: Option<u64>,
    nodes: Option<u64>,
) -> Result<QuadratureMeanValue> {
    const OP: &str = "mean_value_quadrature";
    let members = smooth_members(p, r)?;
    let band = (s as u128) * (p as u128).pow(k);
    let n = nodes.map(|v| v as u128).unwrap_or(band + 1);
    if n == 0 || n > 1 << 26 || n.saturating_mul(members.len() as u128) > 1 << 34 {
        return Err(Error::resource(
            OP,
            format!("{n} nodes over {} terms exceed the budget", members.len()),
        ));
    }
    let n = n as u64;
    let residues: Vec<u64> = members
        .iter()
        .map(|&x| pow_mod(x % n, k as u64, n))
        .collect();
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut g = CompensatedSum::default();
            for &res in &residues {
                g.add(e_frac(mul_mod(res, j, n) as f64 / n as f64));
            }
            g.value().norm().powi(2 * s as i32)
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v.into());
    }
    Ok(QuadratureMeanValue {
        value: acc.value().re / n as f64,
        nodes: n,
        exact_rule: n as u128 > band,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorArcMeanValue {
    /// `∫_{𝔫∩[0,1)} |g|^s`
    pub minor: f64,
    /// `∫₀¹ |g|^s`
    pub full: f64,
    pub ratio: f64,
    pub minor_measure: f64,
    pub nodes: u64,
}

fn g_at(members: &[u64], full_range: Option<WeylSumSpec>, k: u32, alpha: f64) -> f64 {
    match full_range {
        Some(spec) => weyl_sum_scaled(&spec, alpha).norm(),
        None => {
            let mut acc = CompensatedSum::default();
            for &x in members {
                acc.add(e_frac(frac_mul(alpha, (x as i128).pow(k))));
            }
            acc.value().norm()
        }
    }
}

const GL_ORDER: usize = 8;
pub const MINOR_NODE_BUDGET: u64 = 50_000_000;

fn gl_over(
    union: &IntervalUnion,
    width: f64,
    integrand: &(dyn Fn(f64) -> f64 + Sync),
) -> (f64, u64) {
    let (x, w) = gauss_legendre(GL_ORDER);
    let mut panels = Vec::new();
    for &(a, b) in union.intervals() {
        let n = ((b - a) / width).ceil().max(1.0) as u64;
        let h = (b - a) / n as f64;
        for i in 0..n {
            panels.push((a + i as f64 * h, h));
        }
    }
    let parts: Vec<f64> = panels
        .par_iter()
        .map(|&(a, h)| {
            let mut acc = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                acc += wi * integrand(a + 0.5 * h * (xi + 1.0));
            }
            0.5 * h * acc
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for v in parts {
        acc.add(v.into());
    }
    (acc.value().re, (panels.len() * GL_ORDER) as u64)
}

/// `∫_{𝔫∩[0,1)} |g|^s` over the complement of an HL dissection, with the full integral for ratios.
pub fn minor_arc_mean_value(
    k: u32,
    s: u32,
    p: u64,
    r: Option<u64>,
    dissection: &ArcDissection,
) -> Result<MinorArcMeanValue> {
    const OP: &str = "minor_arc_mean_value";
    if dissection.family == ArcFamily::Dh {
        return Err(Error::domain(OP, "needs a Hardy–Littlewood family"));
    }
    if dissection.k != k {
        return Err(Error::validation(OP, "dissection degree differs from k"));
    }
    let members = smooth_members(p, r)?;
    let unit = IntervalUnion::from_intervals(vec![(0.0, 1.0)]);
    let major = dissection.arcs_in_unit()?.intersect(&unit);
    let minor = unit.intersect(&IntervalUnion::from_intervals(
        complement_in_unit(&major).into_iter().collect(),
    ));
    // one panel per half period of the highest frequency of |g|²
    let band = (p as f64).powi(k as i32) * (s.max(2) as f64 / 2.0);
    let width = 0.5 / band;
    let nodes_needed = ((1.0 / width).ceil() as u64 + 2 * major.len() as u64) * GL_ORDER as u64;
    if nodes_needed > MINOR_NODE_BUDGET {
        return Err(Error::resource(
            OP,
            format!("{nodes_needed} nodes exceed the budget {MINOR_NODE_BUDGET}"),
        ));
    }
    let full_range = if members.len() as u64 == p && p > 0 {
        Some(WeylSumSpec::new(k, 1.0, 0, p)?)
    } else {
        None
    };
    let f = |a: f64| g_at(&members, full_range, k, a).powi(s as i32);
    let (minor_v, n1) = gl_over(&minor, width, &f);
    let (major_v, n2) = gl_over(&major, width, &f);
    let full = minor_v + major_v;
    if !full.is_finite() {
        return Err(Error::numeric(OP, "quadrature produced a non-finite value"));
    }
    Ok(MinorArcMeanValue {
        minor: minor_v,
        full,
        ratio: if full > 0.0 { minor_v / full } else { 0.0 },
        minor_measure: minor.measure(),
        nodes: n1 + n2,
    })
}

fn complement_in_unit(u: &IntervalUnion) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut at = 0.0;
    for &(a, b) in u.intervals() {
        if a > at {
            out.push((at, a));
        }
        at = at.max(b);
    }
    if at < 1.0 {
        out.push((at, 1.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_codes_for_three() {
        assert_eq!(weight_codes(3), vec![1, 2, 6]);
        assert_eq!(weight_codes(4), vec![1, 2, 4, 6, 24]);
    }

    #[test]
    fn two_cubes_up_to_three() {
        assert_eq!(mean_value_parseval(3, 2, 3, None).unwrap(), 15);
        assert_eq!(mean_value_brute(3, 2, 3, None).unwrap(), 15);
    }

    #[test]
    fn single_variable_counts_set() {
        assert_eq!(
            mean_value_parseval(3, 1, 50, Some(5)).unwrap(),
            smooth_members(50, Some(5)).unwrap().len() as u128
        );
    }

    #[test]
    fn residue_classes_match_brute_force() {
        for (k, s, p, r) in [
            (2, 3, 40, None),
            (3, 3, 30, None),
            (3, 2, 60, Some(7)),
            (4, 4, 12, None),
        ] {
            let fast = parseval_with_target(k, s, p, r, 64).unwrap();
            assert_eq!(
                fast,
                mean_value_brute(k, s, p, r).unwrap(),
                "k={k} s={s} P={p}"
            );
        }
    }

    #[test]
    fn trapezoid_is_exact_above_bandwidth() {
        let q = mean_value_quadrature(3, 2, 3, None, None).unwrap();
        assert!(q.exact_rule);
        assert!((q.value - 15.0).abs() < 1e-9);
    }

    #[test]
    fn zero_power_gives_minor_measure() {
        let d = ArcDissection::hl(30.0, 3, ArcFamily::HlN).unwrap();
        let m = minor_arc_mean_value(3, 0, 30, None, &d).unwrap();
        assert!((m.minor - m.minor_measure).abs() < 1e-12);
        assert!((m.full - 1.0).abs() < 1e-12);
        let arcs = d.arcs_in_unit().unwrap();
        assert!((m.minor_measure - (1.0 - arcs.measure())).abs() < 1e-12);
    }
}
