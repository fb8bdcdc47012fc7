use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::slice::ParallelSliceMut;
use serde::{Deserialize, Serialize};

use super::fixed;
use super::interval::IntervalUnion;
use crate::forms::{DiagonalForm, EnumerationCost, SearchBox, Window, DEFAULT_HALF_BUDGET};
use crate::{Error, Result};

/// Enumeration statistics for one meet-in-the-middle run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    pub cost: EnumerationCost,
    /// Pair sums visited by the sweep or the streaming merge.
    pub visited: u64,
}

/// Number of `x` in `box` with `|F(x) − μ| < τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub count: u64,
    pub mu: f64,
    pub tau: f64,
    pub search_box: SearchBox,
    pub stats: EnumerationStats,
}

fn check_shape(op: &'static str, form: &DiagonalForm, b: &SearchBox) -> Result<()> {
    if form.s() != b.s() {
        return Err(Error::validation(
            op,
            format!("form has {} variables but box has {}", form.s(), b.s()),
        ));
    }
    Ok(())
}

pub(crate) fn tau_fixed(op: &'static str, tau: f64) -> Result<i64> {
    if !(tau > 0.0) {
        return Err(Error::validation(op, format!("τ = {tau} must be positive")));
    }
    let t = fixed::from_f64(op, tau)?;
    if t == 0 {
        return Err(Error::validation(
            op,
            format!("τ = {tau} is below the fixed-point resolution"),
        ));
    }
    Ok(t)
}

/// Sorted multiset of `Σ_{i∈vars} λᵢxᵢ^k` over the sub-box.
pub(crate) fn half_sums(
    op: &'static str,
    form: &DiagonalForm,
    b: &SearchBox,
    vars: std::ops::Range<usize>,
) -> Result<Vec<i64>> {
    let mut sums = vec![0i64];
    for i in vars {
        let terms: Vec<i64> = (b.lo[i]..=b.hi[i])
            .map(|x| fixed::from_f64(op, form.term(i, x)))
            .collect::<Result<_>>()?;
        let mut next = Vec::with_capacity(sums.len() * terms.len());
        for &s in &sums {
            next.extend(terms.iter().map(|&t| s + t));
        }
        sums = next;
    }
    sums.par_sort_unstable();
    Ok(sums)
}

/// Both halves of the box, split where the box accounting says.
pub(crate) struct Halves {
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub cost: EnumerationCost,
}

pub(crate) fn halves(
    op: &'static str,
    form: &DiagonalForm,
    b: &SearchBox,
    budget: u128,
) -> Result<Halves> {
    check_shape(op, form, b)?;
    let cost = b.check_budget(op, budget)?;
    let left = half_sums(op, form, b, 0..cost.split)?;
    let right = half_sums(op, form, b, cost.split..b.s())?;
    Ok(Halves { left, right, cost })
}

/// Pairs `(l, r)` with `lo < l + r < hi`, by a two-pointer sweep over sorted halves.
pub(crate) fn count_pairs(left: &[i64], right: &[i64], lo: i64, hi: i64) -> (u64, u64) {
    let mut count = 0u64;
    let mut visited = 0u64;
    // r < hi − l  and  r > lo − l, both thresholds falling as l grows
    let mut p_hi = right.len();
    let mut p_lo = right.len();
    for &l in left {
        while p_hi > 0 && right[p_hi - 1] >= hi - l {
            p_hi -= 1;
            visited += 1;
        }
        while p_lo > 0 && right[p_lo - 1] > lo - l {
            p_lo -= 1;
            visited += 1;
        }
        count += p_hi.saturating_sub(p_lo) as u64;
    }
    (count, visited + left.len() as u64)
}

pub fn count_solutions(
    form: &DiagonalForm,
    mu: f64,
    tau: f64,
    search_box: &SearchBox,
) -> Result<CountResult> {
    count_solutions_with_budget(form, mu, tau, search_box, DEFAULT_HALF_BUDGET)
}

pub fn count_solutions_with_budget(
    form: &DiagonalForm,
    mu: f64,
    tau: f64,
    search_box: &SearchBox,
    budget: u128,
) -> Result<CountResult> {
    const OP: &str = "count_solutions";
    let t = tau_fixed(OP, tau)?;
    let m = fixed::from_f64(OP, mu)?;
    let h = halves(OP, form, search_box, budget)?;
    let (count, visited) = count_pairs(&h.left, &h.right, m - t, m + t);
    Ok(CountResult {
        count,
        mu,
        tau,
        search_box: search_box.clone(),
        stats: EnumerationStats {
            cost: h.cost,
            visited,
        },
    })
}

/// Largest box enumerated point by point by [`count_solutions_naive`].
pub const NAIVE_BUDGET: u128 = 200_000_000;

/// Point-by-point enumeration, with the same quantized arithmetic as [`count_solutions`].
pub fn count_solutions_naive(
    form: &DiagonalForm,
    mu: f64,
    tau: f64,
    search_box: &SearchBox,
) -> Result<u64> {
    const OP: &str = "count_solutions_naive";
    check_shape(OP, form, search_box)?;
    let t = tau_fixed(OP, tau)?;
    let m = fixed::from_f64(OP, mu)?;
    if search_box.volume() > NAIVE_BUDGET {
        return Err(Error::resource(
            OP,
            format!(
                "{} points exceed the budget {NAIVE_BUDGET}",
                search_box.volume()
            ),
        ));
    }
    let s = search_box.s();
    let terms: Vec<Vec<i64>> = (0..s)
        .map(|i| {
            (search_box.lo[i]..=search_box.hi[i])
                .map(|x| fixed::from_f64(OP, form.term(i, x)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut idx = vec![0usize; s];
    let mut count = 0;
    loop {
        let f: i64 = (0..s).map(|i| terms[i][idx[i]]).sum();
        if (f - m).abs() < t {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == s {
                return Ok(count);
            }
            idx[i] += 1;
            if idx[i] < terms[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Counts for many targets sharing one pair of sorted halves.
pub fn count_solutions_many(
    form: &DiagonalForm,
    mus: &[f64],
    tau: f64,
    search_box: &SearchBox,
) -> Result<Vec<u64>> {
    const OP: &str = "count_solutions";
    let t = tau_fixed(OP, tau)?;
    let h = halves(OP, form, search_box, DEFAULT_HALF_BUDGET)?;
    mus.iter()
        .map(|&mu| {
            let m = fixed::from_f64(OP, mu)?;
            Ok(count_pairs(&h.left, &h.right, m - t, m + t).0)
        })
        .collect()
}

/// Merged `(s − τ, s + τ)` over all pair sums `s = l + r`, clipped to `[w0, w1)`, streamed in
/// increasing order from a heap of cursors (one per element of the smaller half).
pub(crate) fn stream_union(
    left: &[i64],
    right: &[i64],
    tau: i64,
    w0: i64,
    w1: i64,
) -> (Vec<(i64, i64)>, u64) {
    let (outer, inner) = if left.len() <= right.len() {
        (left, right)
    } else {
        (right, left)
    };
    let mut heap: BinaryHeap<Reverse<(i64, usize, usize)>> = BinaryHeap::with_capacity(outer.len());
    let mut ends = Vec::with_capacity(outer.len());
    for (i, &l) in outer.iter().enumerate() {
        // sums s with s + τ > w0 and s − τ < w1
        let start = inner.partition_point(|&r| l + r + tau <= w0);
        let end = inner.partition_point(|&r| l + r - tau < w1);
        ends.push(end);
        if start < end {
            heap.push(Reverse((l + inner[start], i, start)));
        }
    }
    let mut out: Vec<(i64, i64)> = Vec::new();
    let mut visited = 0u64;
    while let Some(Reverse((s, i, j))) = heap.pop() {
        visited += 1;
        let a = (s - tau).max(w0);
        let b = (s + tau).min(w1);
        if a < b {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        if j + 1 < ends[i] {
            heap.push(Reverse((outer[i] + inner[j + 1], i, j + 1)));
        }
    }
    (out, visited)
}

/// Representable set inside a window with its enumeration statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMeasures {
    pub union: IntervalUnion,
    pub window_length: f64,
    pub representable: f64,
    /// Window length minus representable measure (box-exceptional measure).
    pub exceptional: f64,
    pub stats: EnumerationStats,
}

pub(crate) fn window_bounds(op: &'static str, window: &Window) -> Result<(i64, i64)> {
    Ok((
        fixed::from_f64(op, window.start)?,
        fixed::from_f64(op, window.end())?,
    ))
}

pub(crate) fn measures_from_stream(
    pieces: &[(i64, i64)],
    w0: i64,
    w1: i64,
    stats: EnumerationStats,
) -> WindowMeasures {
    let union = IntervalUnion::from_fixed(pieces);
    let covered: i128 = pieces.iter().map(|&(a, b)| (b - a) as i128).sum();
    let total = (w1 - w0) as i128;
    WindowMeasures {
        union,
        window_length: total as f64 / fixed::SCALE,
        representable: covered as f64 / fixed::SCALE,
        exceptional: (total - covered) as f64 / fixed::SCALE,
        stats,
    }
}

pub fn window_measures(
    form: &DiagonalForm,
    search_box: &SearchBox,
    tau: f64,
    window: &Window,
) -> Result<WindowMeasures> {
    const OP: &str = "representable_union";
    let t = tau_fixed(OP, tau)?;
    let (w0, w1) = window_bounds(OP, window)?;
    let h = halves(OP, form, search_box, DEFAULT_HALF_BUDGET)?;
    let (pieces, visited) = stream_union(&h.left, &h.right, t, w0, w1);
    Ok(measures_from_stream(
        &pieces,
        w0,
        w1,
        EnumerationStats {
            cost: h.cost,
            visited,
        },
    ))
}

/// `⋃ (F(x) − τ, F(x) + τ)` over `x` in the box, clipped to the window.
pub fn representable_union(
    form: &DiagonalForm,
    search_box: &SearchBox,
    tau: f64,
    window: &Window,
) -> Result<IntervalUnion> {
    Ok(window_measures(form, search_box, tau, window)?.union)
}

/// Window length minus the representable measure.
pub fn exceptional_measure(
    form: &DiagonalForm,
    search_box: &SearchBox,
    tau: f64,
    window: &Window,
) -> Result<f64> {
    Ok(window_measures(form, search_box, tau, window)?.exceptional)
}

/// Representable measure over `[−N, N]`.
pub fn representable_measure_y(
    form: &DiagonalForm,
    search_box: &SearchBox,
    tau: f64,
    n: f64,
) -> Result<f64> {
    let w = Window::from_bounds(-n, n)?;
    Ok(window_measures(form, search_box, tau, &w)?.representable)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f = DiagonalForm::new(3, vec![1.0]).unwrap();
        let b = SearchBox::positive(1, 10).unwrap();
        assert_eq!(count_solutions(&f, 8.0, 0.5, &b).unwrap().count, 1);
        let f = DiagonalForm::new(3, vec![1.0, 1.0]).unwrap();
        let b = SearchBox::positive(2, 12).unwrap();
        assert_eq!(count_solutions(&f, 1729.0, 0.5, &b).unwrap().count, 4);
        assert_eq!(
            count_solutions(&f, 1729.0 + std::f64::consts::PI / 10.0, 1e-6, &b)
                .unwrap()
                .count,
            0
        );
    }

    #[test]
    fn agrees_with_naive_loop() {
        let f = DiagonalForm::new(3, vec![1.0, 2f64.sqrt(), -std::f64::consts::PI]).unwrap();
        let b = SearchBox::new(vec![-4, 0, 1], vec![6, 7, 5]).unwrap();
        for (i, mu) in [-50.0, 0.0, 12.3, 77.7, 150.0].into_iter().enumerate() {
            let tau = 0.5 + i as f64;
            assert_eq!(
                count_solutions(&f, mu, tau, &b).unwrap().count,
                count_solutions_naive(&f, mu, tau, &b).unwrap()
            );
        }
    }

    #[test]
    fn union_examples() {
        let f = DiagonalForm::new(3, vec![1.0]).unwrap();
        let b = SearchBox::positive(1, 3).unwrap();
        let w = Window::new(0.0, 30.0).unwrap();
        let m = window_measures(&f, &b, 0.5, &w).unwrap();
        assert_eq!(m.union.intervals(), &[(0.5, 1.5), (7.5, 8.5), (26.5, 27.5)]);
        assert_eq!(m.representable, 3.0);
        assert_eq!(m.exceptional, 27.0);
        let w = Window::new(0.0, 35.0).unwrap();
        let u = representable_union(&f, &b, 5.0, &w).unwrap();
        assert_eq!(u.intervals(), &[(0.0, 13.0), (22.0, 32.0)]);
        assert_eq!(u.measure(), 23.0);
        let u = representable_union(&f, &b, 10.0, &w).unwrap();
        assert_eq!(u.intervals(), &[(0.0, 35.0)]);
        let w = Window::new(100.0, 5.0).unwrap();
        assert!(representable_union(&f, &b, 0.5, &w).unwrap().is_empty());
    }

    #[test]
    fn budget_error_suggests_split() {
        let f = DiagonalForm::new(3, vec![1.0; 4]).unwrap();
        let b = SearchBox::positive(4, 1000).unwrap();
        let e = count_solutions_with_budget(&f, 1.0, 0.5, &b, 1000).unwrap_err();
        assert!(matches!(e, Error::Resource { .. }));
        assert!(e.to_string().contains("split"));
    }
}
