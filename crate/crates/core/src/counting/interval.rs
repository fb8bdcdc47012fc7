use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fixed;
use crate::forms::Window;
use crate::{Error, Result};

/// Sorted, pairwise disjoint, non-touching closed-open intervals `[a, b)` with cached measure.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
    measure: f64,
}

fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        c += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + c
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    fn from_merged(intervals: Vec<(f64, f64)>) -> Self {
        let measure = neumaier(intervals.iter().map(|(a, b)| b - a));
        Self { intervals, measure }
    }

    /// Union of arbitrary intervals; empty ones are dropped, overlapping or touching ones merged.
    pub fn from_intervals(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|(a, b)| a < b);
        raw.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self::from_merged(out)
    }

    /// Intervals that must not overlap; touching neighbours are merged.
    pub fn from_disjoint(op: &'static str, raw: &[(f64, f64)]) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = raw.to_vec();
        if let Some(&(a, b)) = v
            .iter()
            .find(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::invariant(
                op,
                format!("malformed interval [{a}, {b})"),
            ));
        }
        v.retain(|(a, b)| a < b);
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in v.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::invariant(
                    op,
                    format!(
                        "intervals [{}, {}) and [{}, {}) overlap",
                        w[0].0, w[0].1, w[1].0, w[1].1
                    ),
                ));
            }
        }
        Ok(Self::from_intervals(v))
    }

    /// Intervals in fixed-point units; the measure is summed exactly in integers.
    pub(crate) fn from_fixed(intervals: &[(i64, i64)]) -> Self {
        let total: i128 = intervals.iter().map(|&(a, b)| (b - a) as i128).sum();
        Self {
            intervals: intervals
                .iter()
                .map(|&(a, b)| (fixed::to_f64(a), fixed::to_f64(b)))
                .collect(),
            measure: total as f64 / fixed::SCALE,
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn validate(&self, op: &'static str) -> Result<()> {
        for &(a, b) in &self.intervals {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::invariant(
                    op,
                    format!("degenerate interval [{a}, {b})"),
                ));
            }
        }
        for w in self.intervals.windows(2) {
            if !(w[0].1 < w[1].0) {
                return Err(Error::invariant(
                    op,
                    format!(
                        "intervals [{}, {}) and [{}, {}) overlap or touch",
                        w[0].0, w[0].1, w[1].0, w[1].1
                    ),
                ));
            }
        }
        let recomputed = neumaier(self.intervals.iter().map(|(a, b)| b - a));
        if (recomputed - self.measure).abs() > 1e-12 * recomputed.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::invariant(
                op,
                format!("cached measure {} ≠ {recomputed}", self.measure),
            ));
        }
        Ok(())
    }

    /// Membership in the closed-open union.
    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|&(a, _)| a <= x);
        i > 0 && x < self.intervals[i - 1].1
    }

    /// Membership in the interior.
    pub fn contains_open(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|&(a, _)| a < x);
        i > 0 && x < self.intervals[i - 1].1
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.intervals.clone();
        v.extend_from_slice(&other.intervals);
        Self::from_intervals(v)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.len() && j < other.len() {
            let (a, b) = self.intervals[i];
            let (c, d) = other.intervals[j];
            let lo = a.max(c);
            let hi = b.min(d);
            if lo < hi {
                out.push((lo, hi));
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn clip(&self, window: &Window) -> Self {
        self.intersect(&Self::from_intervals(vec![(window.start, window.end())]))
    }

    /// `window \ self`.
    pub fn complement_within(&self, window: &Window) -> Self {
        let mut out = Vec::new();
        let mut cur = window.start;
        for &(a, b) in &self.clip(window).intervals {
            if a > cur {
                out.push((cur, a));
            }
            cur = cur.max(b);
        }
        if cur < window.end() {
            out.push((cur, window.end()));
        }
        Self::from_intervals(out)
    }

    pub fn translate(&self, dx: f64) -> Self {
        Self::from_intervals(
            self.intervals
                .iter()
                .map(|&(a, b)| (a + dx, b + dx))
                .collect(),
        )
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        let mut j = 0;
        for &(a, b) in &self.intervals {
            while j < other.len() && other.intervals[j].1 <= a {
                j += 1;
            }
            if j == other.len() || other.intervals[j].0 > a || other.intervals[j].1 < b {
                return false;
            }
        }
        true
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.intervals.iter().map(|&(a, b)| [a, b]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        let raw: Vec<(f64, f64)> = pairs.into_iter().map(|[a, b]| (a, b)).collect();
        IntervalUnion::from_disjoint("IntervalUnion::deserialize", &raw)
            .map_err(serde::de::Error::custom)
    }
}
