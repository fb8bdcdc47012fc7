//! Davenport–Heilbronn and Hardy–Littlewood arc dissections.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::IntervalUnion;
use crate::expsums::{weyl_sum, WeylSumSpec};
use crate::forms::{detect_rational, DiagonalForm, Growth};
use crate::numbers::arith::gcd;
use crate::numbers::{convergents, RationalApprox};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcFamily {
    /// `|α| ≤ S(P)P^{−k}` major, up to `T(P)` minor, beyond trivial.
    Dh,
    /// `|qα − a| ≤ (2k)^{−1}P^{1−k}` with `q ≤ (2k)^{−1}P`.
    HlN,
    /// `|qα − a| ≤ P^{−9/4}` with `q ≤ P^{3/4}`.
    VSec8,
    /// `|qα − a| ≤ (log P)^e P^{−3}` with `q ≤ (log P)^e`.
    WSec8,
}

impl ArcFamily {
    pub fn name(self) -> &'static str {
        match self {
            ArcFamily::Dh => "dh",
            ArcFamily::HlN => "hl_n",
            ArcFamily::VSec8 => "v_sec8",
            ArcFamily::WSec8 => "w_sec8",
        }
    }
}

/// Exponent `e` in the `W` family used unless overridden.
pub const W_EXPONENT_DEFAULT: f64 = 3.0;
/// The exponent as written for the asymptotic argument.
pub const W_EXPONENT_ASYMPTOTIC: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcDissection {
    pub p: f64,
    pub k: u32,
    pub s_handle: Growth,
    pub t_handle: Growth,
    pub family: ArcFamily,
    pub w_exponent: f64,
}

impl ArcDissection {
    pub fn dh(p: f64, k: u32, s_handle: Growth, t_handle: Growth) -> Result<Self> {
        let d = Self {
            p,
            k,
            s_handle,
            t_handle,
            family: ArcFamily::Dh,
            w_exponent: W_EXPONENT_DEFAULT,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn hl(p: f64, k: u32, family: ArcFamily) -> Result<Self> {
        if family == ArcFamily::Dh {
            return Err(Error::domain(
                "ArcDissection::hl",
                "DH dissections need S and T handles",
            ));
        }
        let d = Self {
            p,
            k,
            s_handle: Growth::Constant(1.0),
            t_handle: Growth::Constant(1.0),
            family,
            w_exponent: W_EXPONENT_DEFAULT,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn with_w_exponent(mut self, e: f64) -> Result<Self> {
        self.w_exponent = e;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        const OP: &str = "ArcDissection";
        if !(self.p.is_finite() && self.p >= 1.0) {
            return Err(Error::validation(
                OP,
                format!("P = {} must be at least 1", self.p),
            ));
        }
        if self.k < 2 {
            return Err(Error::validation(OP, "k must be at least 2"));
        }
        if !(self.w_exponent.is_finite() && self.w_exponent > 0.0) {
            return Err(Error::validation(OP, "W exponent must be positive"));
        }
        self.s_handle.validate()?;
        self.t_handle.validate()?;
        if self.family == ArcFamily::Dh && self.t_value() < self.s_value() {
            return Err(Error::validation(
                OP,
                format!(
                    "T(P) = {} is below S(P) = {}",
                    self.t_value(),
                    self.s_value()
                ),
            ));
        }
        Ok(())
    }

    pub fn s_value(&self) -> f64 {
        self.s_handle.eval(self.p)
    }

    pub fn t_value(&self) -> f64 {
        self.t_handle.eval(self.p)
    }

    /// `S(P)P^{−k}`.
    pub fn major_cut(&self) -> f64 {
        self.s_value() * self.p.powi(-(self.k as i32))
    }

    /// Width `w` and denominator bound `Q` of an HL family: arcs `|qα − a| ≤ w`, `q ≤ Q`.
    pub fn hl_shape(&self) -> Option<(f64, u64)> {
        let p = self.p;
        let k = self.k as f64;
        let (w, q) = match self.family {
            ArcFamily::Dh => return None,
            ArcFamily::HlN => (p.powf(1.0 - k) / (2.0 * k), p / (2.0 * k)),
            ArcFamily::VSec8 => (p.powf(-2.25), p.powf(0.75)),
            ArcFamily::WSec8 => {
                let l = p.ln().max(1.0).powf(self.w_exponent);
                (l * p.powi(-3), l)
            }
        };
        Some((w, q.floor().max(0.0) as u64))
    }

    /// The family's arcs inside `[0, 1)`.
    pub fn arcs_in_unit(&self) -> Result<IntervalUnion> {
        const OP: &str = "ArcDissection::arcs_in_unit";
        let (w, qmax) = self
            .hl_shape()
            .ok_or_else(|| Error::domain(OP, "DH dissections have no rational arcs"))?;
        if qmax > 20_000 {
            return Err(Error::resource(
                OP,
                format!("q ≤ {qmax} yields too many arcs"),
            ));
        }
        let mut raw = Vec::new();
        for q in 1..=qmax {
            let r = w / q as f64;
            for a in 0..=q {
                if gcd(a, q) == 1 {
                    let c = a as f64 / q as f64;
                    let (lo, hi) = ((c - r).max(0.0), (c + r).min(1.0));
                    if lo < hi {
                        raw.push((lo, hi));
                    }
                }
            }
        }
        Ok(IntervalUnion::from_intervals(raw))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum ArcLabel {
    Major,
    Minor,
    Trivial,
    InArc { witness: RationalApprox },
    Complement,
}

impl ArcLabel {
    pub fn class_name(&self) -> &'static str {
        match self {
            ArcLabel::Major => "major",
            ArcLabel::Minor => "minor",
            ArcLabel::Trivial => "trivial",
            ArcLabel::InArc { .. } => "in_arc",
            ArcLabel::Complement => "complement",
        }
    }

    pub fn witness(&self) -> Option<RationalApprox> {
        match self {
            ArcLabel::InArc { witness } => Some(*witness),
            _ => None,
        }
    }
}

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcLabel::InArc { witness } => write!(f, "in_arc({},{})", witness.a, witness.q),
            other => f.write_str(other.class_name()),
        }
    }
}

pub fn dh_classify(alpha: f64, dissection: &ArcDissection) -> Result<ArcLabel> {
    if dissection.family != ArcFamily::Dh {
        return Err(Error::domain(
            "dh_classify",
            format!("{} is not a DH dissection", dissection.family.name()),
        ));
    }
    let x = alpha.abs();
    Ok(if x <= dissection.major_cut() {
        ArcLabel::Major
    } else if x <= dissection.t_value() {
        ArcLabel::Minor
    } else {
        ArcLabel::Trivial
    })
}

/// Largest `q` scanned directly when the arcs are too wide for the convergent shortcut.
const BRUTE_Q_MAX: u64 = 1_000_000;

pub fn hl_classify(alpha: f64, dissection: &ArcDissection) -> Result<ArcLabel> {
    const OP: &str = "hl_classify";
    let (w, qmax) = dissection
        .hl_shape()
        .ok_or_else(|| Error::domain(OP, "DH dissections are classified by dh_classify"))?;
    if !alpha.is_finite() {
        return Err(Error::validation(OP, "α must be finite"));
    }
    let mut hits: Vec<RationalApprox> = Vec::new();
    if 2.0 * w * (qmax as f64) < 1.0 {
        // any a/q with |α − a/q| < 1/(2q²) is a convergent
        hits.extend(
            convergents(alpha, qmax)
                .into_iter()
                .filter(|c| c.residual <= w),
        );
    } else {
        if qmax > BRUTE_Q_MAX {
            return Err(Error::resource(
                OP,
                format!("q ≤ {qmax} is too wide to scan"),
            ));
        }
        for q in 1..=qmax {
            let centre = q as f64 * alpha;
            let lo = (centre - w).ceil() as i64;
            let hi = (centre + w).floor() as i64;
            for a in lo..=hi {
                if gcd(a.unsigned_abs(), q) == 1 {
                    let r = RationalApprox::new(alpha, a, q);
                    if r.residual <= w {
                        hits.push(r);
                    }
                }
            }
        }
    }
    match hits.len() {
        0 => Ok(ArcLabel::Complement),
        1 => Ok(ArcLabel::InArc { witness: hits[0] }),
        _ => Err(Error::invariant(
            OP,
            format!(
                "α = {alpha} lies on overlapping arcs {}",
                hits.iter()
                    .map(|h| format!("{}/{}", h.a, h.q))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TChoice {
    pub p: f64,
    pub t: f64,
    /// The convergent of `λ₁/λ₂` that fixed `T`, when one was used.
    pub convergent: Option<RationalApprox>,
    pub warning: Option<String>,
}

/// `T(P)`: the largest convergent denominator of `λ₁/λ₂` at most `P^{k/2}`, clamped to `[S(P), P^k]`.
pub fn choose_t(l1: f64, l2: f64, s_handle: &Growth, p: f64, k: u32) -> Result<TChoice> {
    const OP: &str = "choose_t";
    if !(l1.is_finite() && l2.is_finite() && l1 != 0.0 && l2 != 0.0) {
        return Err(Error::validation(
            OP,
            "coefficients must be finite and nonzero",
        ));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::validation(OP, format!("P = {p} must be at least 1")));
    }
    let s = s_handle.eval(p);
    let ratio = l1 / l2;
    let fallback = |why: String| TChoice {
        p,
        t: (s * s).min(p.powi(k as i32)).max(s),
        convergent: None,
        warning: Some(why),
    };
    if let Some(r) = detect_rational(ratio, 1_000_000) {
        return Ok(fallback(format!(
            "λ₁/λ₂ = {}/{} is rational; T(P) = S(P)²",
            r.a, r.q
        )));
    }
    let qmax = p.powf(k as f64 / 2.0).min(9.0e15) as u64;
    let Some(c) = convergents(ratio, qmax).last().copied() else {
        return Ok(fallback("no convergent available; T(P) = S(P)²".into()));
    };
    let t = (c.q as f64).clamp(s, p.powi(k as i32).max(s));
    Ok(TChoice {
        p,
        t,
        convergent: Some(c),
        warning: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub p: f64,
    pub alpha: f64,
    pub class: ArcLabel,
    /// Best approximation `a/q` to `λ₁α` with `q ≤ P`.
    pub q: u64,
    pub a: i64,
    pub residual: f64,
    pub sup_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorProfile {
    pub p: f64,
    pub t: f64,
    pub rows: Vec<ProfileRow>,
    /// `max |f₁f₂|/P²` over the sampled minor-arc points.
    pub sup_ratio: f64,
    pub argmax: f64,
}

impl MinorProfile {
    pub const CSV_HEADER: &'static str = "P,alpha,class,q,a,residual,sup_ratio";
}

fn product_ratio(form: &DiagonalForm, p: u64, alpha: f64) -> Result<f64> {
    let l = form.lambda();
    let f1 = weyl_sum(&WeylSumSpec::new(form.k(), l[0], 0, p)?, alpha);
    let f2 = weyl_sum(&WeylSumSpec::new(form.k(), l[1], 0, p)?, alpha);
    let prod: Complex64 = f1 * f2;
    Ok(prod.norm() / (p as f64 * p as f64))
}

/// Sample points in `(S(P)P^{−k}, T(P)]`: log-spaced, clustered at the major cut, and at `a/(qλ₁)` for small `q`.
fn minor_samples(d: &ArcDissection, l1: f64, grid: usize) -> Vec<f64> {
    let lo = d.major_cut();
    let hi = d.t_value();
    let mut pts = Vec::with_capacity(grid + 16);
    if grid == 1 || hi <= lo {
        pts.push(hi.max(lo * (1.0 + 1e-9)));
        return pts;
    }
    let n_log = grid / 2;
    let n_edge = grid / 4;
    let n_rat = grid - n_log - n_edge;
    let (llo, lhi) = (lo.ln(), hi.ln());
    for i in 1..=n_log {
        pts.push((llo + (lhi - llo) * i as f64 / n_log as f64).exp().min(hi));
    }
    for i in 1..=n_edge {
        pts.push((lo * (1.0 + 4.0 * i as f64 / n_edge as f64)).min(hi));
    }
    let span = hi.min(1.0 / l1.abs());
    let mut q = 1u64;
    while pts.len() < n_log + n_edge + n_rat {
        for a in 1..=q {
            if pts.len() >= n_log + n_edge + n_rat {
                break;
            }
            if gcd(a, q) == 1 {
                let x = (a as f64 / q as f64) * span;
                if x > lo && x <= hi {
                    pts.push(x);
                }
            }
        }
        q += 1;
        if q > 10 * grid as u64 {
            break;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Empirical `sup |f₁(λ₁α)f₂(λ₂α)|/P²` over sampled minor-arc `α` for a DH dissection.
pub fn minor_sup_profile(
    form: &DiagonalForm,
    dissection: &ArcDissection,
    grid: usize,
) -> Result<MinorProfile> {
    const OP: &str = "minor_sup_profile";
    if dissection.family != ArcFamily::Dh {
        return Err(Error::domain(OP, "needs a DH dissection"));
    }
    if form.s() < 2 {
        return Err(Error::domain(OP, "needs two coefficients"));
    }
    if grid == 0 {
        return Err(Error::validation(OP, "grid must be positive"));
    }
    let p = dissection.p.floor() as u64;
    let l1 = form.lambda()[0];
    let alphas = minor_samples(dissection, l1, grid);
    let rows: Vec<ProfileRow> = alphas
        .par_iter()
        .map(|&alpha| {
            let ratio = product_ratio(form, p, alpha)?;
            let best = convergents(l1 * alpha, p.max(1))
                .last()
                .copied()
                .unwrap_or(RationalApprox::new(l1 * alpha, 0, 1));
            Ok(ProfileRow {
                p: dissection.p,
                alpha,
                class: dh_classify(alpha, dissection)?,
                q: best.q,
                a: best.a,
                residual: best.residual,
                sup_ratio: ratio,
            })
        })
        .collect::<Result<_>>()?;
    let (argmax, sup_ratio) = rows
        .iter()
        .map(|r| (r.alpha, r.sup_ratio))
        .fold((f64::NAN, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(MinorProfile {
        p: dissection.p,
        t: dissection.t_value(),
        rows,
        sup_ratio,
        argmax,
    })
}

/// Profiles over several `P`, each with `T(P)` from [`choose_t`] on the first two coefficients.
pub fn minor_sup_sweep(
    form: &DiagonalForm,
    ps: &[f64],
    s_handle: Growth,
    grid: usize,
) -> Result<Vec<MinorProfile>> {
    let l = form.lambda();
    if l.len() < 2 {
        return Err(Error::domain("minor_sup_sweep", "needs two coefficients"));
    }
    ps.iter()
        .map(|&p| {
            let t = choose_t(l[0], l[1], &s_handle, p, form.k())?;
            let d = ArcDissection::dh(p, form.k(), s_handle, Growth::Constant(t.t))?;
            minor_sup_profile(form, &d, grid)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dh(p: f64) -> ArcDissection {
        ArcDissection::dh(p, 3, Growth::LOG, Growth::Constant(50.0)).unwrap()
    }

    #[test]
    fn dh_examples() {
        let d = dh(100.0);
        assert_eq!(dh_classify(0.0, &d).unwrap(), ArcLabel::Major);
        assert_eq!(dh_classify(51.0, &d).unwrap(), ArcLabel::Trivial);
        assert_eq!(dh_classify(d.major_cut(), &d).unwrap(), ArcLabel::Major);
        assert_eq!(
            dh_classify(d.major_cut() * (1.0 + 1e-12), &d).unwrap(),
            ArcLabel::Minor
        );
        assert_eq!(dh_classify(50.0, &d).unwrap(), ArcLabel::Minor);
        assert_eq!(dh_classify(-50.0, &d).unwrap(), ArcLabel::Minor);
    }

    #[test]
    fn t_below_s_is_rejected() {
        assert!(
            ArcDissection::dh(100.0, 3, Growth::Constant(10.0), Growth::Constant(2.0)).is_err()
        );
    }

    #[test]
    fn hl_half() {
        let d = ArcDissection::hl(12.0, 3, ArcFamily::HlN).unwrap();
        let l = hl_classify(0.5, &d).unwrap();
        assert_eq!(l.witness().map(|w| (w.a, w.q)), Some((1, 2)));
        let d10 = ArcDissection::hl(10.0, 3, ArcFamily::HlN).unwrap();
        assert_eq!(hl_classify(0.5, &d10).unwrap(), ArcLabel::Complement);
    }

    #[test]
    fn golden_is_complement() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for p in [100.0, 1000.0, 10_000.0] {
            let d = ArcDissection::hl(p, 3, ArcFamily::HlN).unwrap();
            assert_eq!(hl_classify(g, &d).unwrap(), ArcLabel::Complement);
        }
    }

    #[test]
    fn v_family_third() {
        let d = ArcDissection::hl(100.0, 3, ArcFamily::VSec8).unwrap();
        let l = hl_classify(1.0 / 3.0 + 1e-6, &d).unwrap();
        assert_eq!(l.witness().map(|w| (w.a, w.q)), Some((1, 3)));
    }

    #[test]
    fn wide_w_family_scans_and_detects_overlap() {
        let d = ArcDissection::hl(20.0, 3, ArcFamily::WSec8)
            .unwrap()
            .with_w_exponent(W_EXPONENT_ASYMPTOTIC)
            .unwrap();
        assert!(matches!(
            hl_classify(0.3, &d),
            Err(Error::Resource { .. }) | Err(Error::Invariant { .. })
        ));
    }

    #[test]
    fn choose_t_sqrt2() {
        let c = choose_t(2f64.sqrt(), 1.0, &Growth::LOG, 1.0e4, 3).unwrap();
        assert_eq!(c.t, 470_832.0);
        assert!(c.warning.is_none());
        let r = choose_t(1.0, 1.0, &Growth::LOG, 1.0e4, 3).unwrap();
        assert!(r.warning.is_some());
        let mut prev = 0.0;
        for p in [10.0, 30.0, 100.0, 300.0, 1000.0] {
            let t = choose_t(2f64.sqrt(), 1.0, &Growth::LOG, p, 3).unwrap().t;
            assert!(t >= prev);
            prev = t;
        }
    }

    #[test]
    fn arcs_in_unit_measure() {
        let d = ArcDissection::hl(60.0, 3, ArcFamily::HlN).unwrap();
        let u = d.arcs_in_unit().unwrap();
        let (w, q) = d.hl_shape().unwrap();
        let mut expect = 0.0;
        for qq in 1..=q {
            let phi = (1..=qq).filter(|&a| gcd(a, qq) == 1).count() as f64;
            expect += phi * 2.0 * w / qq as f64;
        }
        assert!((u.measure() - expect).abs() < 1e-12);
    }

    #[test]
    fn single_point_profile() {
        let form = DiagonalForm::new(3, vec![1.0, 2f64.sqrt()]).unwrap();
        let prof = minor_sup_profile(&form, &dh(64.0), 1).unwrap();
        assert_eq!(prof.rows.len(), 1);
        assert!(prof.sup_ratio <= 1.0);
    }
}
