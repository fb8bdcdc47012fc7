use serde::{Deserialize, Serialize};

/// A rational approximation `a/q` to a real `x` with residual `|qx − a|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalApprox {
    pub a: i64,
    pub q: u64,
    pub residual: f64,
}

impl RationalApprox {
    pub fn new(x: f64, a: i64, q: u64) -> Self {
        Self {
            a,
            q,
            residual: residual(x, a, q),
        }
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

/// `|qx − a|` with a single rounding.
pub fn residual(x: f64, a: i64, q: u64) -> f64 {
    (q as f64).mul_add(x, -(a as f64)).abs()
}

fn signed_residual(x: f64, a: i64, q: u64) -> f64 {
    (q as f64).mul_add(x, -(a as f64))
}

/// Continued-fraction convergents of `x` with denominator at most `q_max`, by increasing `q`.
///
/// Partial quotients are computed from the residuals of the two previous convergents,
/// which keeps them exact far longer than iterating `1/(x − ⌊x⌋)`. Expansion stops at
/// an exact hit, when the residual drops below `2⁻⁵²·max(1, |x|)`, or on overflow.
pub fn convergents(x: f64, q_max: u64) -> Vec<RationalApprox> {
    let mut out = Vec::new();
    if !x.is_finite() || q_max == 0 {
        return out;
    }
    let floor = x.floor();
    if floor.abs() >= 9.0e15 {
        return out;
    }
    let eps = f64::EPSILON * x.abs().max(1.0);
    let (mut p_prev, mut q_prev): (i64, u64) = (1, 0);
    let (mut p, mut q): (i64, u64) = (floor as i64, 1);
    let mut d_prev = -1.0f64;
    let mut d = signed_residual(x, p, q);
    out.push(RationalApprox {
        a: p,
        q,
        residual: d.abs(),
    });
    while d.abs() > eps {
        let ratio = (d_prev.abs() / d.abs()).floor();
        if !(ratio >= 1.0) || ratio >= 9.0e15 {
            break;
        }
        let a = ratio as u64;
        let p_next = (a as i64)
            .checked_mul(p)
            .and_then(|v| v.checked_add(p_prev));
        let q_next = a.checked_mul(q).and_then(|v| v.checked_add(q_prev));
        let (Some(p_next), Some(q_next)) = (p_next, q_next) else {
            break;
        };
        if q_next > q_max {
            break;
        }
        let d_next = signed_residual(x, p_next, q_next);
        if q_next == q {
            out.pop();
        }
        out.push(RationalApprox {
            a: p_next,
            q: q_next,
            residual: d_next.abs(),
        });
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        d_prev = d;
        d = d_next;
    }
    out
}

/// Brute-force best approximation with denominator exactly `q`: the integer `a` nearest to `qx`.
pub fn nearest_numerator(x: f64, q: u64) -> i64 {
    (q as f64 * x).round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2() {
        let c: Vec<(i64, u64)> = convergents(2f64.sqrt(), 12)
            .iter()
            .map(|r| (r.a, r.q))
            .collect();
        assert_eq!(c, vec![(1, 1), (3, 2), (7, 5), (17, 12)]);
    }

    #[test]
    fn rational_terminates() {
        let c = convergents(1.5, 1_000_000);
        let last = c.last().unwrap();
        assert_eq!((last.a, last.q), (3, 2));
        assert_eq!(last.residual, 0.0);
        assert_eq!(convergents(5.0, 10).len(), 1);
    }

    #[test]
    fn golden_ratio_fibonacci() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let c = convergents(phi, 10_000);
        let (mut f0, mut f1) = (1i64, 2i64);
        for r in &c {
            assert_eq!((r.a, r.q as i64), (f1, f0));
            let f2 = f0 + f1;
            f0 = f1;
            f1 = f2;
        }
        assert!(c.len() > 15);
    }

    #[test]
    fn negative_input() {
        let c = convergents(-2f64.sqrt(), 100);
        for r in &c {
            assert!(r.residual < 1.0 / r.q as f64);
        }
        // [−2; 1] = −1 shares q = 1 and is the closer of the two
        assert_eq!((c[0].a, c[0].q), (-1, 1));
    }

    #[test]
    fn best_approximation_brute_force() {
        for x in [
            2f64.sqrt(),
            std::f64::consts::PI,
            std::f64::consts::E,
            0.123456789,
        ] {
            for r in convergents(x, 5000) {
                for q in 1..r.q {
                    let a = nearest_numerator(x, q);
                    assert!(
                        residual(x, a, q) > r.residual,
                        "x={x} q={q} beats {}/{}",
                        r.a,
                        r.q
                    );
                }
            }
        }
    }
}
