//! Quadrature primitives: Gauss–Legendre rules, a 21-point Gauss–Kronrod pair with
//! adaptive bisection, and the sine integral.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, 0.0f64);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Nodes of the 21-point Kronrod extension; odd indices are the 10 Gauss nodes.
#[allow(clippy::excessive_precision)]
pub const XGK21: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
pub const WGK21: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208427630921,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[allow(clippy::excessive_precision)]
pub const WG10: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// The 21 Kronrod nodes on `[a, b]` with Kronrod and embedded Gauss weights.
pub fn gk21_panel(a: f64, b: f64) -> ([f64; 21], [f64; 21], [f64; 21]) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [0.0; 21];
    let mut wk = [0.0; 21];
    let mut wg = [0.0; 21];
    for j in 0..10 {
        x[j] = c - h * XGK21[j];
        x[20 - j] = c + h * XGK21[j];
        wk[j] = h * WGK21[j];
        wk[20 - j] = h * WGK21[j];
        if j % 2 == 1 {
            wg[j] = h * WG10[j / 2];
            wg[20 - j] = h * WG10[j / 2];
        }
    }
    x[10] = c;
    wk[10] = h * WGK21[10];
    (x, wk, wg)
}

/// Kronrod estimate and `|Kronrod − Gauss|` on one panel.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (x, wk, wg) = gk21_panel(a, b);
    let mut k = 0.0;
    let mut g = 0.0;
    for i in 0..21 {
        let v = f(x[i]);
        k += wk[i] * v;
        g += wg[i] * v;
    }
    (k, (k - g).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub panels: usize,
}

/// Adaptive Gauss–Kronrod over `[a, b]`, starting from `initial` equal panels and bisecting
/// any panel whose error exceeds its share of `tol`.
pub fn adaptive<F: Fn(f64) -> f64>(
    op: &'static str,
    f: &F,
    a: f64,
    b: f64,
    initial: usize,
    tol: f64,
    max_panels: usize,
) -> Result<QuadOutcome> {
    let initial = initial.max(1);
    let width = b - a;
    let mut stack: Vec<(f64, f64, u32)> = (0..initial)
        .rev()
        .map(|i| {
            let lo = a + width * i as f64 / initial as f64;
            let hi = a + width * (i + 1) as f64 / initial as f64;
            (lo, hi, 0)
        })
        .collect();
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    let mut panels = 0usize;
    let mut evaluations = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk21(f, lo, hi);
        evaluations += 21;
        let share = tol * (hi - lo) / width;
        if e > share && depth < 40 && panels + stack.len() < max_panels {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
            continue;
        }
        let t = value + v;
        comp += if value.abs() >= v.abs() {
            (value - t) + v
        } else {
            (v - t) + value
        };
        value = t;
        error += e;
        panels += 1;
    }
    if !(error <= tol) || !value.is_finite() {
        return Err(Error::numeric(
            op,
            format!("quadrature on [{a}, {b}] did not converge: error estimate {error:.3e} > {tol:.3e} after {panels} panels"),
        ));
    }
    Ok(QuadOutcome {
        value: value + comp,
        error,
        evaluations,
        panels,
    })
}

/// `(Si(x), π/2 − Si(x))` for `x ≥ 0`; the complement is computed without cancellation.
pub fn sine_integral(x: f64) -> (f64, f64) {
    assert!(x >= 0.0);
    if x == 0.0 {
        return (0.0, FRAC_PI_2);
    }
    if x < 2.0 {
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        let mut n = 1u32;
        loop {
            term *= -x2 / ((2 * n) as f64 * (2 * n + 1) as f64);
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() <= 1e-18 * sum.abs() || n > 100 {
                break;
            }
            n += 1;
        }
        (sum, FRAC_PI_2 - sum)
    } else {
        // modified Lentz evaluation of E1(ix)
        let tiny = 1e-300;
        let mut b = (1.0, x);
        let mut c = (1.0 / tiny, 0.0);
        let mut d = cinv(b);
        let mut h = d;
        let mut i = 2u32;
        loop {
            let a = -((i - 1) as f64).powi(2);
            b = (b.0 + 2.0, b.1);
            d = cinv(cadd(cscale(d, a), b));
            c = cadd(b, cscale(cinv(c), a));
            let del = cmul(c, d);
            h = cmul(h, del);
            if (del.0 - 1.0).abs() + del.1.abs() < 1e-16 || i > 100_000 {
                break;
            }
            i += 1;
        }
        let (s, co) = x.sin_cos();
        h = cmul(h, (co, -s));
        (FRAC_PI_2 + h.1, -h.1)
    }
}

fn cadd(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}

fn cscale(a: (f64, f64), s: f64) -> (f64, f64) {
    (a.0 * s, a.1 * s)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cinv(a: (f64, f64)) -> (f64, f64) {
    let n = a.0 * a.0 + a.1 * a.1;
    (a.0 / n, -a.1 / n)
}

/// `∫_A^∞ cos(ωα) α⁻² dα` for `A > 0`.
pub fn cos_over_square_tail(omega: f64, a: f64) -> f64 {
    let w = omega.abs();
    (w * a).cos() / a - w * sine_integral(w * a).1
}
