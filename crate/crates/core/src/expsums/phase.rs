use num_complex::Complex64;

/// `frac(c·n)` in `[0, 1)`, exact up to the final rounding, with `c` taken as its exact binary value.
pub fn frac_mul(c: f64, n: i128) -> f64 {
    if c == 0.0 || n == 0 || !c.is_finite() {
        return 0.0;
    }
    let (m, e) = decompose(c);
    if e >= 0 {
        return 0.0;
    }
    let e = (-e) as u32;
    if e >= 190 {
        return (c * n as f64).rem_euclid(1.0);
    }
    let lo = (n as u128 & u64::MAX as u128) as i128;
    let hi = n >> 64;
    let mut f = frac_pow2(m as i128 * lo, e);
    if e > 64 {
        f += frac_pow2(m as i128 * hi, e - 64);
    }
    let f = f.rem_euclid(1.0);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `c = m·2^e` with `|m| < 2^53`.
fn decompose(c: f64) -> (i64, i32) {
    let bits = c.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    if exp == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1i64 << 52)), exp - 1075)
    }
}

/// `frac(a·2^{−e})`.
fn frac_pow2(a: i128, e: u32) -> f64 {
    if e > 128 {
        return (a as f64 * 2f64.powi(-(e as i32))).rem_euclid(1.0);
    }
    let r = if e == 128 {
        a as u128
    } else {
        (a as u128) & ((1u128 << e) - 1)
    };
    r as f64 * 2f64.powi(-(e as i32))
}

/// `e(x) = exp(2πix)`.
pub fn e_frac(x: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    Complex64::new(c, s)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier_add(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier_add(&mut self.re, z.re);
        neumaier_add(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}
