use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A monotone growth function `x ↦ g(x) ≥ 1`, used for `L(P)`, `ψ(N)`, `U(P)`, `S(P)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "param")]
pub enum Growth {
    /// `max(1, c)`
    Constant(f64),
    /// `max(1, log x)^p`
    LogPower(f64),
    /// `max(1, log log max(x, 3))`
    LogLog,
    /// `max(1, x^a)`
    Power(f64),
    /// `+∞`; as a divisor it yields the degenerate threshold 0.
    Infinite,
}

impl Growth {
    pub const LOG: Growth = Growth::LogPower(1.0);

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Growth::Constant(c) => c.max(1.0),
            Growth::LogPower(p) => x.max(1.0).ln().max(1.0).powf(p),
            Growth::LogLog => x.max(3.0).ln().ln().max(1.0),
            Growth::Power(a) => x.max(1.0).powf(a).max(1.0),
            Growth::Infinite => f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Growth::Constant(c) => c.is_finite(),
            Growth::LogPower(p) => p.is_finite() && p >= 0.0,
            Growth::Power(a) => a.is_finite() && a >= 0.0,
            Growth::LogLog | Growth::Infinite => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation(
                "Growth",
                format!("{self} is not monotone nondecreasing"),
            ))
        }
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::Constant(c) => write!(f, "const:{c}"),
            Growth::LogPower(p) => write!(f, "log:{p}"),
            Growth::LogLog => write!(f, "loglog"),
            Growth::Power(a) => write!(f, "pow:{a}"),
            Growth::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Growth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::validation("Growth", format!("unrecognised growth function `{s}`"));
        let (name, arg) = match s.trim().split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |a: Option<&str>, default: Option<f64>| -> Result<f64> {
            match a {
                Some(a) => a.parse::<f64>().map_err(|_| bad()),
                None => default.ok_or_else(bad),
            }
        };
        let g = match name {
            "const" => Growth::Constant(num(arg, None)?),
            "log" => Growth::LogPower(num(arg, Some(1.0))?),
            "loglog" if arg.is_none() => Growth::LogLog,
            "pow" => Growth::Power(num(arg, None)?),
            "inf" if arg.is_none() => Growth::Infinite,
            _ => return Err(bad()),
        };
        g.validate()?;
        Ok(g)
    }
}

/// Tolerance `τ` with the growth handles that derive `δ = τ/L(T(P))`, `ψ` and `U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceParams {
    pub tau: f64,
    pub l: Growth,
    pub psi: Growth,
    pub u: Growth,
}

impl ToleranceParams {
    pub fn new(tau: f64) -> Result<Self> {
        let p = Self {
            tau,
            l: Growth::LOG,
            psi: Growth::LogLog,
            u: Growth::LOG,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::validation(
                "ToleranceParams",
                format!("τ = {} violates 0 < τ ≤ 1", self.tau),
            ));
        }
        self.l.validate()?;
        self.psi.validate()?;
        self.u.validate()
    }

    /// `L(P) = L(T(P))`, with `L` defaulting to `max(1, log T)`.
    pub fn l_of(&self, t_of_p: f64) -> f64 {
        self.l.eval(t_of_p)
    }

    /// `δ = τ·L(P)⁻¹`.
    pub fn delta(&self, t_of_p: f64) -> f64 {
        self.tau / self.l_of(t_of_p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for g in [
            Growth::Constant(2.5),
            Growth::LogPower(3.0),
            Growth::LogLog,
            Growth::Power(0.25),
            Growth::Infinite,
        ] {
            assert_eq!(g.to_string().parse::<Growth>().unwrap(), g);
        }
        assert_eq!("log".parse::<Growth>().unwrap(), Growth::LOG);
        assert!("log:-1".parse::<Growth>().is_err());
        assert!("cubic".parse::<Growth>().is_err());
    }

    #[test]
    fn at_least_one_and_monotone() {
        let xs: Vec<f64> = (0..200).map(|i| 1.1f64.powi(i)).collect();
        for g in [
            Growth::Constant(0.5),
            Growth::LOG,
            Growth::LogLog,
            Growth::Power(0.5),
            Growth::LogPower(2.0),
        ] {
            let mut prev = 0.0;
            for &x in &xs {
                let v = g.eval(x);
                assert!(v >= 1.0 && v >= prev, "{g} at {x}");
                prev = v;
            }
        }
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceParams::new(0.0).is_err());
        assert!(ToleranceParams::new(1.5).is_err());
        let t = ToleranceParams::new(1.0).unwrap();
        assert_eq!(t.delta(1.0), 1.0);
        assert!((t.delta(std::f64::consts::E.powi(4)) - 0.25).abs() < 1e-15);
        assert!(t.delta(1e9) <= t.tau);
    }
}
