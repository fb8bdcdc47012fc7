use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use crate::CliError;

/// Flat `key = value` configuration with `#` comments.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

fn bad(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {msg}"))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    n + 1
                )));
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(CliError::Config(format!(
                    "line {}: empty key or value",
                    n + 1
                )));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key `{k}`",
                    n + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, experiment: &str, allowed: &[&str]) -> Result<(), CliError> {
        let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
        for k in self.entries.keys() {
            if !allowed.contains(k.as_str()) {
                return Err(CliError::Config(format!(
                    "unknown key `{k}` for {experiment}; accepted keys: {}",
                    allowed.iter().copied().collect::<Vec<_>>().join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| bad(key, format!("`{v}`: {e}"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or_else(|| bad(key, "required"))
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key)
            .map(|v| parse_real(v).map_err(|e| bad(key, e)))
            .transpose()
    }

    pub fn require_real(&self, key: &str) -> Result<f64, CliError> {
        self.real(key)?.ok_or_else(|| bad(key, "required"))
    }

    pub fn real_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    pub fn reals(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|x| parse_real(x).map_err(|e| bad(key, e)))
                    .collect()
            })
            .transpose()
    }

    pub fn require_reals(&self, key: &str) -> Result<Vec<f64>, CliError> {
        self.reals(key)?.ok_or_else(|| bad(key, "required"))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        let x = x.trim();
                        x.parse::<T>().map_err(|e| bad(key, format!("`{x}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn require_list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.list(key)?.ok_or_else(|| bad(key, "required"))
    }
}

/// A decimal literal, `pi`, `e`, `sqrt(x)`, or `a/b` of those, with an optional sign.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('-') {
        return parse_real(rest).map(|v| -v);
    }
    if let Some((a, b)) = s.split_once('/') {
        return Ok(parse_real(a)? / parse_real(b)?);
    }
    let v = match s {
        "pi" => std::f64::consts::PI,
        "e" => std::f64::consts::E,
        _ => match s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            Some(inner) => parse_real(inner)?.sqrt(),
            None => s
                .parse::<f64>()
                .map_err(|_| format!("`{s}` is not a number"))?,
        },
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}
