use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{GeomError, Result};

/// Key/value parameter record as written on the command line (`a=1,k=2`) or in
/// a config table. Lookups are tracked so that unknown keys can be rejected.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `k=v,k2=v2`. Values may not contain commas.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Params::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| GeomError::spec(format!("parameter '{item}' is not key=value")))?;
            p.insert(k.trim(), v.trim());
        }
        Ok(p)
    }

    pub fn from_pairs<K: ToString, V: ToString>(pairs: &[(K, V)]) -> Self {
        let mut p = Params::new();
        for (k, v) in pairs {
            p.insert(&k.to_string(), &v.to_string());
        }
        p
    }

    pub fn insert(&mut self, key: &str, value: &str) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.insert(key, &value.to_string());
        self
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_number(v)
                .ok_or_else(|| GeomError::spec(format!("parameter {key}={v} is not a number"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| GeomError::spec(format!("parameter {key}={v} is not a non-negative integer"))),
        }
    }

    pub fn i64_or(&self, key: &str, default: i64) -> Result<i64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<i64>()
                .map_err(|_| GeomError::spec(format!("parameter {key}={v} is not an integer"))),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }

    /// Semicolon separated list of numbers, e.g. `a=0.3;0.2`.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    parse_number(s.trim())
                        .ok_or_else(|| GeomError::spec(format!("parameter {key} entry '{s}' is not a number")))
                })
                .collect(),
        }
    }

    /// Error on any key that was never looked up.
    pub fn finish(&self, context: &str) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self.values.keys().filter(|k| !used.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(GeomError::spec(format!(
                "unknown parameter(s) for {context}: {}",
                unknown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            )))
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.values.iter()
    }

    /// Canonical `k=v,...` form in key order.
    pub fn canonical(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Numbers may be written as plain decimals or with a `pi` factor
/// (`pi`, `pi/4`, `3pi/4`, `0.5*pi`).
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Some(x);
    }
    let pi = std::f64::consts::PI;
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim().to_string(), b.trim().parse::<f64>().ok()?),
        None => (t.clone(), 1.0),
    };
    let num = num.trim_end_matches('*');
    let coeff = if num == "pi" {
        1.0
    } else {
        let c = num.strip_suffix("pi")?;
        let c = c.trim_end_matches('*').trim();
        if c == "-" {
            -1.0
        } else {
            c.parse::<f64>().ok()?
        }
    };
    Some(coeff * pi / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_rejects_unknown() {
        let p = Params::parse("a=1, k=2.5").unwrap();
        assert_eq!(p.f64_or("a", 0.0).unwrap(), 1.0);
        assert_eq!(p.f64_or("k", 0.0).unwrap(), 2.5);
        assert!(p.finish("test").is_ok());
        let q = Params::parse("a=1,zz=3").unwrap();
        q.f64_or("a", 0.0).unwrap();
        assert!(q.finish("test").is_err());
    }

    #[test]
    fn parses_pi_multiples() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_number("pi/4"), Some(pi / 4.0));
        assert_eq!(parse_number("3pi/4"), Some(3.0 * pi / 4.0));
        assert_eq!(parse_number("0.5*pi"), Some(0.5 * pi));
        assert_eq!(parse_number("-pi"), Some(-pi));
        assert_eq!(parse_number("x"), None);
    }

    #[test]
    fn malformed_pair_is_spec_error() {
        assert!(Params::parse("a").unwrap_err().is_spec());
    }
}
