//! Verification reports: named residual checks against tolerances.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::params::parse_number;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
}

impl Check {
    /// A residual check; non-finite maxima and empty sample sets fail.
    pub fn max(name: &str, residuals: impl IntoIterator<Item = f64>, tolerance: f64) -> Self {
        let mut max = 0.0f64;
        let mut samples = 0;
        let mut finite = true;
        for r in residuals {
            samples += 1;
            if r.is_finite() {
                max = max.max(r.abs());
            } else {
                finite = false;
            }
        }
        let max_residual = if finite { max } else { f64::NAN };
        Self {
            name: name.to_string(),
            max_residual,
            tolerance,
            pass: finite && samples > 0 && max <= tolerance,
            samples,
        }
    }

    /// A check that passes when the observed value exceeds a threshold
    /// (negative controls and strict positivity).
    pub fn above(name: &str, value: f64, threshold: f64, samples: usize) -> Self {
        Self {
            name: name.to_string(),
            max_residual: value,
            tolerance: threshold,
            pass: value.is_finite() && value > threshold,
            samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub surface: String,
    pub params: String,
    pub suite: String,
    pub checks: Vec<Check>,
    pub environment: BTreeMap<String, String>,
    /// Points excluded from sampling, with the reason.
    pub excluded: BTreeMap<String, usize>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: &str, surface: &str, params: &str) -> Self {
        Self {
            surface: surface.to_string(),
            params: params.to_string(),
            suite: suite.to_string(),
            checks: Vec::new(),
            environment: BTreeMap::new(),
            excluded: BTreeMap::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn env(&mut self, key: &str, value: impl ToString) {
        self.environment.insert(key.to_string(), value.to_string());
    }

    pub fn exclude(&mut self, reason: &str) {
        *self.excluded.entry(reason.to_string()).or_insert(0) += 1;
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: VerificationReport, prefix: &str) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.push(c);
        }
        for (k, v) in other.excluded {
            *self.excluded.entry(format!("{prefix}{k}")).or_insert(0) += v;
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeomError::spec(format!("invalid report: {e}")))
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Tolerance overrides by check name. Names that no check consults are
/// rejected by [`ToleranceSet::finish`].
#[derive(Debug, Clone, Default)]
pub struct ToleranceSet {
    values: BTreeMap<String, f64>,
    used: RefCell<BTreeSet<String>>,
}

impl ToleranceSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `NAME=VAL` items.
    pub fn parse<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut t = Self::new();
        for item in items {
            for part in item.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| GeomError::spec(format!("tolerance '{part}' is not NAME=VAL")))?;
                let v = parse_number(v).filter(|v| *v >= 0.0).ok_or_else(|| {
                    GeomError::spec(format!("tolerance {k}={v} is not a non-negative number"))
                })?;
                t.values.insert(k.trim().to_string(), v);
            }
        }
        Ok(t)
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    /// Overwrite with every value of `other`.
    pub fn extend(&mut self, other: &ToleranceSet) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), *v);
        }
    }

    pub fn get(&self, name: &str, default: f64) -> f64 {
        self.used.borrow_mut().insert(name.to_string());
        self.values.get(name).copied().unwrap_or(default)
    }

    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self.values.keys().filter(|k| !used.contains(*k)).map(String::as_str).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(GeomError::spec(format!("unknown tolerance name(s): {}", unknown.join(", "))))
        }
    }
}
