//! Run configuration.
//!
//! A config file is plain `key = value` lines. Blank lines and anything after
//! `#` are ignored. The keys `seed`, `replicas` and `out` are reserved; every
//! other key must be a parameter declared by the experiment.
//!
//! ```text
//! # frieze.cfg
//! n = 2000
//! tolerance = 0.02
//! replicas = 200
//! seed = 7
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::{LabError, Result};

/// Raw `key = value` pairs in file order (later keys win).
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| LabError::Config(format!("line {}: expected `key = value`, got {raw:?}", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(LabError::Config(format!("line {}: empty key or value", i + 1)));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// A declared experiment parameter and its default.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

pub(crate) const fn param(key: &'static str, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec { key, default, help }
}

/// Resolved parameter values, all stored as numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    /// Defaults overridden by `given`; unknown keys and non-numbers are errors.
    pub fn resolve(specs: &[ParamSpec], given: &BTreeMap<String, String>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for s in specs {
            let raw = given.get(s.key).map(String::as_str).unwrap_or(s.default);
            let v: f64 = raw
                .parse()
                .map_err(|_| LabError::Config(format!("parameter {} must be a number, got {raw:?}", s.key)))?;
            if !v.is_finite() {
                return Err(LabError::Config(format!("parameter {} must be finite", s.key)));
            }
            values.insert(s.key.to_string(), v);
        }
        if let Some(k) = given.keys().find(|k| !values.contains_key(*k)) {
            return Err(LabError::Config(format!("unknown parameter {k:?}")));
        }
        Ok(Params(values))
    }

    pub fn f64(&self, key: &str) -> f64 {
        *self.0.get(key).unwrap_or_else(|| panic!("parameter {key} is not declared"))
    }

    /// A nonnegative integer parameter.
    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.f64(key);
        if v < 0.0 || v.fract() != 0.0 {
            return Err(LabError::Config(format!("parameter {key} must be a nonnegative integer, got {v}")));
        }
        Ok(v as usize)
    }

    pub fn positive(&self, key: &str) -> Result<f64> {
        let v = self.f64(key);
        if v <= 0.0 {
            return Err(LabError::Config(format!("parameter {key} must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.0.iter()
    }
}

/// What to run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub replicas: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(name: &str) -> Self {
        ExperimentSpec { name: name.to_string(), params: BTreeMap::new(), seed: 1, replicas: None, out: None }
    }

    /// Splits the reserved keys out of a parsed config file.
    pub fn from_config(name: &str, mut kv: BTreeMap<String, String>) -> Result<Self> {
        let mut spec = ExperimentSpec::new(name);
        if let Some(s) = kv.remove("seed") {
            spec.seed = s.parse().map_err(|_| LabError::Config(format!("seed must be a u64, got {s:?}")))?;
        }
        if let Some(r) = kv.remove("replicas") {
            spec.replicas =
                Some(r.parse().map_err(|_| LabError::Config(format!("replicas must be an integer, got {r:?}")))?);
        }
        spec.out = kv.remove("out").map(PathBuf::from);
        spec.params = kv;
        Ok(spec)
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn replicas(mut self, replicas: usize) -> Self {
        self.replicas = Some(replicas);
        self
    }
}
