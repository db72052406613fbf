//! The experiment catalogue.
//!
//! Every experiment emits long-format rows `(replica, statistic, value)`, a
//! summary, and range checks whose bounds come from its parameters. Replica
//! `r` draws from `split_seed(seed, r)`; an experiment with several sample
//! families gives family `f` the seed `split_seed(split_seed(seed, r), f)`.
//! Results are collected in replica order, so they do not depend on the
//! number of threads.

mod continuum;
mod cycles;
mod dimension;
mod process;

use std::collections::BTreeMap;

use mstlab_core::rng::split_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ParamSpec, Params};
use crate::{LabError, Result};

pub use cycles::{random_integer_rgraph, split_at_vertex};

pub struct Experiment {
    pub name: &'static str,
    /// The statement being checked.
    pub claim: &'static str,
    pub default_replicas: usize,
    pub params: &'static [ParamSpec],
    /// The statistics written to `results.csv`.
    pub columns: &'static [&'static str],
    run: fn(&Ctx) -> Result<Outcome>,
}

impl Experiment {
    pub fn execute(&self, ctx: &Ctx) -> Result<Outcome> {
        (self.run)(ctx)
    }
}

pub fn catalogue() -> Vec<&'static Experiment> {
    vec![
        &process::MST_EXACTNESS,
        &process::COUPLING_IDENTITY,
        &process::FRIEZE_ZETA3,
        &process::JANSON_VARIANCE,
        &process::LUCZAK_MASS,
        &continuum::SURPLUS_LAW,
        &cycles::CYCLE_BREAK_TV,
        &cycles::CUT_VS_MST,
        &continuum::EXCURSION_TREE,
        &continuum::CONTINUUM_MASS,
        &continuum::CRT_THETA,
        &continuum::CONSTRUCTION_CONSISTENCY,
        &dimension::DIMENSION_CONTRAST,
        &cycles::COVERING_SANDWICH,
        &cycles::KERNEL_STRUCTURE,
        &continuum::DISCRETE_VS_CONTINUUM,
    ]
}

pub fn find(name: &str) -> Result<&'static Experiment> {
    catalogue()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| LabError::UnknownExperiment(name.to_string()))
}

/// What an experiment sees.
pub struct Ctx {
    pub params: Params,
    pub seed: u64,
    pub replicas: usize,
}

impl Ctx {
    pub fn replica_seed(&self, r: usize) -> u64 {
        split_seed(self.seed, r as u64)
    }

    /// Runs `f(replica, seed)` for `count` replicas of sample family `family`
    /// in parallel, returning the results in replica order.
    pub fn replicate<T, F>(&self, count: usize, family: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, u64) -> Result<T> + Sync,
    {
        (0..count).into_par_iter().map(|r| f(r, split_seed(self.replica_seed(r), family))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub replica: usize,
    pub statistic: String,
    pub value: f64,
}

/// A range check; a missing bound is unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// NaN is written as `null`.
    #[serde(deserialize_with = "null_as_nan")]
    pub observed: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub passed: bool,
}

fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl Check {
    fn new(name: &str, observed: f64, lower: Option<f64>, upper: Option<f64>) -> Self {
        let passed = lower.is_none_or(|l| observed >= l) && upper.is_none_or(|u| observed <= u) && !observed.is_nan();
        Check { name: name.to_string(), observed, lower, upper, passed }
    }

    /// `lower ≤ observed ≤ upper`.
    pub fn within(name: &str, observed: f64, lower: f64, upper: f64) -> Self {
        Self::new(name, observed, Some(lower), Some(upper))
    }

    /// `|observed - target| ≤ tol`.
    pub fn near(name: &str, observed: f64, target: f64, tol: f64) -> Self {
        Self::within(name, observed, target - tol, target + tol)
    }

    pub fn at_least(name: &str, observed: f64, lower: f64) -> Self {
        Self::new(name, observed, Some(lower), None)
    }

    pub fn at_most(name: &str, observed: f64, upper: f64) -> Self {
        Self::new(name, observed, None, Some(upper))
    }

    /// `[lower, upper]` with `-inf`/`inf` for missing bounds.
    pub fn range(&self) -> String {
        let l = self.lower.map_or("-inf".to_string(), |v| v.to_string());
        let u = self.upper.map_or("inf".to_string(), |v| v.to_string());
        format!("[{l}, {u}]")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn row(&mut self, replica: usize, statistic: &str, value: f64) {
        self.rows.push(Row { replica, statistic: statistic.to_string(), value });
    }

    /// One row per replica.
    pub fn column(&mut self, statistic: &str, values: &[f64]) {
        for (r, &v) in values.iter().enumerate() {
            self.row(r, statistic, v);
        }
    }

    pub fn stat(&mut self, key: &str, value: f64) {
        self.summary.insert(key.to_string(), value);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_params_declared() {
        let all = catalogue();
        assert_eq!(all.len(), 16);
        let mut names: Vec<&str> = all.iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 16);
        for e in all {
            assert!(Params::resolve(e.params, &BTreeMap::new()).is_ok(), "{}", e.name);
            assert!(!e.columns.is_empty());
        }
        assert!(find("nope").is_err());
    }

    #[test]
    fn check_bounds() {
        assert!(Check::near("x", 1.0, 1.01, 0.02).passed);
        assert!(!Check::near("x", 1.0, 1.03, 0.02).passed);
        assert!(Check::at_least("x", 5.0, 5.0).passed);
        assert!(!Check::at_most("x", f64::NAN, 1.0).passed);
        let c = Check::at_most("x", f64::NAN, 1.0);
        let back: Check = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert!(back.observed.is_nan() && back.lower.is_none() && back.upper == Some(1.0));
        assert_eq!(Check::at_least("y", 2.0, 1.5).range(), "[1.5, inf]");
    }
}
