//! Reference densities and approximation ratios for random regular graphs.
//!
//! Approximation ratios are always taken against the density upper bound
//! `rho_ub(d)`. The other per-degree values (replica estimate, Monte Carlo,
//! belief propagation with reinforcement) are reference ratios used as
//! overlays in reports. At finite n a ratio above 1 is possible and is
//! reported as is.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::independent_set::IndependentSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("NoBoundForDegree: no density upper bound tabulated for d = {0}")]
    NoBoundForDegree(usize),
    #[error("invalid bounds row for d = {d}: {reason}")]
    InvalidRow { d: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsRow {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_ub: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ar_1rsb: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ar_mcmc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ar_bpr: Option<f64>,
}

impl BoundsRow {
    fn check(&self) -> Result<(), BoundsError> {
        let bad = |reason: String| BoundsError::InvalidRow { d: self.d, reason };
        if self.d < 3 {
            return Err(bad("degree must be >= 3".into()));
        }
        if let Some(r) = self.rho_ub {
            if !(r > 0.0 && r < 1.0) {
                return Err(bad(format!("rho_ub = {r} outside (0, 1)")));
            }
        }
        for (name, v) in [
            ("ar_1rsb", self.ar_1rsb),
            ("ar_mcmc", self.ar_mcmc),
            ("ar_bpr", self.ar_bpr),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v <= 1.0) {
                    return Err(bad(format!("{name} = {v} outside (0, 1]")));
                }
            }
        }
        Ok(())
    }

    /// Reference ratios present in this row, in display order.
    pub fn reference_lines(&self) -> Vec<(&'static str, f64)> {
        [
            ("ar_1rsb", self.ar_1rsb),
            ("ar_mcmc", self.ar_mcmc),
            ("ar_bpr", self.ar_bpr),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundsTable {
    rows: BTreeMap<usize, BoundsRow>,
}

impl BoundsTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces the row for `row.d`.
    pub fn insert(&mut self, row: BoundsRow) -> Result<(), BoundsError> {
        row.check()?;
        self.rows.insert(row.d, row);
        Ok(())
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = BoundsRow>) -> Result<(), BoundsError> {
        rows.into_iter().try_for_each(|r| self.insert(r))
    }

    pub fn get(&self, d: usize) -> Option<&BoundsRow> {
        self.rows.get(&d)
    }

    pub fn rho_ub(&self, d: usize) -> Option<f64> {
        self.get(d).and_then(|r| r.rho_ub)
    }

    pub fn rows(&self) -> impl Iterator<Item = &BoundsRow> {
        self.rows.values()
    }
}

/// Tabulated values for d = 3 and d = 5.
pub fn builtin_bounds() -> BoundsTable {
    let mut t = BoundsTable::new();
    t.insert(BoundsRow {
        d: 3,
        rho_ub: Some(0.45537),
        ar_1rsb: Some(0.990),
        ar_mcmc: Some(0.984),
        ar_bpr: Some(0.987),
    })
    .expect("builtin row is valid");
    t.insert(BoundsRow {
        d: 5,
        rho_ub: Some(0.38443),
        ar_1rsb: Some(0.987),
        ar_mcmc: Some(0.981),
        ar_bpr: Some(0.981),
    })
    .expect("builtin row is valid");
    t
}

/// `alpha / n`. Panics if `n == 0`.
pub fn density(s: &IndependentSet, n: usize) -> f64 {
    density_of(s.size(), n)
}

pub fn density_of(alpha: usize, n: usize) -> f64 {
    assert!(n > 0, "density of an empty graph");
    alpha as f64 / n as f64
}

pub fn approximation_ratio(
    s: &IndependentSet,
    n: usize,
    d: usize,
    table: &BoundsTable,
) -> Result<f64, BoundsError> {
    approximation_ratio_of(s.size(), n, d, table)
}

pub fn approximation_ratio_of(
    alpha: usize,
    n: usize,
    d: usize,
    table: &BoundsTable,
) -> Result<f64, BoundsError> {
    let ub = table.rho_ub(d).ok_or(BoundsError::NoBoundForDegree(d))?;
    Ok(density_of(alpha, n) / ub)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeDegreeBounds {
    /// `ln d / d`: best density reached by known efficient algorithms.
    pub rho_alg: f64,
    /// `2 ln d / d`: asymptotic maximum independent set density.
    pub rho_max: f64,
}

/// Leading-order large-d densities. Only asymptotically meaningful; at
/// moderate d they are indicative, not bounds.
pub fn large_d_bounds(d: usize) -> LargeDegreeBounds {
    assert!(d >= 2, "large-d formulas need d >= 2");
    let d = d as f64;
    LargeDegreeBounds {
        rho_alg: d.ln() / d,
        rho_max: 2.0 * d.ln() / d,
    }
}
