//! Named, tolerance-aware checks of the analytic statements, each producing a
//! [`CheckReport`] with its worst margin and witnesses.
//!
//! A margin is signed: a check passes when `worst_margin ≥ -tolerance`.

mod analytic;
mod flow;
mod linear;
mod suite;

pub use analytic::{
    check_g_n_properties, check_gronwall, check_lambda_limit, check_positive_part_sweep, gronwall_extremal,
    GronwallInstance, GRONWALL_TOLERANCE,
};
pub use flow::{
    check_comparison, check_lower_bound, check_subsolution, check_uniqueness_contraction, uniqueness_envelope,
    uniqueness_gap, UniquenessRuns,
};
pub use linear::{
    check_heaviside_gap, check_max_at_origin, check_smoothing_exponent, RadialProfile, HEAVISIDE_TOLERANCE,
};
pub use suite::{run_suite, Suite};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fields::{make_grid, Grid};

/// Worst-case location with the values on both sides of the inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub location: String,
    pub values: BTreeMap<String, f64>,
}

impl Witness {
    pub fn new(location: impl Into<String>, values: &[(&str, f64)]) -> Self {
        Self {
            location: location.into(),
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    /// Non-finite margins serialize as `null`.
    pub worst_margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn new(
        name: &str,
        parameters: BTreeMap<String, serde_json::Value>,
        worst_margin: f64,
        tolerance: f64,
        witnesses: Vec<Witness>,
    ) -> Self {
        Self {
            name: name.to_string(),
            parameters,
            worst_margin,
            tolerance,
            pass: worst_margin >= -tolerance,
            witnesses,
            error: None,
        }
    }

    /// A failed report standing in for a check that returned an error.
    pub fn from_error(name: &str, err: &crate::Error) -> Self {
        Self {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            worst_margin: f64::NEG_INFINITY,
            tolerance: 0.0,
            pass: false,
            witnesses: Vec::new(),
            error: Some(err.to_string()),
        }
    }

    /// Folds reports of one check over several inputs into a single report.
    ///
    /// Margins are shifted by `tol_k - tol_min` so that the merged report
    /// passes exactly when every part does.
    pub fn merge(name: &str, parameters: BTreeMap<String, serde_json::Value>, parts: Vec<CheckReport>) -> Self {
        let tol = parts.iter().map(|r| r.tolerance).fold(f64::INFINITY, f64::min);
        let tol = if tol.is_finite() { tol } else { 0.0 };
        let mut margin = f64::INFINITY;
        let mut witnesses = Vec::new();
        for (k, part) in parts.into_iter().enumerate() {
            let shifted = part.worst_margin + part.tolerance - tol;
            if shifted.is_nan() || shifted < margin || (k == 0 && margin.is_infinite()) {
                margin = shifted;
                witnesses = part
                    .witnesses
                    .into_iter()
                    .map(|w| Witness {
                        location: format!("case {k}: {}", w.location),
                        values: w.values,
                    })
                    .collect();
            }
        }
        Self::new(name, parameters, margin, tol, witnesses)
    }

    /// `PASS|FAIL <name> margin=<m> tol=<t>`.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {} margin={:.6e} tol={:.3e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.worst_margin,
            self.tolerance
        )
    }
}

/// Builder for the parameter map of a report.
#[derive(Debug, Default)]
pub(crate) struct ParamMap(BTreeMap<String, serde_json::Value>);

impl ParamMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.0.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        );
        self
    }

    pub fn with_grid(self, grid: &Grid) -> Self {
        self.with("n_dim", grid.n_dim())
            .with("half_width", grid.half_width())
            .with("points_per_axis", grid.points_per_axis())
    }

    pub fn build(self) -> BTreeMap<String, serde_json::Value> {
        self.0
    }
}

/// Keeps the `capacity` entries with the smallest margins, ties by arrival.
#[derive(Debug)]
pub(crate) struct WorstCases {
    capacity: usize,
    entries: Vec<(f64, Witness)>,
}

impl WorstCases {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            entries: Vec::with_capacity(capacity + 1),
        }
    }

    /// Smallest margin seen so far, `+∞` when empty.
    pub fn worst(&self) -> f64 {
        self.entries.first().map_or(f64::INFINITY, |e| e.0)
    }

    pub fn would_keep(&self, margin: f64) -> bool {
        self.entries.len() < self.capacity || self.entries.last().is_some_and(|e| margin < e.0)
    }

    pub fn offer(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        if !self.would_keep(margin) && !margin.is_nan() {
            return;
        }
        let pos = self.entries.partition_point(|e| e.0 <= margin);
        self.entries.insert(pos, (margin, witness()));
        self.entries.truncate(self.capacity);
    }

    pub fn into_witnesses(self) -> Vec<Witness> {
        self.entries.into_iter().map(|e| e.1).collect()
    }
}

/// Grid used by checks that do not take one: L = 12 with 256, 64 or 32
/// points per axis in one, two or three dimensions.
pub fn default_grid(n_dim: usize) -> Result<Grid> {
    let m = match n_dim {
        1 => 256,
        2 => 64,
        _ => 32,
    };
    make_grid(n_dim, 12.0, m)
}

/// Distance from the box edge beyond which zero padding changes a heat flow
/// over time `t` by less than `tol` relative to its sup, 2√(t ln(1/tol)).
pub fn edge_margin(t: f64, tol: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    2.0 * (t * (1.0 / tol.min(0.5)).ln()).sqrt()
}

pub(crate) fn node_location(grid: &Grid, t: f64, index: usize) -> String {
    let p = grid.node(index);
    format!("t={t} node={index} x={:?}", &p[..grid.n_dim()])
}
