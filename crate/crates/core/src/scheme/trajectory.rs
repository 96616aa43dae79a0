use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{Nonlinearity, SolveConfig};
use crate::error::{Error, Result};
use crate::fields::{Grid, GridFunction, Params};

/// Picard record of one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowDiagnostic {
    pub start: f64,
    pub end: f64,
    pub iterations: usize,
    pub residual: f64,
    /// Largest ratio of consecutive Picard updates.
    pub contraction_estimate: f64,
}

/// Scheme-level record attached to a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeMetadata {
    pub nonlinearity: Nonlinearity,
    pub windows: usize,
    pub nodes_per_window: usize,
    /// n values actually run by the monotone scheme (empty for a single solve).
    pub n_schedule_used: Vec<u64>,
    /// sup-norm gaps between consecutive n runs.
    pub n_gaps: Vec<f64>,
    /// min over nodes and times of u_{n_{k-1}} - u_{n_k}.
    pub monotonicity_margins: Vec<f64>,
}

/// Snapshots of a solution with solver diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: Params,
    pub times: Vec<f64>,
    pub snapshots: Vec<GridFunction>,
    pub diagnostics: Vec<WindowDiagnostic>,
    pub metadata: SchemeMetadata,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid {
        self.snapshots[0].grid()
    }

    /// Snapshot at an output time, matched to 1e-12.
    pub fn at(&self, t: f64) -> Option<&GridFunction> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
            .map(|k| &self.snapshots[k])
    }

    pub fn final_snapshot(&self) -> &GridFunction {
        self.snapshots.last().expect("a trajectory has at least one snapshot")
    }

    pub fn max_residual(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.residual).fold(0.0, f64::max)
    }

    /// Last inter-n gap, the convergence indicator of the monotone scheme.
    pub fn n_gap(&self) -> Option<f64> {
        self.metadata.n_gaps.last().copied()
    }

    /// CSV with header `t,node_index,coord_1..coord_N,u`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let grid = *self.grid();
        let n = grid.n_dim();
        let mut header = String::from("t,node_index");
        for k in 1..=n {
            header.push_str(&format!(",coord_{k}"));
        }
        header.push_str(",u\n");
        out.write_all(header.as_bytes())?;
        let mut line = String::new();
        for (t, snap) in self.times.iter().zip(&self.snapshots) {
            for (i, u) in snap.values().iter().enumerate() {
                line.clear();
                line.push_str(&format!("{t},{i}"));
                let p = grid.node(i);
                for c in p.iter().take(n) {
                    line.push_str(&format!(",{c}"));
                }
                line.push_str(&format!(",{u}\n"));
                out.write_all(line.as_bytes())?;
            }
        }
        Ok(())
    }

    /// Sidecar metadata: parameters, grid, configuration and diagnostics.
    pub fn metadata_json(&self, config: &SolveConfig) -> Result<serde_json::Value> {
        let value = serde_json::json!({
            "params": self.params,
            "grid": self.grid(),
            "config": config,
            "times": self.times,
            "scheme": self.metadata,
            "max_residual": self.max_residual(),
            "diagnostics": self.diagnostics,
        });
        Ok(value)
    }

    pub fn check_non_negative(&self) -> Result<()> {
        for (t, s) in self.times.iter().zip(&self.snapshots) {
            if let Some((i, &v)) = s.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
                return Err(Error::Scheme(format!("negative value {v} at node {i}, t = {t}")));
            }
        }
        Ok(())
    }
}
