//! Time windows and the graded quadrature used inside each window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Largest window length T with `L η₁ T^{1-γ/2} / (1-γ/2) ≤ 1/2`.
pub fn window_length_bound(lipschitz: f64, eta1: f64, gamma: f64) -> f64 {
    if lipschitz <= 0.0 {
        return f64::INFINITY;
    }
    let e = 1.0 - gamma / 2.0;
    (0.5 * e / (lipschitz * eta1)).powf(1.0 / e)
}

/// Grading exponent 2/(2-γ) toward the singular endpoint.
pub fn grading_exponent(gamma: f64) -> f64 {
    2.0 / (2.0 - gamma)
}

/// Window boundaries aligned to the output times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeMesh {
    output_times: Vec<f64>,
    windows: Vec<(f64, f64)>,
    nodes_per_window: usize,
    grading: f64,
}

impl TimeMesh {
    /// Splits each interval between consecutive output times into equal
    /// windows no longer than `max_window`.
    pub fn uniform(output_times: &[f64], max_window: f64, nodes_per_window: usize, gamma: f64) -> Result<Self> {
        check_times(output_times)?;
        if !(max_window > 0.0) {
            return Err(Error::Parameter(format!(
                "window length must be positive (got {max_window})"
            )));
        }
        if nodes_per_window == 0 {
            return Err(Error::Parameter("a window needs at least one quadrature node".into()));
        }
        let mut windows = Vec::new();
        let mut start = 0.0;
        for &end in output_times {
            let len = end - start;
            let count = if max_window.is_finite() {
                (len / max_window).ceil().max(1.0) as usize
            } else {
                1
            };
            for k in 0..count {
                let a = start + len * k as f64 / count as f64;
                let b = if k + 1 == count {
                    end
                } else {
                    start + len * (k + 1) as f64 / count as f64
                };
                windows.push((a, b));
            }
            start = end;
        }
        Ok(Self {
            output_times: output_times.to_vec(),
            windows,
            nodes_per_window,
            grading: grading_exponent(gamma),
        })
    }

    pub fn output_times(&self) -> &[f64] {
        &self.output_times
    }

    pub fn t_end(&self) -> f64 {
        *self.output_times.last().expect("mesh has output times")
    }

    pub fn windows(&self) -> &[(f64, f64)] {
        &self.windows
    }

    pub fn nodes_per_window(&self) -> usize {
        self.nodes_per_window
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// Quadrature nodes and weights of window `w`, ascending in time.
    pub fn window_nodes(&self, w: usize) -> Vec<(f64, f64)> {
        let (a, b) = self.windows[w];
        end_rule(self.nodes_per_window, self.grading)
            .into_iter()
            .map(|node| (a + (b - a) * node.offset, (b - a) * node.weight))
            .collect()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Parameter("at least one output time is required".into()));
    }
    let mut prev = 0.0;
    for &t in times {
        if !(t > prev) || !t.is_finite() {
            return Err(Error::Parameter(format!(
                "output times must be positive and strictly increasing (got {times:?})"
            )));
        }
        prev = t;
    }
    Ok(())
}

/// Node of the graded end rule on the unit window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndNode {
    /// θ = 1 - s^p.
    pub offset: f64,
    /// 1 - θ = s^p, kept separately to avoid cancellation.
    pub remaining: f64,
    pub weight: f64,
}

/// Graded Gauss rule on the unit window for integrands singular at 1:
/// nodes θ = 1 - s^p, weights p s^{p-1} ω, ascending in θ.
pub fn end_rule(nodes: usize, p: f64) -> Vec<EndNode> {
    let rule = GaussLegendre::new(nodes);
    let mut out: Vec<EndNode> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            let s = 0.5 * (x + 1.0);
            let sp = s.powf(p);
            EndNode {
                offset: 1.0 - sp,
                remaining: sp,
                weight: 0.5 * w * p * s.powf(p - 1.0),
            }
        })
        .collect();
    out.sort_by(|a, b| a.offset.total_cmp(&b.offset));
    out
}
