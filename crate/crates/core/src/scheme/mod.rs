//! Constructive solution machinery: the regularized nonlinearity g_n,
//! positive-part calculus, the explicit sub-solution, the windowed Picard
//! solver and the monotone scheme in n.

mod duhamel;
mod mesh;
mod monotone;
mod solver;
mod trajectory;

pub use duhamel::duhamel_integral;
pub use mesh::{end_rule, grading_exponent, window_length_bound, EndNode, TimeMesh};
pub use monotone::{monotone_mesh, monotone_solve, monotone_solve_with, MONOTONICITY_SLACK};
pub use solver::{picard_solve, Solver};
pub use trajectory::{SchemeMetadata, Trajectory, WindowDiagnostic};

use serde::{Deserialize, Serialize};

use crate::constants::eta0;
use crate::error::{Error, Result};
use crate::fields::{GridFunction, Params};

/// g_n(r) = (2n)^{1-q} r for r ≤ 1/(2n), r^q above.
///
/// Evaluated as r^q·min(1, (2nr)^{1-q}), so g_n ≤ r^q and g_n ≤ g_{n+1}
/// hold exactly in floating point.
pub fn g_n(n: u64, q: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("g_n is defined for r ≥ 0 (got {r})")));
    }
    if n == 0 {
        return Err(Error::Domain("g_n needs n ≥ 1".into()));
    }
    Ok(g_n_unchecked(n, q, r))
}

#[inline]
fn g_n_unchecked(n: u64, q: f64, r: f64) -> f64 {
    r.powf(q) * (2.0 * n as f64 * r).powf(1.0 - q).min(1.0)
}

/// Lipschitz constant (1+q)(2n)^{1-q} of g_n.
pub fn g_n_lipschitz(n: u64, q: f64) -> f64 {
    (1.0 + q) * (2.0 * n as f64).powf(1.0 - q)
}

/// [x]₊ = max(x, 0).
pub fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}

/// The field [f - g]₊.
pub fn pointwise_positive_diff(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.zip_with(g, |a, b| positive_part(a - b))
}

/// Source term of the Duhamel equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nonlinearity {
    /// No source: the solution is the heat flow of the data.
    Zero,
    /// r^q.
    Power,
    /// g_n.
    Regularized { n: u64 },
}

impl Nonlinearity {
    #[inline]
    pub fn eval(&self, q: f64, r: f64) -> f64 {
        match *self {
            Nonlinearity::Zero => 0.0,
            Nonlinearity::Power => r.powf(q),
            Nonlinearity::Regularized { n } => g_n_unchecked(n, q, r),
        }
    }

    /// Lipschitz constant on [floor, ∞); `None` when it is unbounded.
    pub fn lipschitz(&self, q: f64, floor: f64) -> Option<f64> {
        match *self {
            Nonlinearity::Zero => Some(0.0),
            Nonlinearity::Regularized { n } => Some(g_n_lipschitz(n, q)),
            Nonlinearity::Power if floor > 0.0 => Some(q * floor.powf(q - 1.0)),
            Nonlinearity::Power => None,
        }
    }
}

impl std::fmt::Display for Nonlinearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Nonlinearity::Zero => write!(f, "zero"),
            Nonlinearity::Power => write!(f, "power"),
            Nonlinearity::Regularized { n } => write!(f, "g_{n}"),
        }
    }
}

/// Solver settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    /// Sup-norm update at which a window's Picard iteration stops.
    pub picard_tolerance: f64,
    pub max_iterations: usize,
    pub nodes_per_window: usize,
    /// Gauss points per panel of the interior Duhamel sums.
    pub panel_points: usize,
    pub n_schedule: Vec<u64>,
    /// Stop the n-schedule once the inter-n gap falls below `picard_tolerance`.
    pub early_stop: bool,
    pub tail_tolerance: f64,
    pub output_times: Vec<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            picard_tolerance: 1e-8,
            max_iterations: 200,
            nodes_per_window: 8,
            panel_points: 3,
            n_schedule: (0..=6).map(|k| 1u64 << k).collect(),
            early_stop: true,
            tail_tolerance: crate::semigroup::DEFAULT_TAIL_TOLERANCE,
            output_times: vec![1.0],
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.picard_tolerance > 0.0) {
            return Err(Error::Parameter("picard_tolerance must be positive".into()));
        }
        if self.max_iterations == 0 || self.nodes_per_window == 0 || self.panel_points == 0 {
            return Err(Error::Parameter(
                "max_iterations, nodes_per_window and panel_points must be positive".into(),
            ));
        }
        if !(self.tail_tolerance > 0.0) {
            return Err(Error::Parameter("tail_tolerance must be positive".into()));
        }
        if self.n_schedule.is_empty() || self.n_schedule[0] == 0 || self.n_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!(
                "n_schedule must be a strictly increasing list of positive integers (got {:?})",
                self.n_schedule
            )));
        }
        let mut prev = 0.0;
        for &t in &self.output_times {
            if !(t > prev) || !t.is_finite() {
                return Err(Error::Parameter(format!(
                    "output_times must be positive and strictly increasing (got {:?})",
                    self.output_times
                )));
            }
            prev = t;
        }
        if self.output_times.is_empty() {
            return Err(Error::Parameter("output_times must not be empty".into()));
        }
        Ok(())
    }

    pub fn t_end(&self) -> f64 {
        self.output_times.last().copied().unwrap_or(0.0)
    }

    /// Powers of two 1, 2, 4, …, 2^k.
    pub fn doubling_schedule(max_exponent: u32) -> Vec<u64> {
        (0..=max_exponent).map(|k| 1u64 << k).collect()
    }
}

/// w(x,t) = λ t^{1/(1-q)} (|x| + √t)^{-γ/(1-q)}, λ = [(1-q)η₀]^{1/(1-q)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subsolution {
    params: Params,
    lambda: f64,
}

impl Subsolution {
    pub fn new(params: &Params) -> Result<Self> {
        params.validate()?;
        let e0 = eta0(params.q, params.gamma, params.n_dim)?;
        Ok(Self {
            params: *params,
            lambda: ((1.0 - params.q) * e0).powf(1.0 / (1.0 - params.q)),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let q = self.params.q;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.lambda * t.powf(1.0 / (1.0 - q)) * (r + t.sqrt()).powf(-self.params.gamma / (1.0 - q))
    }

    /// sup_x w(x,t) = λ t^{(1-γ/2)/(1-q)}, attained at x = 0.
    pub fn sup(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.lambda * t.powf((1.0 - self.params.gamma / 2.0) / (1.0 - self.params.q))
    }
}

/// Convenience form of [`Subsolution::value`].
pub fn subsolution_w(params: &Params, x: &[f64], t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be non-negative (got {t})")));
    }
    Ok(Subsolution::new(params)?.value(x, t))
}
