//! Checks on the nonlinear flow: the sub-solution inequality, the lower
//! bound of computed solutions, comparison and the uniqueness mechanism.

use super::{default_grid, edge_margin, node_location, CheckReport, ParamMap, Witness, WorstCases};
use crate::constants::{eta1, lambda_gamma};
use crate::error::{Error, Result};
use crate::fields::{weight_field, Grid, GridFunction, Params};
use crate::initial::InitialData;
use crate::scheme::{duhamel_integral, monotone_solve, SolveConfig, Subsolution, Trajectory};

/// Gauss nodes per half of the Duhamel quadrature in [`check_subsolution`].
const DUHAMEL_NODES: usize = 40;

/// w(t) ≤ ∫_0^t S_γ(t-σ) w^q(σ) dσ at interior nodes; margin = integral - w.
///
/// Interior means at least 2√(t ln(1/tol)) from the box edge, where zero
/// padding of the far field is below `tol`.
pub fn check_subsolution(params: &Params, grid: &Grid, times: &[f64], tol: f64) -> Result<CheckReport> {
    params.validate()?;
    if times.is_empty() || times.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::Parameter(format!("times must be non-negative (got {times:?})")));
    }
    if let Some(t_min) = times.iter().copied().filter(|&t| t > 0.0).reduce(f64::min) {
        if grid.spacing() > t_min.sqrt() {
            return Err(Error::Parameter(format!(
                "grid spacing {} does not resolve √t = {} at t = {t_min}",
                grid.spacing(),
                t_min.sqrt()
            )));
        }
    }
    let w = Subsolution::new(params)?;
    let weight = weight_field(grid, params.gamma)?;
    let n = grid.n_dim();
    let points: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.node(i)[..n].to_vec()).collect();
    let q = params.q;
    let mut worst = WorstCases::new(3);
    for &t in times {
        if t == 0.0 {
            worst.offer(0.0, || Witness::new("t=0", &[("w", 0.0), ("integral", 0.0)]));
            continue;
        }
        let integral = duhamel_integral(&weight, params.gamma, t, DUHAMEL_NODES, 1e-12, |s| {
            points.iter().map(|x| w.value(x, s).powf(q)).collect()
        })?;
        for i in grid.interior_indices(edge_margin(t, tol)) {
            let lhs = w.value(&points[i], t);
            let rhs = integral.values()[i];
            let margin = rhs - lhs;
            if worst.would_keep(margin) {
                worst.offer(margin, || {
                    Witness::new(node_location(grid, t, i), &[("w", lhs), ("integral", rhs)])
                });
            }
        }
    }
    let report_params = ParamMap::new()
        .with("q", params.q)
        .with("gamma", params.gamma)
        .with("times", times)
        .with_grid(grid)
        .with("duhamel_nodes", DUHAMEL_NODES)
        .build();
    Ok(CheckReport::new(
        "subsolution",
        report_params,
        worst.worst(),
        tol,
        worst.into_witnesses(),
    ))
}

/// Every snapshot dominates the sub-solution w at interior nodes.
pub fn check_lower_bound(traj: &Trajectory, params: &Params, tol: f64) -> Result<CheckReport> {
    let w = Subsolution::new(params)?;
    let grid = *traj.grid();
    let n = grid.n_dim();
    let mut worst = WorstCases::new(3);
    for (&t, u) in traj.times.iter().zip(&traj.snapshots) {
        for i in grid.interior_indices(edge_margin(t, tol)) {
            let p = grid.node(i);
            let lower = w.value(&p[..n], t);
            let v = u.values()[i];
            let margin = v - lower;
            if worst.would_keep(margin) {
                worst.offer(margin, || {
                    Witness::new(node_location(&grid, t, i), &[("u", v), ("w", lower)])
                });
            }
        }
    }
    let report_params = ParamMap::new()
        .with("q", params.q)
        .with("gamma", params.gamma)
        .with("times", &traj.times)
        .with_grid(&grid)
        .with("n_schedule_used", &traj.metadata.n_schedule_used)
        .build();
    Ok(CheckReport::new(
        "lower_bound",
        report_params,
        worst.worst(),
        tol,
        worst.into_witnesses(),
    ))
}

/// Solutions from ordered data stay ordered at every node and snapshot.
///
/// Both runs use the full n-schedule without early stop, so the two final
/// iterates share n.
pub fn check_comparison(
    u0: &GridFunction,
    v0: &GridFunction,
    params: &Params,
    config: &SolveConfig,
    tol: f64,
) -> Result<CheckReport> {
    u0.check_same_grid(v0)?;
    if !v0.is_non_negative() {
        return Err(Error::Input("v0 must be non-negative".into()));
    }
    if let Some(i) = u0.values().iter().zip(v0.values()).position(|(a, b)| a < b) {
        return Err(Error::Input(format!(
            "u0 must dominate v0; at node {i} u0 = {} < v0 = {}",
            u0.values()[i],
            v0.values()[i]
        )));
    }
    let config = SolveConfig {
        early_stop: false,
        ..config.clone()
    };
    let u = monotone_solve(u0, params, &config)?;
    let v = monotone_solve(v0, params, &config)?;
    let grid = *u0.grid();
    let mut worst = WorstCases::new(3);
    for ((&t, a), b) in u.times.iter().zip(&u.snapshots).zip(&v.snapshots) {
        for (i, (&x, &y)) in a.values().iter().zip(b.values()).enumerate() {
            let margin = x - y;
            if worst.would_keep(margin) {
                worst.offer(margin, || {
                    Witness::new(node_location(&grid, t, i), &[("u", x), ("v", y)])
                });
            }
        }
    }
    let report_params = ParamMap::new()
        .with("q", params.q)
        .with("gamma", params.gamma)
        .with_grid(&grid)
        .with("n_schedule", &config.n_schedule)
        .with("output_times", &config.output_times)
        .build();
    Ok(CheckReport::new(
        "comparison",
        report_params,
        worst.worst(),
        tol,
        worst.into_witnesses(),
    ))
}

/// Two discretizations of the same monotone scheme: same final n, different
/// intermediate schedule and quadrature nodes per window.
#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessRuns {
    pub first: SolveConfig,
    pub second: SolveConfig,
}

impl UniquenessRuns {
    /// `base` and a copy with four more nodes per window and the schedule
    /// 1, 3, 9, … up to the same largest n; early stop is off in both.
    pub fn perturbed(base: &SolveConfig) -> Self {
        let first = SolveConfig {
            early_stop: false,
            ..base.clone()
        };
        let n_max = *base.n_schedule.last().unwrap_or(&1);
        let mut schedule: Vec<u64> = std::iter::successors(Some(1u64), |&n| Some(n * 3))
            .take_while(|&n| n < n_max)
            .collect();
        schedule.push(n_max);
        let second = SolveConfig {
            nodes_per_window: base.nodes_per_window + 4,
            n_schedule: schedule,
            ..first.clone()
        };
        Self { first, second }
    }
}

/// sup over nodes of |u - v| at the last output time of the two runs.
pub fn uniqueness_gap(u0: &GridFunction, params: &Params, runs: &UniquenessRuns) -> Result<f64> {
    let a = monotone_solve(u0, params, &runs.first)?;
    let b = monotone_solve(u0, params, &runs.second)?;
    Ok(a.final_snapshot()
        .values()
        .iter()
        .zip(b.final_snapshot().values())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
}

/// (2η₁/(2-γ) t^{1-γ/2})^{1/(1-q)}, the a-priori bound on a difference of
/// two solutions.
pub fn uniqueness_envelope(q: f64, gamma: f64, n_dim: usize, t: f64) -> Result<f64> {
    let e1 = eta1(gamma, n_dim)?;
    Ok((2.0 * e1 / (2.0 - gamma) * t.powf(1.0 - gamma / 2.0)).powf(1.0 / (1.0 - q)))
}

/// Two perturbed discretizations from bump data coalesce: their sup gap at
/// `t_end` is at most Λ³ times the a-priori envelope, within `tol`.
///
/// This exercises the contraction mechanism on discretizations of one
/// problem; it does not construct a second genuine solution.
pub fn check_uniqueness_contraction(q: f64, gamma: f64, n_dim: usize, t_end: f64, tol: f64) -> Result<CheckReport> {
    let params = Params::new(n_dim, q, gamma)?;
    let lambda = lambda_gamma(q, gamma, n_dim)?;
    if !(lambda < 1.0) {
        return Err(Error::Parameter(format!(
            "the contraction check needs Λ(γ) < 1, got Λ({gamma}) = {lambda}; γ lies at or above γ*"
        )));
    }
    if !(t_end > 0.0) {
        return Err(Error::Parameter(format!("t_end must be positive (got {t_end})")));
    }
    let grid = default_grid(n_dim)?;
    let u0 = InitialData::Bump.sample(&grid)?;
    let base = SolveConfig {
        output_times: vec![t_end],
        ..SolveConfig::default()
    };
    let runs = UniquenessRuns::perturbed(&base);
    let gap = uniqueness_gap(&u0, &params, &runs)?;
    let envelope = uniqueness_envelope(q, gamma, n_dim, t_end)?;
    let bound = lambda.powi(3) * envelope;
    let witnesses = vec![Witness::new(
        format!("t={t_end}"),
        &[
            ("gap", gap),
            ("lambda", lambda),
            ("envelope", envelope),
            ("bound", bound),
        ],
    )];
    let report_params = ParamMap::new()
        .with("q", q)
        .with("gamma", gamma)
        .with("n_dim", n_dim)
        .with("t_end", t_end)
        .with_grid(&grid)
        .with("schedule_first", &runs.first.n_schedule)
        .with("schedule_second", &runs.second.n_schedule)
        .with("k", 3)
        .build();
    Ok(CheckReport::new(
        "uniqueness_contraction",
        report_params,
        bound - gap,
        tol,
        witnesses,
    ))
}
