//! The monotone scheme: data u₀ + 1/n, nonlinearity g_n, n along a schedule.
//!
//! All runs share the time mesh of the largest n, so consecutive runs differ
//! only in data and nonlinearity and the discrete ordering u_n ≥ u_{2n} can
//! be checked node by node. With u₀ ≡ 0 the limit is the maximal solution;
//! no uniqueness is claimed there.

use rayon::prelude::*;

use super::mesh::TimeMesh;
use super::solver::Solver;
use super::trajectory::Trajectory;
use super::{g_n_lipschitz, Nonlinearity, SolveConfig};
use crate::error::{Error, Result};
use crate::fields::{GridFunction, Params};

/// Allowed increase of u_n in n before the scheme reports a violation.
pub const MONOTONICITY_SLACK: f64 = 1e-8;

/// Common mesh of the n-schedule, sized for its largest n.
pub fn monotone_mesh(solver: &Solver) -> Result<TimeMesh> {
    let config = solver.config();
    let n_max = *config.n_schedule.last().expect("validated schedule");
    let l = g_n_lipschitz(n_max, solver.params().q);
    TimeMesh::uniform(
        &config.output_times,
        solver.window_bound(l),
        config.nodes_per_window,
        solver.params().gamma,
    )
}

pub fn monotone_solve(u0: &GridFunction, params: &Params, config: &SolveConfig) -> Result<Trajectory> {
    let solver = Solver::new(u0.grid(), params, config)?;
    let mesh = monotone_mesh(&solver)?;
    monotone_solve_with(&solver, u0, &mesh)
}

/// [`monotone_solve`] on a prepared solver and mesh.
pub fn monotone_solve_with(solver: &Solver, u0: &GridFunction, mesh: &TimeMesh) -> Result<Trajectory> {
    if !u0.is_non_negative() {
        return Err(Error::Input("initial data must be non-negative".into()));
    }
    let config = solver.config();
    let batch = rayon::current_num_threads().max(1);
    let mut used = Vec::new();
    let mut gaps = Vec::new();
    let mut margins = Vec::new();
    let mut last: Option<Trajectory> = None;
    'schedule: for chunk in config.n_schedule.chunks(batch) {
        let runs: Vec<Result<Trajectory>> = chunk
            .par_iter()
            .map(|&n| solver.solve(&u0.add_scalar(1.0 / n as f64), Nonlinearity::Regularized { n }, mesh))
            .collect();
        for (&n, run) in chunk.iter().zip(runs) {
            let traj = run?;
            if let Some(prev) = &last {
                let (margin, gap) = compare(prev, &traj, used[used.len() - 1], n)?;
                margins.push(margin);
                gaps.push(gap);
            }
            used.push(n);
            last = Some(traj);
            if config.early_stop && gaps.last().is_some_and(|&g| g < config.picard_tolerance) {
                break 'schedule;
            }
        }
    }
    let mut traj = last.expect("schedule is non-empty");
    traj.metadata.n_schedule_used = used;
    traj.metadata.n_gaps = gaps;
    traj.metadata.monotonicity_margins = margins;
    Ok(traj)
}

/// (min of u_prev - u_next, sup |u_prev - u_next|) over nodes and times.
fn compare(prev: &Trajectory, next: &Trajectory, n_prev: u64, n_next: u64) -> Result<(f64, f64)> {
    let grid = *prev.grid();
    let mut margin = f64::INFINITY;
    let mut gap = 0.0f64;
    let mut offenders = Vec::new();
    for ((t, a), b) in prev.times.iter().zip(&prev.snapshots).zip(&next.snapshots) {
        for (i, (&x, &y)) in a.values().iter().zip(b.values()).enumerate() {
            let d = x - y;
            margin = margin.min(d);
            gap = gap.max(d.abs());
            if d < -MONOTONICITY_SLACK && offenders.len() < 5 {
                let p = grid.node(i);
                offenders.push(format!(
                    "t={t} node={i} x={:?} u_{n_prev}={x} u_{n_next}={y}",
                    &p[..grid.n_dim()]
                ));
            }
        }
    }
    if !offenders.is_empty() {
        return Err(Error::Scheme(format!(
            "u_{n_next} exceeds u_{n_prev} by {:e} (slack {MONOTONICITY_SLACK:e}): {}",
            -margin,
            offenders.join("; ")
        )));
    }
    Ok((margin, gap))
}
