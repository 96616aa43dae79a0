//! Fixed collections of checks with their default inputs.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::*;
use crate::constants::gamma_star;
use crate::error::Error;
use crate::fields::{make_grid, GridFunction, Params};
use crate::initial::InitialData;
use crate::scheme::{monotone_solve, SolveConfig};

/// `quick` runs the linear and grid-free checks; `all` adds the nonlinear
/// solves and the full-resolution Heaviside check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Quick,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Suite::Quick),
            "all" => Ok(Suite::All),
            _ => Err(Error::Usage(format!("unknown suite `{s}` (expected quick or all)"))),
        }
    }
}

type CheckFn = Box<dyn Fn() -> Result<CheckReport> + Send + Sync>;

fn entry(name: &'static str, f: impl Fn() -> Result<CheckReport> + Send + Sync + 'static) -> (&'static str, CheckFn) {
    (name, Box::new(f))
}

fn checks(suite: Suite) -> Vec<(&'static str, CheckFn)> {
    let mut list = vec![
        entry("gronwall", || {
            let parts = vec![
                check_gronwall(
                    &GronwallInstance {
                        a: 1.0,
                        m: 1.0,
                        alpha: 0.0,
                        t: 1.0,
                    },
                    4096,
                )?,
                check_gronwall(
                    &GronwallInstance {
                        a: 1.0,
                        m: 1.0,
                        alpha: 0.5,
                        t: 1.0,
                    },
                    4096,
                )?,
            ];
            Ok(CheckReport::merge(
                "gronwall",
                ParamMap::new().with("alphas", [0.0, 0.5]).build(),
                parts,
            ))
        }),
        entry("lambda_limit", || check_lambda_limit(0.5, 1, &[0.1, 0.01, 0.001])),
        entry("positive_part", || check_positive_part_sweep(0.5, 10_000, 1)),
        entry("g_n_properties", || check_g_n_properties(0.5, 10_000, 2)),
        entry("smoothing_exponent", || {
            check_smoothing_exponent(0.5, 1, &[0.25, 0.5, 1.0, 2.0, 4.0])
        }),
    ];
    let heaviside_points = match suite {
        Suite::Quick => 4096,
        Suite::All => 131_072,
    };
    list.push(entry("heaviside_gap", move || {
        check_heaviside_gap(&[0.01, 1.0], &make_grid(1, 20.0, heaviside_points)?)
    }));
    let profiles = match suite {
        Suite::Quick => 5,
        Suite::All => 20,
    };
    list.push(entry("max_at_origin", move || {
        let grid = make_grid(2, 8.0, 64)?;
        let family = RadialProfile::random_family(profiles, 11);
        let mut parts = Vec::with_capacity(family.len());
        for p in &family {
            parts.push(check_max_at_origin(p, 1.0, &grid)?);
        }
        let params = ParamMap::new()
            .with("profiles", profiles)
            .with("seed", 11)
            .with_grid(&grid)
            .build();
        Ok(CheckReport::merge("max_at_origin", params, parts))
    }));
    if suite == Suite::All {
        list.push(entry("subsolution", || {
            let params = Params::new(1, 0.5, 0.3)?;
            check_subsolution(&params, &make_grid(1, 12.0, 512)?, &[0.25, 1.0], 1e-3)
        }));
        list.push(entry("lower_bound", || {
            let params = Params::new(1, 0.5, 0.3)?;
            let grid = default_grid(1)?;
            let config = SolveConfig {
                output_times: vec![0.5, 1.0, 2.0],
                ..SolveConfig::default()
            };
            let traj = monotone_solve(&InitialData::Bump.sample(&grid)?, &params, &config)?;
            check_lower_bound(&traj, &params, 5e-3)
        }));
        list.push(entry("comparison", || {
            let params = Params::new(1, 0.5, 0.2)?;
            let grid = default_grid(1)?;
            let u0 = InitialData::Bump.sample(&grid)?;
            check_comparison(&u0, &GridFunction::zeros(grid), &params, &SolveConfig::default(), 1e-6)
        }));
        list.push(entry("uniqueness_contraction", || {
            let gs = gamma_star(0.5, 1)?;
            check_uniqueness_contraction(0.5, 0.5 * gs.gamma_star, 1, 1.0, 1e-6)
        }));
    }
    list
}

/// Runs every check of `suite` in a fixed order. A check that errors is
/// reported as a failure carrying the error text.
pub fn run_suite(suite: Suite) -> Vec<CheckReport> {
    use rayon::prelude::*;
    checks(suite)
        .par_iter()
        .map(|(name, f)| f().unwrap_or_else(|e| CheckReport::from_error(name, &e)))
        .collect()
}
