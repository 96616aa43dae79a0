//! Checks of the linear semigroups: maximum at the origin for radial
//! non-increasing data, the Heaviside gap and the smoothing exponent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{edge_margin, node_location, CheckReport, ParamMap, Witness, WorstCases};
use crate::constants::eta1;
use crate::error::{Error, Result};
use crate::fields::{make_grid, sample, Grid, GridFunction};
use crate::initial::InitialData;
use crate::semigroup::{apply_heat, apply_weighted_heat};

/// Tolerance of the Heaviside gap before the h-resolution slack is added.
pub const HEAVISIDE_TOLERANCE: f64 = 1e-3;

/// Pointwise allowance above 1/2 in the Heaviside check.
const HEAVISIDE_POINTWISE: f64 = 1e-6;

/// A radial profile f(|x|).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    Constant {
        value: f64,
    },
    /// 1 for r ≤ radius.
    Indicator {
        radius: f64,
    },
    /// e^{-rate·r}.
    Exponential {
        rate: f64,
    },
    /// Σ_k heights[k]·1[r ≤ radii[k]].
    Steps {
        radii: Vec<f64>,
        heights: Vec<f64>,
    },
    /// Piecewise linear through (radii[k], values[k]), constant outside.
    Tabulated {
        radii: Vec<f64>,
        values: Vec<f64>,
    },
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Constant { value } => *value,
            RadialProfile::Indicator { radius } => f64::from(u8::from(r <= *radius)),
            RadialProfile::Exponential { rate } => (-rate * r).exp(),
            RadialProfile::Steps { radii, heights } => radii
                .iter()
                .zip(heights)
                .filter(|(&rk, _)| r <= rk)
                .map(|(_, &hk)| hk)
                .sum(),
            RadialProfile::Tabulated { radii, values } => {
                let k = radii.partition_point(|&rk| rk <= r);
                if k == 0 {
                    values[0]
                } else if k == radii.len() {
                    values[k - 1]
                } else {
                    let s = (r - radii[k - 1]) / (radii[k] - radii[k - 1]);
                    values[k - 1] + s * (values[k] - values[k - 1])
                }
            }
        }
    }

    /// Confirms shape consistency, finiteness, non-negativity and
    /// monotonicity on a dense radius sample of [0, r_max].
    pub fn validate(&self, r_max: f64) -> Result<()> {
        let lens_ok = match self {
            RadialProfile::Steps { radii, heights } => radii.len() == heights.len(),
            RadialProfile::Tabulated { radii, values } => {
                !radii.is_empty() && radii.len() == values.len() && radii.windows(2).all(|w| w[0] < w[1])
            }
            _ => true,
        };
        if !lens_ok {
            return Err(Error::Input("profile tables are inconsistent".into()));
        }
        let mut radii: Vec<f64> = (0..=8192).map(|k| r_max * k as f64 / 8192.0).collect();
        if let RadialProfile::Tabulated { radii: r, .. } = self {
            radii.extend(r.iter().copied().filter(|&x| x >= 0.0));
            radii.sort_by(f64::total_cmp);
        }
        let mut prev = f64::INFINITY;
        for r in radii {
            let v = self.eval(r);
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Input(format!(
                    "profile value {v} at r={r} is not a finite non-negative number"
                )));
            }
            if v > prev {
                return Err(Error::Input(format!(
                    "profile increases from {prev} to {v} at r={r}; a non-increasing profile is required"
                )));
            }
            prev = v;
        }
        Ok(())
    }

    /// Steps, an exponential or a decreasing table, drawn from `rng`.
    pub fn random(rng: &mut impl Rng) -> Self {
        match rng.random_range(0..3) {
            0 => {
                let k = rng.random_range(1..=4);
                RadialProfile::Steps {
                    radii: (0..k).map(|_| rng.random_range(0.3..5.0)).collect(),
                    heights: (0..k).map(|_| rng.random_range(0.1..1.0)).collect(),
                }
            }
            1 => RadialProfile::Exponential {
                rate: rng.random_range(0.2..3.0),
            },
            _ => {
                let k = rng.random_range(2..=6);
                let mut radii = vec![rng.random_range(0.0..1.0)];
                let mut values = vec![rng.random_range(0.5..2.0)];
                for _ in 1..k {
                    radii.push(radii[radii.len() - 1] + rng.random_range(0.1..2.0));
                    values.push(values[values.len() - 1] * rng.random_range(0.0..1.0));
                }
                RadialProfile::Tabulated { radii, values }
            }
        }
    }

    /// `count` profiles from a seeded ChaCha8 stream.
    pub fn random_family(count: usize, seed: u64) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(&mut rng)).collect()
    }

    pub fn sample(&self, grid: &Grid) -> Result<GridFunction> {
        sample(|x| self.eval(x.iter().map(|v| v * v).sum::<f64>().sqrt()), grid)
    }
}

/// max of S(t)f over the nodes adjacent to the origin minus the max over
/// all nodes; tolerance 1e-10·sup f for roundoff.
pub fn check_max_at_origin(profile: &RadialProfile, t: f64, grid: &Grid) -> Result<CheckReport> {
    let r_max = grid.half_width() * (grid.n_dim() as f64).sqrt();
    profile.validate(r_max)?;
    let f = profile.sample(grid)?;
    let u = apply_heat(&f, t)?;
    let neighbors = grid.origin_neighbors();
    let (best_near, near_idx) = neighbors
        .iter()
        .map(|&i| (u.values()[i], i))
        .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a });
    let mut worst = WorstCases::new(3);
    for (i, &v) in u.values().iter().enumerate() {
        let margin = best_near - v;
        if worst.would_keep(margin) {
            worst.offer(margin, || {
                Witness::new(node_location(grid, t, i), &[("F", v), ("F_origin", best_near)])
            });
        }
    }
    let tol = 1e-10 * f.max_value().max(f64::MIN_POSITIVE);
    let params = ParamMap::new()
        .with("profile", profile)
        .with("t", t)
        .with_grid(grid)
        .with("origin_node", near_idx)
        .build();
    Ok(CheckReport::new(
        "max_at_origin",
        params,
        worst.worst(),
        tol,
        worst.into_witnesses(),
    ))
}

/// For the step datum, sup over interior nodes of |S(t)u₀ - u₀| is 1/2 up to
/// `HEAVISIDE_TOLERANCE` plus the slack h/(2√(4πt)) of the node nearest the
/// jump, and |S(t)u₀ - u₀| ≤ 1/2 + 1e-6 at every node.
///
/// The margin is the smaller of the two remaining allowances, measured
/// against their own tolerance, so the reported tolerance is 0.
pub fn check_heaviside_gap(t_list: &[f64], grid: &Grid) -> Result<CheckReport> {
    if grid.n_dim() != 1 {
        return Err(Error::Input(format!(
            "the Heaviside check is one-dimensional (got N={})",
            grid.n_dim()
        )));
    }
    if t_list.is_empty() || t_list.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Input(format!("times must be positive (got {t_list:?})")));
    }
    let u0 = InitialData::Step.sample(grid)?;
    let h = grid.spacing();
    let mut worst = WorstCases::new(4);
    let mut gaps = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let u = apply_heat(&u0, t)?;
        let interior = grid.interior_indices(edge_margin(t, 1e-12));
        let mut gap = 0.0f64;
        let mut at = 0;
        let pointwise = u
            .values()
            .iter()
            .zip(u0.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        for &i in &interior {
            let d = (u.values()[i] - u0.values()[i]).abs();
            if d > gap {
                gap = d;
                at = i;
            }
        }
        let slack = h / (2.0 * (4.0 * std::f64::consts::PI * t).sqrt());
        let m_gap = HEAVISIDE_TOLERANCE + slack - (gap - 0.5).abs();
        worst.offer(m_gap, || {
            Witness::new(node_location(grid, t, at), &[("gap", gap), ("slack", slack)])
        });
        let m_point = 0.5 + HEAVISIDE_POINTWISE - pointwise;
        worst.offer(m_point, || {
            Witness::new(format!("t={t}"), &[("pointwise_sup", pointwise)])
        });
        gaps.push(gap);
    }
    let params = ParamMap::new()
        .with("t_list", t_list)
        .with_grid(grid)
        .with("gaps", &gaps)
        .with("tolerance_gap", HEAVISIDE_TOLERANCE)
        .with("tolerance_pointwise", HEAVISIDE_POINTWISE)
        .build();
    Ok(CheckReport::new(
        "heaviside_gap",
        params,
        worst.worst(),
        0.0,
        worst.into_witnesses(),
    ))
}

/// Slope tolerance of [`check_smoothing_exponent`].
const SLOPE_TOLERANCE: f64 = 0.02;
/// Intercept tolerance of [`check_smoothing_exponent`].
const INTERCEPT_TOLERANCE: f64 = 0.05;

/// Least-squares fit of ln [S_γ(t)1](node nearest 0) against ln t: slope
/// -γ/2 within 0.02 and intercept ln η₁ within 0.05.
///
/// The margin is -max(|Δslope|, 0.4·|Δintercept|), so both limits map to the
/// slope tolerance. The grid covers 2√(t ln 10¹²) and resolves √t_min by ten
/// cells where the dimension allows.
pub fn check_smoothing_exponent(gamma: f64, n_dim: usize, t_list: &[f64]) -> Result<CheckReport> {
    if t_list.len() < 2 || t_list.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Input(format!(
            "need at least two positive times (got {t_list:?})"
        )));
    }
    let t_min = t_list.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = t_list.iter().copied().fold(0.0, f64::max);
    if t_max < 10.0 * t_min {
        return Err(Error::Input(format!(
            "times must span at least one decade (got {t_min} to {t_max})"
        )));
    }
    let grid = smoothing_grid(n_dim, t_min, t_max)?;
    let e1 = eta1(gamma, n_dim)?;
    let one = GridFunction::constant(grid, 1.0);
    let origin = grid.nearest_origin();
    let mut logs = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let v = apply_weighted_heat(&one, t, gamma)?.values()[origin];
        logs.push((t.ln(), v.ln()));
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let d_slope = (slope + gamma / 2.0).abs();
    let d_int = (intercept - e1.ln()).abs();
    let margin = -d_slope.max(d_int * SLOPE_TOLERANCE / INTERCEPT_TOLERANCE);
    let witnesses = vec![Witness::new(
        "fit",
        &[
            ("slope", slope),
            ("expected_slope", -gamma / 2.0),
            ("intercept", intercept),
            ("ln_eta1", e1.ln()),
        ],
    )];
    let params = ParamMap::new()
        .with("gamma", gamma)
        .with("n_dim", n_dim)
        .with("t_list", t_list)
        .with_grid(&grid)
        .with("slope", slope)
        .with("intercept", intercept)
        .with("tolerance_intercept", INTERCEPT_TOLERANCE)
        .build();
    Ok(CheckReport::new(
        "smoothing_exponent",
        params,
        margin,
        SLOPE_TOLERANCE,
        witnesses,
    ))
}

fn smoothing_grid(n_dim: usize, t_min: f64, t_max: f64) -> Result<Grid> {
    let half = (2.0 * (t_max * 1e12f64.ln()).sqrt()).max(8.0).ceil();
    let cap = match n_dim {
        1 => 8192,
        2 => 512,
        _ => 128,
    };
    let wanted = (2.0 * half / (0.1 * t_min.sqrt())).ceil() as usize;
    let m = (wanted.next_power_of_two()).clamp(16, cap);
    make_grid(n_dim, half, m)
}
