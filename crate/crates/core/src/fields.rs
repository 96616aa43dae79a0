//! Uniform cell-centered grids on the box [-L, L]^N, sampled fields and the
//! cell-averaged singular weight |y|^-γ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Problem parameters: dimension N, exponent q and weight strength γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n_dim: usize,
    pub q: f64,
    pub gamma: f64,
}

impl Params {
    pub fn new(n_dim: usize, q: f64, gamma: f64) -> Result<Self> {
        let p = Self { n_dim, q, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.n_dim) {
            return Err(Error::Parameter(format!(
                "dimension must be 1, 2 or 3 (got {})",
                self.n_dim
            )));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::Parameter(format!("q must lie in (0,1) (got {})", self.q)));
        }
        let gn = gamma_n(self.n_dim);
        if !(self.gamma >= 0.0 && self.gamma < gn) {
            return Err(Error::Parameter(format!(
                "gamma must lie in [0, {gn}) for N = {} (got {})",
                self.n_dim, self.gamma
            )));
        }
        Ok(())
    }

    /// γ_N = min(2, N).
    pub fn gamma_n(&self) -> f64 {
        gamma_n(self.n_dim)
    }
}

/// Upper limit min(2, N) for the weight strength.
pub fn gamma_n(n_dim: usize) -> f64 {
    (n_dim as f64).min(2.0)
}

/// A point in R^N stored with up to three coordinates; unused trailing
/// coordinates are zero.
pub type Point = [f64; 3];

pub fn norm(p: &Point) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// Cell-centered grid on [-L, L]^N with M points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_dim: usize,
    half_width: f64,
    points_per_axis: usize,
    spacing: f64,
}

/// Smallest admitted number of points per axis.
pub const MIN_POINTS_PER_AXIS: usize = 4;

impl Grid {
    pub fn new(n_dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if !(1..=3).contains(&n_dim) {
            return Err(Error::Parameter(format!(
                "grid dimension must be 1, 2 or 3 (got {n_dim})"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Parameter(format!(
                "half_width must be positive (got {half_width})"
            )));
        }
        if !points_per_axis.is_multiple_of(2) || points_per_axis < MIN_POINTS_PER_AXIS {
            return Err(Error::Parameter(format!(
                "points_per_axis must be even and at least {MIN_POINTS_PER_AXIS} (got {points_per_axis})"
            )));
        }
        Ok(Self {
            n_dim,
            half_width,
            points_per_axis,
            spacing: 2.0 * half_width / points_per_axis as f64,
        })
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Total number of nodes, M^N.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.n_dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of the j-th node along one axis.
    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.spacing
    }

    /// Per-axis indices of a flat node index (last axis fastest).
    pub fn multi_index(&self, index: usize) -> [usize; 3] {
        let m = self.points_per_axis;
        let mut out = [0usize; 3];
        let mut rest = index;
        for axis in (0..self.n_dim).rev() {
            out[axis] = rest % m;
            rest /= m;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi[..self.n_dim]
            .iter()
            .fold(0, |acc, &j| acc * self.points_per_axis + j)
    }

    pub fn node(&self, index: usize) -> Point {
        let mi = self.multi_index(index);
        let mut p = [0.0; 3];
        for axis in 0..self.n_dim {
            p[axis] = self.coordinate(mi[axis]);
        }
        p
    }

    /// Distance from a node to the boundary of the box (sup-norm sense).
    pub fn distance_to_boundary(&self, index: usize) -> f64 {
        let p = self.node(index);
        p[..self.n_dim]
            .iter()
            .map(|c| self.half_width - c.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Indices of nodes at distance at least `margin` from the box boundary.
    pub fn interior_indices(&self, margin: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.distance_to_boundary(i) >= margin)
            .collect()
    }

    /// Indices of the 2^N nodes adjacent to the origin.
    pub fn origin_neighbors(&self) -> Vec<usize> {
        let half = self.points_per_axis / 2;
        (0..(1usize << self.n_dim))
            .map(|bits| {
                let mut mi = [0usize; 3];
                for (axis, slot) in mi.iter_mut().enumerate().take(self.n_dim) {
                    *slot = if bits >> axis & 1 == 1 { half } else { half - 1 };
                }
                self.flat_index(&mi)
            })
            .collect()
    }

    /// Index of the node with the smallest |x| (the first of the origin neighbours).
    pub fn nearest_origin(&self) -> usize {
        self.origin_neighbors()[0]
    }

    /// Index of the node closest to `p`.
    pub fn nearest_node(&self, p: &Point) -> usize {
        let mut mi = [0usize; 3];
        for axis in 0..self.n_dim {
            let j = ((p[axis] + self.half_width) / self.spacing - 0.5).round();
            mi[axis] = j.clamp(0.0, (self.points_per_axis - 1) as f64) as usize;
        }
        self.flat_index(&mi)
    }
}

/// Convenience wrapper matching the operation name used across the crate.
pub fn make_grid(n_dim: usize, half_width: f64, points_per_axis: usize) -> Result<Grid> {
    Grid::new(n_dim, half_width, points_per_axis)
}

/// Field sampled on the nodes of a grid. Values are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} values for a grid with {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some((node, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                node,
                position: grid.node(node)[..grid.n_dim()].to_vec(),
                value,
            });
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_values_unchecked(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_non_negative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn add_scalar(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }
}

/// Sample `field` at every node.
pub fn sample(field: impl Fn(&[f64]) -> f64, grid: &Grid) -> Result<GridFunction> {
    let n = grid.n_dim();
    let values = (0..grid.len())
        .map(|i| {
            let p = grid.node(i);
            field(&p[..n])
        })
        .collect();
    GridFunction::from_values(*grid, values)
}

/// Maximum of |values| over the nodes.
pub fn sup_norm(f: &GridFunction) -> f64 {
    f.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Radius (in units of h) inside which the face quadrature uses 32 points.
const REFINE_RADIUS_CELLS: f64 = 3.0;

/// Cell averages h^-N ∫_cell |y|^-γ dy.
///
/// |y|^-γ is homogeneous of degree -γ, so div(y |y|^-γ) = (N-γ)|y|^-γ and the
/// cell integral equals (N-γ)^-1 times the flux of y|y|^-γ through the cell
/// faces. On an axis-aligned face y·n is constant, and it vanishes on faces
/// through the origin, so every remaining face integrand is smooth. In 1D the
/// identity is the exact antiderivative; in 2D/3D faces are integrated with
/// Gauss rules, 32 points per direction for cells within 3h of the origin.
pub fn weight_field(grid: &Grid, gamma: f64) -> Result<GridFunction> {
    let n = grid.n_dim();
    let gn = gamma_n(n);
    if !(gamma >= 0.0 && gamma < gn) {
        return Err(Error::Parameter(format!(
            "gamma must lie in [0, {gn}) for N = {n} (got {gamma})"
        )));
    }
    if gamma == 0.0 {
        return Ok(GridFunction::constant(*grid, 1.0));
    }
    let rules = [GaussLegendre::new(32), GaussLegendre::new(8), GaussLegendre::new(6)];
    let h = grid.spacing();
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let center = grid.node(i);
            let r = norm(&center) / h;
            let rule = if r < REFINE_RADIUS_CELLS {
                &rules[0]
            } else if r < 8.0 {
                &rules[1]
            } else {
                &rules[2]
            };
            cell_average(&center, h, n, gamma, rule)
        })
        .collect();
    GridFunction::from_values(*grid, values)
}

fn cell_average(center: &Point, h: f64, n: usize, gamma: f64, rule: &GaussLegendre) -> f64 {
    let mut flux = 0.0;
    for axis in 0..n {
        for side in [-0.5, 0.5] {
            let plane = center[axis] + side * h;
            // y·n on this face: the plane coordinate times the outward sign
            let y_dot_n = if side > 0.0 { plane } else { -plane };
            if plane == 0.0 {
                continue;
            }
            flux += y_dot_n * face_integral(center, h, n, axis, plane, gamma, rule);
        }
    }
    flux / ((n as f64 - gamma) * h.powi(n as i32))
}

fn face_integral(center: &Point, h: f64, n: usize, axis: usize, plane: f64, gamma: f64, rule: &GaussLegendre) -> f64 {
    let others: Vec<usize> = (0..n).filter(|&a| a != axis).collect();
    let c2 = plane * plane;
    match others.len() {
        0 => c2.powf(-0.5 * gamma),
        1 => {
            let a = others[0];
            rule.integrate(
                |u| (c2 + u * u).powf(-0.5 * gamma),
                center[a] - 0.5 * h,
                center[a] + 0.5 * h,
            )
        }
        _ => {
            let (a, b) = (others[0], others[1]);
            let (lo_a, hi_a) = (center[a] - 0.5 * h, center[a] + 0.5 * h);
            let (lo_b, hi_b) = (center[b] - 0.5 * h, center[b] + 0.5 * h);
            rule.on_interval(lo_a, hi_a)
                .map(|(u, wu)| wu * rule.integrate(|v| (c2 + u * u + v * v).powf(-0.5 * gamma), lo_b, hi_b))
                .sum()
        }
    }
}
