//! Heat kernel, heat semigroup S(t) and the weighted semigroup
//! S_γ(t) = S(t)|·|^{-γ} as discrete operators on grid functions.
//!
//! The discrete kernel is the sampled Gaussian renormalized to unit discrete
//! mass. It is separable, so the N-dimensional operator is the tensor product
//! of one 1D kernel; application is a zero-extended linear convolution,
//! summed directly for small grids and through [`Spectral`] otherwise.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::{norm, weight_field, Grid, GridFunction, Point};
use crate::spectral::Spectral;

/// Default bound on the Gaussian mass lost beyond the padded offsets.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

/// Grids with at most this many points per axis are convolved directly.
pub const DIRECT_SUMMATION_LIMIT: usize = 128;

/// G_t(x) = (4πt)^{-N/2} exp(-|x|²/(4t)), with N = `x.len()`.
pub fn heat_kernel(t: f64, x: &[f64]) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Parameter(format!("heat kernel needs t > 0 (got {t})")));
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok((4.0 * PI * t).powf(-(x.len() as f64) / 2.0) * (-r2 / (4.0 * t)).exp())
}

/// Upper bound for erfc(z), z > 0.
fn erfc_bound(z: f64) -> f64 {
    (-z * z).exp() / (z * PI.sqrt())
}

/// Normalized discrete heat kernel for one time gap.
#[derive(Debug, Clone)]
pub struct HeatOperator {
    grid: Grid,
    time_gap: f64,
    kernel: Vec<f64>,
    tail_bound: f64,
}

impl HeatOperator {
    pub fn new(grid: &Grid, time_gap: f64, tail_tolerance: f64) -> Result<Self> {
        if !(time_gap > 0.0) || !time_gap.is_finite() {
            return Err(Error::Parameter(format!("time gap must be positive (got {time_gap})")));
        }
        let m = grid.points_per_axis();
        let h = grid.spacing();
        // mass of the N-D Gaussian outside the reachable offsets
        let reach = (m as f64 - 0.5) * h;
        let tail_bound = grid.n_dim() as f64 * erfc_bound(reach / (2.0 * time_gap.sqrt()));
        if tail_bound > tail_tolerance {
            return Err(Error::Truncation(format!(
                "heat kernel at t = {time_gap} loses mass up to {tail_bound:e} beyond the padded box \
                 (tolerance {tail_tolerance:e}); enlarge half_width beyond {}",
                grid.half_width()
            )));
        }
        let c = h * h / (4.0 * time_gap);
        let mut kernel: Vec<f64> = (0..m).map(|d| (-c * (d * d) as f64).exp()).collect();
        let total = kernel[0] + 2.0 * kernel[1..].iter().sum::<f64>();
        for k in &mut kernel {
            *k /= total;
        }
        Ok(Self {
            grid: *grid,
            time_gap,
            kernel,
            tail_bound,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn time_gap(&self) -> f64 {
        self.time_gap
    }

    /// 1D kernel weights for offsets `0..M`; the kernel is even.
    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    /// Bound on the Gaussian mass beyond the padding.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Total discrete mass of the N-D kernel.
    pub fn mass(&self) -> f64 {
        let one_d = self.kernel[0] + 2.0 * self.kernel[1..].iter().sum::<f64>();
        one_d.powi(self.grid.n_dim() as i32)
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.grid() != &self.grid {
            return Err(Error::Shape("operator and field live on different grids".into()));
        }
        let values = if self.grid.points_per_axis() <= DIRECT_SUMMATION_LIMIT {
            self.apply_direct(f.values())
        } else {
            self.apply_spectral(&Spectral::new(&self.grid), f.values())
        };
        Ok(GridFunction::from_values_unchecked(self.grid, values))
    }

    /// Application through a prebuilt FFT plan.
    pub fn apply_spectral(&self, spectral: &Spectral, values: &[f64]) -> Vec<f64> {
        let khat = spectral.expand(&spectral.kernel_spectrum(&self.kernel));
        let mut s = spectral.forward(values);
        for (z, k) in s.iter_mut().zip(&khat) {
            *z *= *k;
        }
        let mut out = spectral.inverse(s);
        // the exact result is non-negative for non-negative input; drop FFT roundoff
        if values.iter().all(|&v| v >= 0.0) {
            for v in &mut out {
                *v = v.max(0.0);
            }
        }
        out
    }

    fn apply_direct(&self, values: &[f64]) -> Vec<f64> {
        let m = self.grid.points_per_axis();
        let n = self.grid.n_dim();
        let mut cur = values.to_vec();
        let mut line = vec![0.0; m];
        for axis in 0..n {
            let stride = m.pow((n - 1 - axis) as u32);
            let mut next = vec![0.0; cur.len()];
            for start in 0..cur.len() {
                if !(start / stride).is_multiple_of(m) {
                    continue;
                }
                for (i, l) in line.iter_mut().enumerate() {
                    *l = cur[start + i * stride];
                }
                for i in 0..m {
                    let mut acc = 0.0;
                    for (j, &l) in line.iter().enumerate() {
                        acc += self.kernel[i.abs_diff(j)] * l;
                    }
                    next[start + i * stride] = acc;
                }
            }
            cur = next;
        }
        cur
    }
}

/// S(t)f as a discrete linear convolution.
pub fn apply_heat(f: &GridFunction, t: f64) -> Result<GridFunction> {
    HeatOperator::new(f.grid(), t, DEFAULT_TAIL_TOLERANCE)?.apply(f)
}

/// S_γ(t)f = S(t)(w ⊙ f), w the cell-averaged weight.
pub fn apply_weighted_heat(f: &GridFunction, t: f64, gamma: f64) -> Result<GridFunction> {
    let weight = weight_field(f.grid(), gamma)?;
    apply_weighted_heat_with(f, t, &weight)
}

/// As [`apply_weighted_heat`] with a precomputed weight field.
pub fn apply_weighted_heat_with(f: &GridFunction, t: f64, weight: &GridFunction) -> Result<GridFunction> {
    let product = f.zip_with(weight, |a, b| a * b)?;
    apply_heat(&product, t)
}

/// (1+4at)^{-N/2} exp(-a|x|²/(1+4at)), the heat flow of e^{-a|x|²}.
pub fn gaussian_exact(a: f64, t: f64, x: &[f64]) -> f64 {
    let s = 1.0 + 4.0 * a * t;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    s.powf(-(x.len() as f64) / 2.0) * (-a * r2 / s).exp()
}

/// Gaussian floor of S(t₀)v₀: returns C′ = (4πt₀)^{-N/2} ∫ e^{-|y|²/(2t₀)} v₀(y) dy
/// and the field C′ e^{-|x|²/(2t₀)}.
pub fn gaussian_floor(v0: &GridFunction, t0: f64) -> Result<(f64, GridFunction)> {
    if !(t0 > 0.0) || !t0.is_finite() {
        return Err(Error::Parameter(format!("t0 must be positive (got {t0})")));
    }
    if !v0.is_non_negative() {
        return Err(Error::Input("gaussian_floor needs non-negative data".into()));
    }
    if v0.max_value() == 0.0 {
        return Err(Error::Degenerate(
            "v0 vanishes identically; the floor would be zero".into(),
        ));
    }
    let grid = v0.grid();
    let n = grid.n_dim();
    let cell = grid.spacing().powi(n as i32);
    let node_r2 = |i: usize| {
        let p: Point = grid.node(i);
        let r = norm(&p);
        r * r
    };
    let integral: f64 = v0
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (-node_r2(i) / (2.0 * t0)).exp() * v)
        .sum::<f64>()
        * cell;
    let c_prime = (4.0 * PI * t0).powf(-(n as f64) / 2.0) * integral;
    let floor = (0..grid.len())
        .map(|i| c_prime * (-node_r2(i) / (2.0 * t0)).exp())
        .collect();
    Ok((c_prime, GridFunction::from_values_unchecked(*grid, floor)))
}
