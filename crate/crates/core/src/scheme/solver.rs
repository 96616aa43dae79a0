//! Windowed Picard iteration for the discretized Duhamel equation
//! u(t) = S(t-a)u(a) + ∫_a^t S_γ(t-s) g(u(s)) ds on each window [a, b].
//!
//! Inside a window the unknowns are u at the graded end-rule nodes
//! τ_1 < … < τ_J. At τ_i the source g(u(s)) is interpolated linearly through
//! (a, τ_1, …, τ_i); each panel is integrated with a few Gauss points,
//! the last one graded toward τ_i. The end value u(b) uses the end rule
//! itself. Every coefficient is positive, so the discrete map is monotone.
//!
//! All heat applications of a window happen in Fourier space: one forward
//! transform per source field and one inverse transform per target.

use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex64;

use super::mesh::{end_rule, window_length_bound, TimeMesh};
use super::trajectory::{SchemeMetadata, Trajectory, WindowDiagnostic};
use super::{Nonlinearity, SolveConfig};
use crate::constants::eta1;
use crate::error::{Error, Result};
use crate::fields::{weight_field, Grid, GridFunction, Params};
use crate::quadrature::GaussLegendre;
use crate::semigroup::HeatOperator;
use crate::spectral::Spectral;

/// Dense multipliers are kept while they fit in this many doubles.
const DENSE_LIMIT: usize = 1 << 23;

/// A Fourier multiplier Σ c_k K̂_{τ_k}.
enum Multiplier {
    Dense(Vec<f64>),
    Terms(Vec<(f64, usize)>),
}

struct WindowPlan {
    length: f64,
    nodes: usize,
    grading: f64,
    spectra: Vec<Vec<f64>>,
    /// K̂ at the offsets of the interior nodes.
    free: Vec<Multiplier>,
    end_free: Multiplier,
    /// interior[i][m]: source 0 is the window start, source m ≥ 1 node m-1.
    interior: Vec<Vec<Multiplier>>,
    end: Vec<Multiplier>,
}

/// Reusable solver state for one grid and parameter set.
pub struct Solver {
    params: Params,
    grid: Grid,
    config: SolveConfig,
    spectral: Spectral,
    weight: Vec<f64>,
    eta1: f64,
    plans: Mutex<Vec<Arc<WindowPlan>>>,
}

impl Solver {
    pub fn new(grid: &Grid, params: &Params, config: &SolveConfig) -> Result<Self> {
        params.validate()?;
        config.validate()?;
        if grid.n_dim() != params.n_dim {
            return Err(Error::Shape(format!(
                "grid dimension {} does not match N = {}",
                grid.n_dim(),
                params.n_dim
            )));
        }
        Ok(Self {
            params: *params,
            grid: *grid,
            config: config.clone(),
            spectral: Spectral::new(grid),
            weight: weight_field(grid, params.gamma)?.into_values(),
            eta1: eta1(params.gamma, params.n_dim)?,
            plans: Mutex::new(Vec::new()),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn config(&self) -> &SolveConfig {
        &self.config
    }

    /// Window length giving contraction factor ≤ 1/2 for Lipschitz constant `l`.
    pub fn window_bound(&self, l: f64) -> f64 {
        window_length_bound(l, self.eta1, self.params.gamma)
    }

    /// Mesh for `nonlinearity` with data `u0`, built from the contraction bound.
    pub fn mesh_for(&self, nonlinearity: Nonlinearity, u0: &GridFunction) -> Result<TimeMesh> {
        let l = self.lipschitz(nonlinearity, u0.min_value())?;
        TimeMesh::uniform(
            &self.config.output_times,
            self.window_bound(l),
            self.config.nodes_per_window,
            self.params.gamma,
        )
    }

    fn lipschitz(&self, nonlinearity: Nonlinearity, data_min: f64) -> Result<f64> {
        // the heat flow of data ≥ c stays above 2^{-N} c on the box
        let floor = data_min * 0.5f64.powi(self.params.n_dim as i32);
        nonlinearity.lipschitz(self.params.q, floor).ok_or_else(|| {
            Error::Scheme(format!(
                "{nonlinearity} has no finite Lipschitz constant for data with minimum {data_min}; \
                 use the regularized nonlinearity or positive data"
            ))
        })
    }

    pub fn solve(&self, u0: &GridFunction, nonlinearity: Nonlinearity, mesh: &TimeMesh) -> Result<Trajectory> {
        if u0.grid() != &self.grid {
            return Err(Error::Shape("initial data and solver live on different grids".into()));
        }
        if !u0.is_non_negative() {
            return Err(Error::Input("initial data must be non-negative".into()));
        }
        let mut times = vec![0.0];
        let mut snapshots = vec![u0.clone()];
        let mut diagnostics = Vec::new();

        if nonlinearity == Nonlinearity::Zero {
            for &t in mesh.output_times() {
                let op = HeatOperator::new(&self.grid, t, self.config.tail_tolerance)?;
                let values = op.apply_spectral(&self.spectral, u0.values());
                times.push(t);
                snapshots.push(GridFunction::from_values_unchecked(self.grid, values));
            }
            return Ok(self.finish(times, snapshots, diagnostics, nonlinearity, mesh));
        }

        let mut u = u0.values().to_vec();
        let mut outputs = mesh.output_times().iter().peekable();
        for &(a, b) in mesh.windows() {
            let l = self.lipschitz(nonlinearity, u.iter().copied().fold(f64::INFINITY, f64::min))?;
            let bound = self.window_bound(l);
            let mut pieces = 1usize;
            while (b - a) / pieces as f64 > bound * (1.0 + 1e-12) {
                pieces *= 2;
            }
            for k in 0..pieces {
                let start = a + (b - a) * k as f64 / pieces as f64;
                let plan = self.plan((b - a) / pieces as f64, mesh.nodes_per_window(), mesh.grading())?;
                let (next, mut diag) = self.step(&plan, &u, nonlinearity, diagnostics.len())?;
                diag.start = start;
                diag.end = if k + 1 == pieces { b } else { start + plan.length };
                diagnostics.push(diag);
                u = next;
            }
            if outputs.peek().is_some_and(|&&t| t == b) {
                outputs.next();
                times.push(b);
                snapshots.push(GridFunction::from_values_unchecked(self.grid, u.clone()));
            }
        }
        Ok(self.finish(times, snapshots, diagnostics, nonlinearity, mesh))
    }

    fn finish(
        &self,
        times: Vec<f64>,
        snapshots: Vec<GridFunction>,
        diagnostics: Vec<WindowDiagnostic>,
        nonlinearity: Nonlinearity,
        mesh: &TimeMesh,
    ) -> Trajectory {
        Trajectory {
            params: self.params,
            times,
            snapshots,
            metadata: SchemeMetadata {
                nonlinearity,
                windows: diagnostics.len(),
                nodes_per_window: mesh.nodes_per_window(),
                n_schedule_used: Vec::new(),
                n_gaps: Vec::new(),
                monotonicity_margins: Vec::new(),
            },
            diagnostics,
        }
    }

    fn source_spectrum(&self, u: &[f64], nonlinearity: Nonlinearity) -> Vec<Complex64> {
        let q = self.params.q;
        let g: Vec<f64> = u
            .iter()
            .zip(&self.weight)
            .map(|(&v, &w)| w * nonlinearity.eval(q, v))
            .collect();
        self.spectral.forward(&g)
    }

    fn to_field(&self, spectrum: Vec<Complex64>) -> Result<Vec<f64>> {
        let mut out = self.spectral.inverse(spectrum);
        for (i, v) in out.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    node: i,
                    position: self.grid.node(i)[..self.grid.n_dim()].to_vec(),
                    value: *v,
                });
            }
            // exact values are non-negative; drop FFT roundoff
            *v = v.max(0.0);
        }
        Ok(out)
    }

    fn step(
        &self,
        plan: &WindowPlan,
        ua: &[f64],
        nonlinearity: Nonlinearity,
        window: usize,
    ) -> Result<(Vec<f64>, WindowDiagnostic)> {
        let j = plan.free.len();
        let mut scratch = Vec::new();
        let ua_hat = self.spectral.forward(ua);
        let free_spec: Vec<Vec<Complex64>> = plan
            .free
            .iter()
            .map(|m| {
                let mut s = ua_hat.clone();
                self.scale(&mut s, m, plan, &mut scratch);
                s
            })
            .collect();
        let mut nodes: Vec<Vec<f64>> = free_spec
            .iter()
            .map(|s| self.to_field(s.clone()))
            .collect::<Result<_>>()?;

        let mut sources = vec![self.source_spectrum(ua, nonlinearity)];
        sources.resize(j + 1, Vec::new());
        let mut residual = f64::INFINITY;
        let mut prev_residual = f64::NAN;
        let mut contraction = 0.0f64;
        let mut iterations = 0;
        while iterations < self.config.max_iterations {
            iterations += 1;
            for m in 0..j {
                sources[m + 1] = self.source_spectrum(&nodes[m], nonlinearity);
            }
            residual = 0.0;
            let mut next = Vec::with_capacity(j);
            for (i, row) in plan.interior.iter().enumerate() {
                let mut acc = free_spec[i].clone();
                for (m, mult) in row.iter().enumerate() {
                    self.accumulate(&mut acc, mult, &sources[m], plan, &mut scratch);
                }
                let field = self.to_field(acc)?;
                let d = field
                    .iter()
                    .zip(&nodes[i])
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                residual = residual.max(d);
                next.push(field);
            }
            nodes = next;
            if prev_residual > 0.0 {
                contraction = contraction.max(residual / prev_residual);
            }
            prev_residual = residual;
            if residual <= self.config.picard_tolerance {
                break;
            }
        }
        if residual > self.config.picard_tolerance {
            return Err(Error::Convergence {
                window,
                iterations,
                residual,
            });
        }
        let mut acc = ua_hat;
        self.scale(&mut acc, &plan.end_free, plan, &mut scratch);
        for (m, mult) in plan.end.iter().enumerate() {
            self.accumulate(&mut acc, mult, &sources[m + 1], plan, &mut scratch);
        }
        let ub = self.to_field(acc)?;
        Ok((
            ub,
            WindowDiagnostic {
                start: 0.0,
                end: 0.0,
                iterations,
                residual,
                contraction_estimate: contraction,
            },
        ))
    }

    fn dense<'a>(&self, mult: &'a Multiplier, plan: &WindowPlan, scratch: &'a mut Vec<f64>) -> &'a [f64] {
        match mult {
            Multiplier::Dense(v) => v,
            Multiplier::Terms(terms) => {
                scratch.clear();
                scratch.resize(self.spectral.padded_len(), 0.0);
                for &(c, k) in terms {
                    add_outer(scratch, c, &plan.spectra[k], self.grid.n_dim());
                }
                scratch
            }
        }
    }

    fn scale(&self, s: &mut [Complex64], mult: &Multiplier, plan: &WindowPlan, scratch: &mut Vec<f64>) {
        let k = self.dense(mult, plan, scratch);
        for (z, &m) in s.iter_mut().zip(k) {
            *z *= m;
        }
    }

    fn accumulate(
        &self,
        acc: &mut [Complex64],
        mult: &Multiplier,
        src: &[Complex64],
        plan: &WindowPlan,
        scratch: &mut Vec<f64>,
    ) {
        let k = self.dense(mult, plan, scratch);
        for ((a, &s), &m) in acc.iter_mut().zip(src).zip(k) {
            *a += s * m;
        }
    }

    fn plan(&self, length: f64, nodes: usize, grading: f64) -> Result<Arc<WindowPlan>> {
        let mut plans = self.plans.lock().expect("plan cache poisoned");
        if let Some(p) = plans
            .iter()
            .find(|p| p.nodes == nodes && p.grading == grading && (p.length - length).abs() <= 1e-12 * length)
        {
            return Ok(Arc::clone(p));
        }
        let plan = Arc::new(self.build_plan(length, nodes, grading)?);
        plans.push(Arc::clone(&plan));
        Ok(plan)
    }

    fn build_plan(&self, length: f64, nodes: usize, p: f64) -> Result<WindowPlan> {
        let rule = end_rule(nodes, p);
        let theta: Vec<f64> = rule.iter().map(|r| r.offset * length).collect();
        let panel = GaussLegendre::new(self.config.panel_points);
        let unit: Vec<(f64, f64)> = panel.on_interval(0.0, 1.0).collect();

        let mut spectra: Vec<Vec<f64>> = Vec::new();
        let mut gap = |tau: f64| -> Result<usize> {
            let op = HeatOperator::new(&self.grid, tau, self.config.tail_tolerance)?;
            spectra.push(self.spectral.kernel_spectrum(op.kernel()));
            Ok(spectra.len() - 1)
        };

        let mut free = Vec::new();
        for &t in &theta {
            free.push(vec![(1.0, gap(t)?)]);
        }
        let end_free = vec![(1.0, gap(length)?)];

        let mut interior = Vec::new();
        for i in 0..theta.len() {
            let mut row: Vec<Vec<(f64, usize)>> = vec![Vec::new(); i + 2];
            let target = theta[i];
            for k in 0..=i {
                // panel between source k (left) and source k+1 (right)
                let left = if k == 0 { 0.0 } else { theta[k - 1] };
                let right = theta[k];
                let width = right - left;
                for &(v, w) in &unit {
                    let (s, weight, lag) = if k == i {
                        // graded toward the singular end s = target
                        let vp = v.powf(p);
                        (right - width * vp, width * w * p * v.powf(p - 1.0), width * vp)
                    } else {
                        let s = left + width * v;
                        (s, width * w, target - s)
                    };
                    let idx = gap(lag)?;
                    let l_right = (s - left) / width;
                    row[k].push((weight * (1.0 - l_right), idx));
                    row[k + 1].push((weight * l_right, idx));
                }
            }
            interior.push(row);
        }

        let mut end = Vec::new();
        for node in &rule {
            end.push(vec![(node.weight * length, gap(node.remaining * length)?)]);
        }

        let count = free.len() + 1 + interior.iter().map(|r| r.len()).sum::<usize>() + end.len();
        let dense = self.spectral.padded_len() * count <= DENSE_LIMIT;
        let n = self.grid.n_dim();
        let len = self.spectral.padded_len();
        let make = |terms: Vec<(f64, usize)>| {
            if dense {
                let mut v = vec![0.0; len];
                for &(c, k) in &terms {
                    add_outer(&mut v, c, &spectra[k], n);
                }
                Multiplier::Dense(v)
            } else {
                Multiplier::Terms(terms)
            }
        };
        let free = free.into_iter().map(&make).collect();
        let end_free = make(end_free);
        let interior = interior
            .into_iter()
            .map(|row| row.into_iter().map(&make).collect())
            .collect();
        let end = end.into_iter().map(&make).collect();
        let spectra = if dense { Vec::new() } else { spectra };
        Ok(WindowPlan {
            length,
            nodes,
            grading: p,
            spectra,
            free,
            end_free,
            interior,
            end,
        })
    }
}

/// out += c · s⊗…⊗s (N factors).
fn add_outer(out: &mut [f64], c: f64, s: &[f64], n_dim: usize) {
    let p = s.len();
    match n_dim {
        1 => {
            for (o, &a) in out.iter_mut().zip(s) {
                *o += c * a;
            }
        }
        2 => {
            for (row, &a) in out.chunks_mut(p).zip(s) {
                let ca = c * a;
                for (o, &b) in row.iter_mut().zip(s) {
                    *o += ca * b;
                }
            }
        }
        _ => {
            for (slab, &a) in out.chunks_mut(p * p).zip(s) {
                add_outer(slab, c * a, s, 2);
            }
        }
    }
}

/// One-shot solve: builds a [`Solver`] and runs it on `mesh`.
pub fn picard_solve(
    u0: &GridFunction,
    nonlinearity: Nonlinearity,
    params: &Params,
    mesh: &TimeMesh,
    config: &SolveConfig,
) -> Result<Trajectory> {
    Solver::new(u0.grid(), params, config)?.solve(u0, nonlinearity, mesh)
}
