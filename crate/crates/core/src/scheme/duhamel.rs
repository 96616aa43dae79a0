use super::mesh::{end_rule, grading_exponent};
use crate::error::{Error, Result};
use crate::fields::GridFunction;
use crate::quadrature::GaussLegendre;
use crate::semigroup::HeatOperator;
use crate::spectral::Spectral;

/// ∫_0^t S(t-σ)[w ⊙ f(σ)] dσ for a prescribed source `f`.
///
/// [0, t/2] uses Gauss nodes in σ = (t/2)s², which absorbs a power-type
/// onset of the source at σ = 0; [t/2, t] uses the graded end rule toward
/// the singular endpoint. `nodes` is the count per half.
pub fn duhamel_integral<F>(
    weight: &GridFunction,
    gamma: f64,
    t: f64,
    nodes: usize,
    tail_tolerance: f64,
    source: F,
) -> Result<GridFunction>
where
    F: Fn(f64) -> Vec<f64>,
{
    let grid = *weight.grid();
    if t == 0.0 {
        return Ok(GridFunction::zeros(grid));
    }
    if !(t > 0.0) {
        return Err(Error::Parameter(format!("Duhamel integral needs t ≥ 0 (got {t})")));
    }
    let half = 0.5 * t;
    let mut points: Vec<(f64, f64, f64)> = Vec::with_capacity(2 * nodes);
    for (s, w) in GaussLegendre::new(nodes).on_interval(0.0, 1.0) {
        let sigma = half * s * s;
        points.push((sigma, 2.0 * half * s * w, t - sigma));
    }
    for node in end_rule(nodes, grading_exponent(gamma)) {
        points.push((half + half * node.offset, half * node.weight, half * node.remaining));
    }

    let spectral = Spectral::new(&grid);
    let mut acc = vec![rustfft::num_complex::Complex64::new(0.0, 0.0); spectral.padded_len()];
    for (sigma, w, lag) in points {
        let f = source(sigma);
        if f.len() != grid.len() {
            return Err(Error::Shape(format!(
                "source returned {} values for a grid of {}",
                f.len(),
                grid.len()
            )));
        }
        let weighted: Vec<f64> = f.iter().zip(weight.values()).map(|(a, b)| a * b).collect();
        let op = HeatOperator::new(&grid, lag, tail_tolerance)?;
        let khat = spectral.expand(&spectral.kernel_spectrum(op.kernel()));
        let s = spectral.forward(&weighted);
        for ((a, z), k) in acc.iter_mut().zip(&s).zip(&khat) {
            *a += z * (w * k);
        }
    }
    let values = spectral.inverse(acc).into_iter().map(|v| v.max(0.0)).collect();
    GridFunction::from_values(grid, values)
}
