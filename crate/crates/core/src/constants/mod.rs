//! Scalar constants of the lower-bound and uniqueness estimates.
//!
//! Every Gaussian-weighted integral over R^N here is radial and is reduced to
//! `(4π)^{-N/2} |S^{N-1}| ∫_0^R r^{N-1} e^{-r²/4} f(r) dr`, with R chosen so
//! that the neglected tail is below 1e-16.

mod special;

pub use special::{beta_fn, gamma_fn, ln_gamma, mittag_leffler, MITTAG_LEFFLER_MAX_ARG};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{gamma_n, Params};
use crate::quadrature::{integrate, radial_power_integral, unit_sphere_area};

/// Radius beyond which e^{-r²/4} r^2 is below 1e-19.
const RADIAL_CUTOFF: f64 = 14.0;
/// Absolute tolerance handed to the adaptive quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-13;

fn gaussian_prefactor(n_dim: usize) -> f64 {
    (4.0 * PI).powf(-(n_dim as f64) / 2.0) * unit_sphere_area(n_dim)
}

fn check_dim(n_dim: usize) -> Result<()> {
    if !(1..=3).contains(&n_dim) {
        return Err(Error::Domain(format!("dimension must be 1, 2 or 3 (got {n_dim})")));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("q must lie in (0,1) (got {q})")));
    }
    Ok(())
}

/// `(4π)^{-N/2} ∫ e^{-|z|²/4} |z|^{-s} f(|z|) dz` for radial `f`.
fn gaussian_radial<F: Fn(f64) -> f64>(n_dim: usize, singular_power: f64, f: F) -> Result<f64> {
    let e = n_dim as f64 - 1.0 - singular_power;
    let est = radial_power_integral(e, |r| (-r * r / 4.0).exp() * f(r), RADIAL_CUTOFF, QUADRATURE_TOLERANCE)?;
    Ok(gaussian_prefactor(n_dim) * est.value)
}

/// η₀ = (4π)^{-N/2} ∫ e^{-|z|²/4} (1+|z|)^{-γ/(1-q)} dz.
pub fn eta0(q: f64, gamma: f64, n_dim: usize) -> Result<f64> {
    Params::new(n_dim, q, gamma).map_err(to_domain)?;
    let p = gamma / (1.0 - q);
    gaussian_radial(n_dim, 0.0, |r| (1.0 + r).powf(-p))
}

/// η₁ = (4π)^{-N/2} ∫ e^{-|y|²/4} |y|^{-γ} dy
///    = (4π)^{-N/2} |S^{N-1}| 2^{N-1-γ} Γ((N-γ)/2).
pub fn eta1(gamma: f64, n_dim: usize) -> Result<f64> {
    check_dim(n_dim)?;
    check_integrable(gamma, n_dim)?;
    let nf = n_dim as f64;
    Ok(gaussian_prefactor(n_dim) * 2f64.powf(nf - 1.0 - gamma) * gamma_fn((nf - gamma) / 2.0)?)
}

/// η₁ by adaptive radial quadrature, the independent route to [`eta1`].
pub fn eta1_quadrature(gamma: f64, n_dim: usize) -> Result<f64> {
    check_dim(n_dim)?;
    check_integrable(gamma, n_dim)?;
    gaussian_radial(n_dim, gamma, |_| 1.0)
}

fn check_integrable(gamma: f64, n_dim: usize) -> Result<()> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!("gamma must be non-negative (got {gamma})")));
    }
    if gamma >= n_dim as f64 {
        return Err(Error::Domain(format!(
            "|y|^-{gamma} is not locally integrable in dimension {n_dim}: the integral diverges"
        )));
    }
    Ok(())
}

/// η₂ = (4π)^{-N/2} 2^{γ/2} [∫_{|y|≥1} e^{-|y|²/4} dy + ∫_{|y|≤1} e^{-|y|²/4}|y|^{-γ} dy].
pub fn eta2(gamma: f64, n_dim: usize) -> Result<f64> {
    check_dim(n_dim)?;
    check_integrable(gamma, n_dim)?;
    let e_inner = n_dim as f64 - 1.0 - gamma;
    let inner = radial_power_integral(e_inner, |r| (-r * r / 4.0).exp(), 1.0, QUADRATURE_TOLERANCE)?;
    let nm1 = n_dim as i32 - 1;
    let outer = integrate(
        |r| r.powi(nm1) * (-r * r / 4.0).exp(),
        1.0,
        RADIAL_CUTOFF,
        QUADRATURE_TOLERANCE,
        1e-15,
    )?;
    Ok(gaussian_prefactor(n_dim) * 2f64.powf(gamma / 2.0) * (inner.value + outer.value))
}

/// η_k = (4π)^{-N/2} ∫ e^{-|w|²/4} (1+|w|)^{-γ} (2+|w|)^{-γq(1-q^k)/(1-q)} dw.
pub fn eta_k(q: f64, gamma: f64, n_dim: usize, k: u32) -> Result<f64> {
    Params::new(n_dim, q, gamma).map_err(to_domain)?;
    if k == 0 {
        return Err(Error::Domain("eta_k needs k ≥ 1".into()));
    }
    let second = gamma * q * (1.0 - q.powi(k as i32)) / (1.0 - q);
    eta_k_with_exponent(gamma, n_dim, second)
}

/// k → ∞ limit of η_k: second exponent γq/(1-q).
pub fn eta_k_limit(q: f64, gamma: f64, n_dim: usize) -> Result<f64> {
    Params::new(n_dim, q, gamma).map_err(to_domain)?;
    eta_k_with_exponent(gamma, n_dim, gamma * q / (1.0 - q))
}

fn eta_k_with_exponent(gamma: f64, n_dim: usize, second: f64) -> Result<f64> {
    gaussian_radial(n_dim, 0.0, |r| (1.0 + r).powf(-gamma) * (2.0 + r).powf(-second))
}

/// One row of the η_k versus η₀ comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtaComparison {
    pub q: f64,
    pub gamma: f64,
    pub n_dim: usize,
    pub k: u32,
    pub eta_k: f64,
    pub eta0: f64,
    pub eta_k_at_least_eta0: bool,
}

/// Tabulates η_k against η₀; the bound with η₀ in the C_k recursion needs
/// η_k ≥ η₀, which is recorded here rather than assumed.
pub fn compare_eta_k_eta0(qs: &[f64], gammas: &[f64], n_dim: usize, ks: &[u32]) -> Result<Vec<EtaComparison>> {
    let mut rows = Vec::new();
    for &q in qs {
        for &gamma in gammas {
            let e0 = eta0(q, gamma, n_dim)?;
            for &k in ks {
                let ek = eta_k(q, gamma, n_dim, k)?;
                rows.push(EtaComparison {
                    q,
                    gamma,
                    n_dim,
                    k,
                    eta_k: ek,
                    eta0: e0,
                    eta_k_at_least_eta0: ek >= e0,
                });
            }
        }
    }
    Ok(rows)
}

fn beta_exponents(q: f64, gamma: f64) -> Result<(f64, f64)> {
    check_q(q)?;
    if !(0.0..2.0).contains(&gamma) {
        return Err(Error::Domain(format!("beta needs 0 ≤ gamma < 2 (got {gamma})")));
    }
    Ok(((2.0 - gamma) / (2.0 * (1.0 - q)), 1.0 - gamma / 2.0))
}

/// β(γ) = ∫_0^1 σ^{-1+(2-γ)/(2(1-q))} (1-σ)^{-γ/2} dσ by quadrature,
/// split at σ = 1/2 with each endpoint factor removed by substitution.
pub fn beta_gamma(q: f64, gamma: f64) -> Result<f64> {
    let (a, b) = beta_exponents(q, gamma)?;
    let left = radial_power_integral(a - 1.0, |s| (1.0 - s).powf(b - 1.0), 0.5, QUADRATURE_TOLERANCE)?;
    let right = radial_power_integral(b - 1.0, |s| (1.0 - s).powf(a - 1.0), 0.5, QUADRATURE_TOLERANCE)?;
    Ok(left.value + right.value)
}

/// B((2-γ)/(2(1-q)), 1-γ/2) through the Gamma function.
pub fn beta_gamma_closed_form(q: f64, gamma: f64) -> Result<f64> {
    let (a, b) = beta_exponents(q, gamma)?;
    beta_fn(a, b)
}

/// Λ(γ) = q β(γ) η₂(γ) / ((1-q) η₀(γ)).
pub fn lambda_gamma(q: f64, gamma: f64, n_dim: usize) -> Result<f64> {
    Params::new(n_dim, q, gamma).map_err(to_domain)?;
    let beta = beta_gamma(q, gamma)?;
    let e2 = eta2(gamma, n_dim)?;
    let e0 = eta0(q, gamma, n_dim)?;
    Ok(q * beta * e2 / ((1.0 - q) * e0))
}

/// Result of the γ* search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaStar {
    pub q: f64,
    pub n_dim: usize,
    /// Smallest root of Λ(γ) = 1, or γ_N when there is none.
    pub gamma_star: f64,
    pub lambda_at_gamma_star: f64,
    /// False when Λ < 1 on the whole scan.
    pub crossed: bool,
}

const GAMMA_STAR_SCAN: usize = 256;

/// Smallest γ in (0, γ_N) with Λ(γ) = 1: a 256-point scan, then bisection
/// until |Λ - 1| ≤ 1e-8.
pub fn gamma_star(q: f64, n_dim: usize) -> Result<GammaStar> {
    check_q(q)?;
    check_dim(n_dim)?;
    let gn = gamma_n(n_dim);
    let at = |g: f64| lambda_gamma(q, g, n_dim);
    let mut lo = 0.0;
    let mut lo_val = q;
    for i in 1..=GAMMA_STAR_SCAN {
        let g = gn * i as f64 / (GAMMA_STAR_SCAN + 1) as f64;
        let v = at(g)?;
        if v >= 1.0 {
            let (mut a, mut b) = (lo, g);
            let mut best = (g, v);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let vm = at(mid)?;
                best = (mid, vm);
                if (vm - 1.0).abs() <= 1e-8 || b - a < 1e-15 {
                    break;
                }
                if vm < 1.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let _ = lo_val;
            return Ok(GammaStar {
                q,
                n_dim,
                gamma_star: best.0,
                lambda_at_gamma_star: best.1,
                crossed: true,
            });
        }
        lo = g;
        lo_val = v;
    }
    Ok(GammaStar {
        q,
        n_dim,
        gamma_star: gn,
        lambda_at_gamma_star: lo_val,
        crossed: false,
    })
}

/// The C_k lower-bound recursion C_{k+1} = η₀ C_k^q (1-q)/(1-q^{k+1}).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CkSequence {
    /// C_1, …, C_{k_max}.
    pub values: Vec<f64>,
    /// Closed-form lower bound 𝖢^{q^k} [(1-q)η₀]^{(1-q^{k-1})/(1-q)} for each k.
    pub lower_bounds: Vec<f64>,
    /// [(1-q)η₀]^{1/(1-q)}, the coefficient of the limiting lower bound.
    pub fixed_point: f64,
    /// |C_{k_max} - fixed_point|.
    pub residual: f64,
    /// Base constant 𝖢 with C_1 = 𝖢^q.
    pub base: f64,
}

pub fn ck_sequence(q: f64, gamma: f64, n_dim: usize, c1: f64, k_max: usize) -> Result<CkSequence> {
    Params::new(n_dim, q, gamma).map_err(to_domain)?;
    if !(c1 > 0.0) || !c1.is_finite() {
        return Err(Error::Numerical(format!("C_1 must be finite and positive (got {c1})")));
    }
    if k_max < 2 {
        return Err(Error::Domain(format!("k_max must be at least 2 (got {k_max})")));
    }
    let e0 = eta0(q, gamma, n_dim)?;
    let contraction = (1.0 - q) * e0;
    let base = c1.powf(1.0 / q);
    let mut values = Vec::with_capacity(k_max);
    let mut lower_bounds = Vec::with_capacity(k_max);
    let mut c = c1;
    for k in 1..=k_max {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::Numerical(format!(
                "C_{k} left the positive reals ({c}); started from C_1 = {c1}"
            )));
        }
        values.push(c);
        let qk = q.powi(k as i32);
        let qkm1 = q.powi(k as i32 - 1);
        lower_bounds.push(base.powf(qk) * contraction.powf((1.0 - qkm1) / (1.0 - q)));
        c = e0 * c.powf(q) * (1.0 - q) / (1.0 - q * qk);
    }
    let fixed_point = contraction.powf(1.0 / (1.0 - q));
    let residual = (values[k_max - 1] - fixed_point).abs();
    Ok(CkSequence {
        values,
        lower_bounds,
        fixed_point,
        residual,
        base,
    })
}

/// η₀, η₁, η₂, β and Λ for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    #[serde(flatten)]
    pub params: Params,
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub beta: f64,
    pub lambda: f64,
    #[serde(rename = "tolerance")]
    pub quadrature_tolerance: f64,
}

impl ConstantsReport {
    pub fn compute(params: &Params) -> Result<Self> {
        params.validate()?;
        let Params { n_dim, q, gamma } = *params;
        let eta0 = eta0(q, gamma, n_dim)?;
        let eta2 = eta2(gamma, n_dim)?;
        let beta = beta_gamma(q, gamma)?;
        Ok(Self {
            params: *params,
            eta0,
            eta1: eta1(gamma, n_dim)?,
            eta2,
            beta,
            lambda: q * beta * eta2 / ((1.0 - q) * eta0),
            quadrature_tolerance: 1e-10,
        })
    }
}

fn to_domain(e: Error) -> Error {
    match e {
        Error::Parameter(m) => Error::Domain(m),
        other => other,
    }
}
