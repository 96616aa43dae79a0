//! Brute-force oracles shared by the integration tests and the acceptance
//! target. Everything here is midpoint sums on substituted variables, kept
//! apart from the adaptive quadrature used by the library.

#![allow(dead_code)]

use std::f64::consts::PI;

pub const ORACLE_NODES: usize = 1_000_000;
const RADIUS: f64 = 12.0;

fn sphere(n_dim: usize) -> f64 {
    match n_dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("dimension {n_dim}"),
    }
}

fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        sum += f(a + (i as f64 + 0.5) * h);
    }
    sum * h
}

/// ∫_0^R r^{e-1} g(r) dr. A singular power (e < 1) is absorbed by r = u^{1/e},
/// which leaves g(u^{1/e}) with a bounded derivative; otherwise the sum runs
/// in r directly.
fn power_weighted(e: f64, g: impl Fn(f64) -> f64, r_max: f64) -> f64 {
    if e < 1.0 {
        let inv = 1.0 / e;
        midpoint(|u| g(u.powf(inv)), 0.0, r_max.powf(e), ORACLE_NODES) * inv
    } else {
        midpoint(|r| r.powf(e - 1.0) * g(r), 0.0, r_max, ORACLE_NODES)
    }
}

/// (4π)^{-N/2} ∫ e^{-|z|²/4} |z|^{-s} f(|z|) dz.
pub fn gaussian_radial(n_dim: usize, s: f64, f: impl Fn(f64) -> f64) -> f64 {
    let e = n_dim as f64 - s;
    let pref = (4.0 * PI).powf(-(n_dim as f64) / 2.0) * sphere(n_dim);
    pref * power_weighted(e, |r| (-r * r / 4.0).exp() * f(r), RADIUS)
}

pub fn eta0(q: f64, gamma: f64, n_dim: usize) -> f64 {
    let p = gamma / (1.0 - q);
    gaussian_radial(n_dim, 0.0, |r| (1.0 + r).powf(-p))
}

pub fn eta1(gamma: f64, n_dim: usize) -> f64 {
    gaussian_radial(n_dim, gamma, |_| 1.0)
}

pub fn eta2(gamma: f64, n_dim: usize) -> f64 {
    let pref = (4.0 * PI).powf(-(n_dim as f64) / 2.0) * sphere(n_dim);
    let nf = n_dim as f64;
    let inner = power_weighted(nf - gamma, |r| (-r * r / 4.0).exp(), 1.0);
    let outer = midpoint(|r| r.powf(nf - 1.0) * (-r * r / 4.0).exp(), 1.0, RADIUS, ORACLE_NODES);
    pref * 2f64.powf(gamma / 2.0) * (inner + outer)
}

pub fn eta_k(q: f64, gamma: f64, n_dim: usize, k: u32) -> f64 {
    let second = gamma * q * (1.0 - q.powi(k as i32)) / (1.0 - q);
    gaussian_radial(n_dim, 0.0, |r| (1.0 + r).powf(-gamma) * (2.0 + r).powf(-second))
}

/// ∫_0^1 σ^{a-1} (1-σ)^{b-1} dσ split at ½, each endpoint power removed by
/// its own substitution.
pub fn beta_integral(a: f64, b: f64) -> f64 {
    let left = power_weighted(a, |s| (1.0 - s).powf(b - 1.0), 0.5);
    let right = power_weighted(b, |v| (1.0 - v).powf(a - 1.0), 0.5);
    left + right
}

pub fn beta_gamma(q: f64, gamma: f64) -> f64 {
    beta_integral((2.0 - gamma) / (2.0 * (1.0 - q)), 1.0 - gamma / 2.0)
}

pub fn lambda(q: f64, gamma: f64, n_dim: usize) -> f64 {
    q * beta_gamma(q, gamma) * eta2(gamma, n_dim) / ((1.0 - q) * eta0(q, gamma, n_dim))
}

/// Heat flow of e^{-a|x|²} in N dimensions.
pub fn gaussian_flow(a: f64, t: f64, x: &[f64]) -> f64 {
    let s = 1.0 + 4.0 * a * t;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    s.powf(-(x.len() as f64) / 2.0) * (-a * r2 / s).exp()
}

/// Γ(1/4) = 3.62560990822190831193…, rounded to f64.
pub const GAMMA_QUARTER: f64 = 3.625_609_908_221_908;

/// ((c^{1-q} + (1-q)t))^{1/(1-q)}, the solution of u' = u^q, u(0) = c.
pub fn separable_ode(c: f64, q: f64, t: f64) -> f64 {
    (c.powf(1.0 - q) + (1.0 - q) * t).powf(1.0 / (1.0 - q))
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
