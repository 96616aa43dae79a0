//! Checks that need no grid: the singular Gronwall lemma, the γ → 0 limit of
//! Λ and the pointwise inequalities of g_n and positive parts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CheckReport, ParamMap, Witness, WorstCases};
use crate::constants::{gamma_fn, lambda_gamma, mittag_leffler, MITTAG_LEFFLER_MAX_ARG};
use crate::error::{Error, Result};
use crate::scheme::{g_n, g_n_lipschitz, positive_part};

/// Relative tolerance of [`check_gronwall`].
pub const GRONWALL_TOLERANCE: f64 = 1e-4;

/// ψ(t) ≤ A + M ∫_0^t ψ(τ)(t-τ)^{-α} dτ on [0, T].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GronwallInstance {
    pub a: f64,
    pub m: f64,
    pub alpha: f64,
    pub t: f64,
}

impl GronwallInstance {
    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::Parameter(format!("A must be non-negative (got {})", self.a)));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::Parameter(format!("M must be positive (got {})", self.m)));
        }
        if !(self.alpha >= 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in [0,1) (got {})",
                self.alpha
            )));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Parameter(format!("T must be positive (got {})", self.t)));
        }
        Ok(())
    }

    /// A·E_{1-α}(M Γ(1-α) t^{1-α}).
    pub fn envelope(&self, t: f64) -> Result<f64> {
        let e = 1.0 - self.alpha;
        Ok(self.a * mittag_leffler(e, self.m * gamma_fn(e)? * t.powf(e))?)
    }
}

/// Extremal ψ solving the equality Volterra equation on `nodes` uniform
/// steps, by product trapezoidal integration: ψ is piecewise linear and
/// the kernel (t-τ)^{-α} is integrated exactly against it.
pub fn gronwall_extremal(inst: &GronwallInstance, nodes: usize) -> Result<Vec<(f64, f64)>> {
    inst.validate()?;
    if nodes < 64 {
        return Err(Error::Parameter(format!(
            "the Volterra solve needs at least 64 steps (got {nodes})"
        )));
    }
    let h = inst.t / nodes as f64;
    let e = 1.0 - inst.alpha;
    // moments of u^{-α} over [kh, (k+1)h]
    let pow0: Vec<f64> = (0..=nodes).map(|k| (k as f64 * h).powf(e) / e).collect();
    let pow1: Vec<f64> = (0..=nodes).map(|k| (k as f64 * h).powf(e + 1.0) / (e + 1.0)).collect();
    // weight of ψ_j (left) and ψ_{j+1} (right) on the panel at lag k = n-1-j
    let mut left = Vec::with_capacity(nodes);
    let mut right = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let a = k as f64 * h;
        let b = a + h;
        let i0 = pow0[k + 1] - pow0[k];
        let i1 = pow1[k + 1] - pow1[k];
        left.push((i1 - a * i0) / h);
        right.push((b * i0 - i1) / h);
    }
    let diag = inst.m * right[0];
    if !(diag < 1.0) {
        return Err(Error::Numerical(format!(
            "Volterra step is not solvable: M·w = {diag} ≥ 1; increase the number of steps"
        )));
    }
    let mut psi = vec![inst.a];
    for n in 1..=nodes {
        let mut s = 0.0;
        for j in 0..n {
            let k = n - 1 - j;
            s += left[k] * psi[j];
            if j + 1 < n {
                s += right[k] * psi[j + 1];
            }
        }
        let v = (inst.a + inst.m * s) / (1.0 - diag);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                node: n,
                position: vec![n as f64 * h],
                value: v,
            });
        }
        psi.push(v);
    }
    Ok(psi.into_iter().enumerate().map(|(k, v)| (k as f64 * h, v)).collect())
}

/// The extremal ψ stays below the Mittag-Leffler envelope, relative margin
/// (envelope - ψ)/envelope; with A = 0 the computed ψ vanishes.
pub fn check_gronwall(inst: &GronwallInstance, nodes: usize) -> Result<CheckReport> {
    inst.validate()?;
    let e = 1.0 - inst.alpha;
    let z = inst.m * gamma_fn(e)? * inst.t.powf(e);
    if z > MITTAG_LEFFLER_MAX_ARG {
        return Err(Error::Regime(format!(
            "envelope argument MΓ(1-α)T^(1-α) = {z} exceeds {MITTAG_LEFFLER_MAX_ARG}"
        )));
    }
    let psi = gronwall_extremal(inst, nodes)?;
    let mut worst = WorstCases::new(3);
    if inst.a > 0.0 {
        for &(t, v) in &psi {
            let env = inst.envelope(t)?;
            let margin = (env - v) / env;
            worst.offer(margin, || {
                Witness::new(format!("t={t}"), &[("psi", v), ("envelope", env)])
            });
        }
    }
    let zero = GronwallInstance { a: 0.0, ..*inst };
    let sup_zero = gronwall_extremal(&zero, nodes)?
        .iter()
        .fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    if sup_zero > 0.0 {
        worst.offer(-(GRONWALL_TOLERANCE + sup_zero), || {
            Witness::new("A=0", &[("sup_psi", sup_zero)])
        });
    }
    let params = ParamMap::new()
        .with("A", inst.a)
        .with("M", inst.m)
        .with("alpha", inst.alpha)
        .with("T", inst.t)
        .with("nodes", nodes)
        .with("sup_psi_at_zero_data", sup_zero)
        .build();
    Ok(CheckReport::new(
        "gronwall",
        params,
        worst.worst(),
        GRONWALL_TOLERANCE,
        worst.into_witnesses(),
    ))
}

/// |Λ(γ_i) - q| decreases along the list and ends at most 1e-3.
///
/// Margin is the smaller of the least decrement and 1e-3 - |Λ(γ_last) - q|.
pub fn check_lambda_limit(q: f64, n_dim: usize, gammas: &[f64]) -> Result<CheckReport> {
    if gammas.is_empty() || gammas.iter().any(|&g| !(g > 0.0)) || gammas.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Input(format!(
            "gammas must be positive and strictly decreasing (got {gammas:?})"
        )));
    }
    let mut dev = Vec::with_capacity(gammas.len());
    for &g in gammas {
        dev.push((lambda_gamma(q, g, n_dim)? - q).abs());
    }
    let mut worst = WorstCases::new(3);
    for (k, pair) in dev.windows(2).enumerate() {
        let margin = pair[0] - pair[1];
        worst.offer(margin, || {
            Witness::new(
                format!("gamma={} -> {}", gammas[k], gammas[k + 1]),
                &[("deviation_before", pair[0]), ("deviation_after", pair[1])],
            )
        });
    }
    let last = *dev.last().expect("non-empty");
    worst.offer(1e-3 - last, || {
        Witness::new(format!("gamma={}", gammas[gammas.len() - 1]), &[("deviation", last)])
    });
    let params = ParamMap::new()
        .with("q", q)
        .with("n_dim", n_dim)
        .with("gammas", gammas)
        .with("deviations", &dev)
        .build();
    Ok(CheckReport::new(
        "lambda_limit",
        params,
        worst.worst(),
        0.0,
        worst.into_witnesses(),
    ))
}

/// [a^q - b^q]₊ ≤ ([a-b]₊)^q and [g_n(a) - g_n(b)]₊ ≤ L_n [a-b]₊ on random
/// pairs, with zero tolerance.
pub fn check_positive_part_sweep(q: f64, samples: usize, seed: u64) -> Result<CheckReport> {
    check_q(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = WorstCases::new(3);
    for _ in 0..samples {
        let a: f64 = rng.random_range(0.0..4.0);
        let b: f64 = rng.random_range(0.0..4.0);
        let n: u64 = rng.random_range(1..=256);
        let conc = positive_part(a - b).powf(q) - positive_part(a.powf(q) - b.powf(q));
        worst.offer(conc, || {
            Witness::new(format!("a={a} b={b}"), &[("concavity_slack", conc)])
        });
        let lip = g_n_lipschitz(n, q) * positive_part(a - b) - positive_part(g_n(n, q, a)? - g_n(n, q, b)?);
        worst.offer(lip, || {
            Witness::new(format!("a={a} b={b} n={n}"), &[("lipschitz_slack", lip)])
        });
    }
    let params = ParamMap::new()
        .with("q", q)
        .with("samples", samples)
        .with("seed", seed)
        .build();
    Ok(CheckReport::new(
        "positive_part",
        params,
        worst.worst(),
        0.0,
        worst.into_witnesses(),
    ))
}

/// g_n ≤ g_{n+1} ≤ r^q and |g_n(r) - g_n(s)| ≤ (1+q)(2n)^{1-q}|r-s| exactly
/// on random samples, and sup_r |g_n - r^q| smaller at n = 64 than at n = 8.
pub fn check_g_n_properties(q: f64, samples: usize, seed: u64) -> Result<CheckReport> {
    check_q(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = WorstCases::new(3);
    for _ in 0..samples {
        let n: u64 = rng.random_range(1..=512);
        let r: f64 = rng.random_range(0.0..4.0);
        let s: f64 = rng.random_range(0.0..4.0);
        let (gr, gr1, gs) = (g_n(n, q, r)?, g_n(n + 1, q, r)?, g_n(n, q, s)?);
        let m1 = gr1 - gr;
        worst.offer(m1, || {
            Witness::new(format!("n={n} r={r}"), &[("g_n", gr), ("g_n+1", gr1)])
        });
        let m2 = r.powf(q) - gr1;
        worst.offer(m2, || {
            Witness::new(format!("n={} r={r}", n + 1), &[("g_n", gr1), ("r^q", r.powf(q))])
        });
        let m3 = g_n_lipschitz(n, q) * (r - s).abs() - (gr - gs).abs();
        worst.offer(m3, || {
            Witness::new(format!("n={n} r={r} s={s}"), &[("lipschitz_slack", m3)])
        });
    }
    let gap = |n: u64| -> Result<f64> {
        let mut sup = 0.0f64;
        for k in 0..=4000 {
            let r = 4.0 * k as f64 / 4000.0;
            sup = sup.max(r.powf(q) - g_n(n, q, r)?);
        }
        Ok(sup)
    };
    let (g8, g64) = (gap(8)?, gap(64)?);
    worst.offer(g8 - g64, || Witness::new("sup gap", &[("n=8", g8), ("n=64", g64)]));
    let params = ParamMap::new()
        .with("q", q)
        .with("samples", samples)
        .with("seed", seed)
        .with("sup_gap_n8", g8)
        .with("sup_gap_n64", g64)
        .build();
    Ok(CheckReport::new(
        "g_n_properties",
        params,
        worst.worst(),
        0.0,
        worst.into_witnesses(),
    ))
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Parameter(format!("q must lie in (0,1) (got {q})")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_gronwall_is_exponential() {
        let inst = GronwallInstance {
            a: 2.0,
            m: 1.5,
            alpha: 0.0,
            t: 1.0,
        };
        let psi = gronwall_extremal(&inst, 2048).unwrap();
        for (t, v) in psi {
            assert!((v - 2.0 * (1.5 * t).exp()).abs() < 1e-5 * v);
        }
        let r = check_gronwall(&inst, 2048).unwrap();
        assert!(r.pass, "{}", r.summary_line());
        assert!(r.worst_margin.abs() < 1e-5);
    }

    #[test]
    fn zero_data_stays_zero() {
        let inst = GronwallInstance {
            a: 0.0,
            m: 1.0,
            alpha: 0.7,
            t: 2.0,
        };
        assert!(gronwall_extremal(&inst, 256).unwrap().iter().all(|&(_, v)| v == 0.0));
        assert!(check_gronwall(&inst, 256).unwrap().pass);
    }

    #[test]
    fn rejects_bad_instances() {
        let bad = GronwallInstance {
            a: 1.0,
            m: 1.0,
            alpha: 1.0,
            t: 1.0,
        };
        assert!(check_gronwall(&bad, 128).is_err());
        let ok = GronwallInstance { alpha: 0.5, ..bad };
        assert!(gronwall_extremal(&ok, 10).is_err());
    }

    #[test]
    fn sweeps_pass_exactly() {
        assert!(check_positive_part_sweep(0.4, 2000, 1).unwrap().pass);
        assert!(check_g_n_properties(0.4, 2000, 1).unwrap().pass);
        assert!(check_lambda_limit(0.2, 1, &[0.1, 0.01, 0.001]).unwrap().pass);
        assert!(check_lambda_limit(0.5, 1, &[0.01, 0.1]).is_err());
    }

    #[test]
    fn lambda_approaches_q_linearly() {
        // |Λ(10⁻³) - ½| from 30-digit quadrature of the three constants
        let r = check_lambda_limit(0.5, 1, &[0.1, 0.01, 0.001]).unwrap();
        let dev = r.parameters["deviations"].as_array().unwrap();
        assert!((dev[2].as_f64().unwrap() - 1.7566491213288945e-3).abs() < 1e-9);
        assert!(dev.windows(2).all(|w| w[0].as_f64() > w[1].as_f64()));
        assert!(!r.pass);
    }
}
