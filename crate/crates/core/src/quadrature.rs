//! One-dimensional quadrature: Gauss–Legendre rules of arbitrary order and a
//! globally adaptive 15-point Gauss–Kronrod integrator.
//!
//! The radial helpers reduce integrals of radial functions over R^N to a
//! single integral in the radius, with the `r^e` endpoint factor removed by
//! the substitution `r = s^(1/(e+1))` on the first unit panel.

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence; accurate to a few ulps
    /// for every order used in this crate (up to a few hundred points).
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped affinely onto [a, b].
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Kronrod panel: (integral, error estimate).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    let err = ((kronrod - gauss) * half).abs();
    (kronrod * half, err)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const MAX_PANELS: usize = 4000;

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Panels are bisected in order of decreasing error estimate until the total
/// estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut panels: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    let (v, e) = kronrod15(&f, a, b);
    panels.push((a, b, v, e));
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let error: f64 = panels.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::Numerical(format!("non-finite integrand on [{a}, {b}]")));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Numerical(format!(
                "adaptive quadrature on [{a}, {b}] stalled at error {error:e} (value {value})"
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one panel");
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // panel too narrow to split further
            let value: f64 = panels.iter().map(|p| p.2).sum::<f64>() + kronrod15(&f, pa, pb).0;
            return Ok(Estimate { value, error });
        }
        let (v1, e1) = kronrod15(&f, pa, mid);
        let (v2, e2) = kronrod15(&f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// `∫_0^R r^e f(r) dr` for `e > -1` and smooth `f`.
///
/// The first unit panel is integrated in `s = r^(e+1)`, which turns the
/// endpoint factor into the constant `1/(e+1)`.
pub fn radial_power_integral<F: Fn(f64) -> f64>(e: f64, f: F, r_max: f64, abs_tol: f64) -> Result<Estimate> {
    if e <= -1.0 {
        return Err(Error::Domain(format!("radial power r^{e} is not integrable at 0")));
    }
    let p = 1.0 / (e + 1.0);
    let first_end = r_max.min(1.0);
    let s_end = first_end.powf(e + 1.0);
    let head = integrate(|s| p * f(s.powf(p)), 0.0, s_end, 0.5 * abs_tol, 1e-14)?;
    if r_max <= 1.0 {
        return Ok(head);
    }
    let tail = integrate(|r| r.powf(e) * f(r), 1.0, r_max, 0.5 * abs_tol, 1e-14)?;
    Ok(Estimate {
        value: head.value + tail.value,
        error: head.error + tail.error,
    })
}

/// Area of the unit sphere S^{N-1} in R^N.
pub fn unit_sphere_area(n_dim: usize) -> f64 {
    use std::f64::consts::PI;
    match n_dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        n => 2.0 * PI.powf(n as f64 / 2.0) / crate::constants::gamma_fn(n as f64 / 2.0).unwrap_or(f64::NAN),
    }
}
