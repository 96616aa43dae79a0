//! Gamma function and the series form of the Mittag-Leffler function.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is already shifted by -1
    let mut t = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        t += c / (x + i as f64);
    }
    t
}

/// Euler Gamma function for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "gamma_fn needs a finite positive argument (got {x})"
        )));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_positive(1.0 - x));
    }
    if x == x.floor() && x <= 23.0 {
        // exact factorials
        return (1..x as u64).map(|k| k as f64).product();
    }
    let xm = x - 1.0;
    let w = xm + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * w.powf(xm + 0.5) * (-w).exp() * lanczos_sum(xm)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "ln_gamma needs a finite positive argument (got {x})"
        )));
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    if x < 100.0 {
        return gamma_positive(x).ln();
    }
    let xm = x - 1.0;
    let w = xm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm + 0.5) * w.ln() - w + lanczos_sum(xm).ln()
}

/// Beta function via the Gamma function.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    let lb = ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?;
    Ok(lb.exp())
}

/// Double-double number (hi + lo with |lo| ≤ ulp(hi)/2).
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Self { hi, lo }
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Self::new(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Self::new(-q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add(Self::new(q3))
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Γ(x) in double-double for 1 ≤ x ≤ 170: Γ(f)·Π (f+i) with f ∈ [1, 2).
/// Γ(f) is exact when x is an integer.
fn gamma_dd(x: f64) -> Dd {
    let m = (x.floor() - 1.0).max(0.0);
    let f = x - m;
    let mut acc = if f == 1.0 {
        Dd::new(1.0)
    } else {
        Dd::new(gamma_positive(f))
    };
    let mut i = 0.0;
    while i < m {
        let (s, e) = two_sum(f, i);
        acc = acc.mul(Dd { hi: s, lo: e });
        i += 1.0;
    }
    acc
}

/// Largest |z| for which the series is evaluated.
pub const MITTAG_LEFFLER_MAX_ARG: f64 = 50.0;

/// E_σ(z) = Σ z^n / Γ(nσ + 1), summed in double-double arithmetic.
///
/// Terms are added until, past the largest term, the next one falls below
/// 1e-17·|partial|. Arguments with |z| > 50, or values that would
/// overflow f64, are rejected.
pub fn mittag_leffler(sigma: f64, z: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "Mittag-Leffler index must be positive (got {sigma})"
        )));
    }
    if !z.is_finite() || z.abs() > MITTAG_LEFFLER_MAX_ARG {
        return Err(Error::Regime(format!(
            "|z| = {} exceeds the series bound {MITTAG_LEFFLER_MAX_ARG}",
            z.abs()
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let ln_abs_z = z.abs().ln();
    let zd = Dd::new(z);
    let mut power = Dd::new(1.0);
    let mut sum = Dd::new(0.0);
    let mut prev_log = f64::INFINITY;
    let mut past_peak = false;
    for n in 0..200_000u32 {
        let arg = n as f64 * sigma + 1.0;
        let log_mag = n as f64 * ln_abs_z - ln_gamma_positive(arg);
        if log_mag > 700.0 {
            return Err(Error::Regime(format!(
                "term {n} of E_{sigma}({z}) overflows (log magnitude {log_mag:.1})"
            )));
        }
        let term = if arg <= 170.0 && n as f64 * ln_abs_z < 700.0 {
            power.div(gamma_dd(arg))
        } else {
            let sign = if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            Dd::new(sign * log_mag.exp())
        };
        if n > 0 && log_mag < prev_log {
            past_peak = true;
        }
        if past_peak && term.value().abs() <= 1e-17 * sum.value().abs() {
            return Ok(sum.value());
        }
        sum = sum.add(term);
        prev_log = log_mag;
        if power.value().is_finite() {
            power = power.mul(zd);
        }
    }
    Err(Error::Numerical(format!("E_{sigma}({z}) series did not terminate")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_classical_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-15);
        #[allow(clippy::excessive_precision)]
        let quarter = 3.625_609_908_221_908_311_9;
        assert!((gamma_fn(0.25).unwrap() / quarter - 1.0).abs() < 1e-13);
        #[allow(clippy::excessive_precision)]
        let third = 2.678_938_534_707_747_633_7;
        assert!((gamma_fn(1.0 / 3.0).unwrap() / third - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gamma_recurrence_over_range() {
        let mut x = 0.05;
        while x < 49.0 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-12, "x = {x}");
            x += 0.137;
        }
    }

    #[test]
    fn gamma_rejects_non_positive() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn large_factorial() {
        let exact: f64 = (1..50).map(|k| k as f64).product();
        assert!((gamma_fn(50.0).unwrap() / exact - 1.0).abs() < 1e-12);
        assert!((ln_gamma(150.0).unwrap() - (1..150).map(|k| (k as f64).ln()).sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn mittag_leffler_special_cases() {
        assert!((mittag_leffler(1.0, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-14);
        for s in [0.3, 0.5, 1.0, 2.5] {
            assert_eq!(mittag_leffler(s, 0.0).unwrap(), 1.0);
        }
        assert!((mittag_leffler(2.0, 1.0).unwrap() - 1f64.cosh()).abs() < 1e-14);
        assert!((mittag_leffler(2.0, 9.0).unwrap() / 3f64.cosh() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn mittag_leffler_exponential_with_cancellation() {
        for z in [-20.0, -13.5, -5.0, 7.25, 20.0] {
            let v = mittag_leffler(1.0, z).unwrap();
            let e = f64::exp(z);
            assert!((v - e).abs() <= 1e-10 * e.max(1e-300) + 1e-24, "z = {z}: {v} vs {e}");
        }
    }

    #[test]
    fn mittag_leffler_half_matches_erfc_form() {
        // E_{1/2}(z) = exp(z^2) erfc(-z); erfc(-1) = 1.842700792949715
        #[allow(clippy::excessive_precision)]
        let erfc_minus_one = 1.842_700_792_949_714_869_3;
        let v = mittag_leffler(0.5, 1.0).unwrap();
        assert!((v / (1f64.exp() * erfc_minus_one) - 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn mittag_leffler_small_index() {
        // 60-digit direct sums of the series
        let v = mittag_leffler(0.25, 3.625_609_908_221_908_7).unwrap();
        assert!((v / 4.413_546_009_868_115e75 - 1.0).abs() < 1e-10, "{v}");
        let v = mittag_leffler(1.0 / 3.0, 2.0).unwrap();
        assert!((v / 8_942.431_293_947_531 - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn mittag_leffler_regime_errors() {
        assert!(matches!(mittag_leffler(1.0, 51.0), Err(Error::Regime(_))));
        assert!(matches!(mittag_leffler(0.5, 40.0), Err(Error::Regime(_))));
        assert!(matches!(mittag_leffler(0.0, 1.0), Err(Error::Domain(_))));
    }
}
