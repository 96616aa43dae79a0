//! Built-in initial data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{sample, Grid, GridFunction};

/// Named initial data, parsed from `zero`, `const:c`, `bump`, `gauss:a`, `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    Zero,
    Const {
        value: f64,
    },
    /// exp(1 - 1/(1-|x|²)) on the unit ball, 0 outside; peak value 1.
    Bump,
    /// exp(-a|x|²).
    Gauss {
        a: f64,
    },
    /// 1 for x₁ > 0, 0 otherwise.
    Step,
}

impl InitialData {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match *self {
            InitialData::Zero => 0.0,
            InitialData::Const { value } => value,
            InitialData::Bump => {
                if r2 < 1.0 {
                    (1.0 - 1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            }
            InitialData::Gauss { a } => (-a * r2).exp(),
            InitialData::Step => {
                if x[0] > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<GridFunction> {
        sample(|x| self.eval(x), grid)
    }
}

impl FromStr for InitialData {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            let a = a.ok_or_else(|| Error::Usage(format!("u0 `{name}` needs a value, as in `{name}:1.0`")))?;
            a.parse::<f64>()
                .map_err(|_| Error::Usage(format!("u0 `{name}` has an unparsable value `{a}`")))
        };
        let data = match name {
            "zero" => InitialData::Zero,
            "bump" => InitialData::Bump,
            "step" => InitialData::Step,
            "const" => InitialData::Const { value: number(arg)? },
            "gauss" => InitialData::Gauss { a: number(arg)? },
            _ => {
                return Err(Error::Usage(format!(
                    "unknown u0 `{s}` (expected zero, const:c, bump, gauss:a or step)"
                )))
            }
        };
        if arg.is_some() && matches!(data, InitialData::Zero | InitialData::Bump | InitialData::Step) {
            return Err(Error::Usage(format!("u0 `{name}` takes no value")));
        }
        match data {
            InitialData::Const { value } if !(value >= 0.0 && value.is_finite()) => Err(Error::Usage(format!(
                "u0 const value must be finite and non-negative (got {value})"
            ))),
            InitialData::Gauss { a } if !(a > 0.0 && a.is_finite()) => {
                Err(Error::Usage(format!("u0 gauss rate must be positive (got {a})")))
            }
            d => Ok(d),
        }
    }
}

impl fmt::Display for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialData::Zero => write!(f, "zero"),
            InitialData::Const { value } => write!(f, "const:{value}"),
            InitialData::Bump => write!(f, "bump"),
            InitialData::Gauss { a } => write!(f, "gauss:{a}"),
            InitialData::Step => write!(f, "step"),
        }
    }
}
