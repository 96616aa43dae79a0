use thiserror::Error;

/// Errors produced by the solver, the constants and the checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite sample {value} at node {node} (position {position:?})")]
    NonFinite {
        node: usize,
        position: Vec<f64>,
        value: f64,
    },

    #[error("grid mismatch: {0}")]
    Shape(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("picard iteration did not converge in window {window} after {iterations} sweeps (residual {residual:e})")]
    Convergence {
        window: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("scheme error: {0}")]
    Scheme(String),

    #[error("outside the series regime: {0}")]
    Regime(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Domain(_) => "domain",
            Error::NonFinite { .. } => "non_finite",
            Error::Shape(_) => "shape",
            Error::Truncation(_) => "truncation",
            Error::Degenerate(_) => "degenerate",
            Error::Convergence { .. } => "convergence",
            Error::Scheme(_) => "scheme",
            Error::Regime(_) => "regime",
            Error::Numerical(_) => "numerical",
            Error::Input(_) => "input",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
