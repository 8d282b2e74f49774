use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solver did not converge: {message} (bracket [{lo}, {hi}], {iterations} iterations)")]
    Solver {
        message: String,
        lo: f64,
        hi: f64,
        iterations: usize,
    },

    #[error("condition (C) fails: slice eigenvalue {0} is zero within tolerance")]
    ConditionC(f64),

    #[error("critical value {lambda} is not isolated (nearest neighbour at distance {gap})")]
    NotIsolated { lambda: f64, gap: f64 },

    #[error("symmetry breaking: cross-component projection {0} exceeds tolerance")]
    SymmetryBreaking(f64),

    #[error("periodic orbit search failed: {message}; residual trace {trace:?}")]
    Shooting { message: String, trace: Vec<f64> },

    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status associated with this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Unsupported(_)
            | Error::Config(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::Solver { .. }
            | Error::ConditionC(_)
            | Error::NotIsolated { .. }
            | Error::SymmetryBreaking(_)
            | Error::Shooting { .. } => 3,
            Error::Consistency(_) => 4,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Unsupported(_) => "unsupported",
            Error::Config(_) => "config",
            Error::Solver { .. } => "solver",
            Error::ConditionC(_) => "condition_c",
            Error::NotIsolated { .. } => "not_isolated",
            Error::SymmetryBreaking(_) => "symmetry_breaking",
            Error::Shooting { .. } => "shooting",
            Error::Consistency(_) => "consistency",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
