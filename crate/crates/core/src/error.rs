use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("representation mismatch: expected {expected}, found {found}")]
    RepresentationMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("negative power s={s} applied to a field with mean {mean:e} (tolerance {tol:e})")]
    NegativePowerOnNonzeroMean { s: f64, mean: f64, tol: f64 },

    #[error("density 1+a is not positive (min {min:e}) in {field}")]
    DensityNonpositive { min: f64, field: &'static str },

    #[error("temperature 1+theta is not positive (min {min:e})")]
    TemperatureNonpositive { min: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("CFL violated at t={t}: dt={dt} exceeds limit {limit}")]
    CflViolation { t: f64, dt: f64, limit: f64 },

    #[error("run aborted at t={t}: {cause}")]
    RunAborted { t: f64, cause: Box<Error> },

    #[error("quadrature did not converge: estimated relative error {rel_err:e} > {tol:e}")]
    QuadratureNonconvergence { rel_err: f64, tol: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("initial data cannot satisfy positivity: {0}")]
    PositivityUnachievable(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
