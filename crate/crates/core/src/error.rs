use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("covariance matrix violates the uncertainty relation (min symplectic eigenvalue {min_eigenvalue})")]
    NonPhysical { min_eigenvalue: f64 },

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("drift matrix is not Hurwitz stable (spectral abscissa {abscissa:e})")]
    UnstableSystem { abscissa: f64 },

    #[error("Lyapunov system is numerically singular (pivot ratio {pivot_ratio:e})")]
    SingularSystem { pivot_ratio: f64 },

    #[error("Lyapunov residual {residual:e} exceeds bound {bound:e}")]
    ResidualBound { residual: f64, bound: f64 },

    #[error("diffusion matrix is singular")]
    SingularDiffusion,

    #[error("denominator kappa^2 - chi^2 cos^2(phi) = {denominator:e} is at the divergence point (value {value})")]
    DivergentDenominator { denominator: f64, value: f64 },

    #[error("not supported: {0}")]
    NotSupported(&'static str),

    #[error("mean field did not converge after {iterations} iterations")]
    UnconvergedMeanField { iterations: usize },

    #[error("invalid simulation settings: {0}")]
    InvalidSettings(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user-supplied configuration rather than numerics or I/O.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::InvalidParameter { .. })
    }
}
