//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Non-finite or otherwise malformed argument.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Argument outside the documented range of an operation.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// Evaluation outside the mathematical domain (e.g. the propagator at
    /// t <= 0, or a half-plane state at y < 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// The wave function vanishes here; the guidance velocity is undefined.
    #[error("node encountered: |psi| = {psi_abs:.3e} below the node threshold")]
    NodeSingularity { psi_abs: f64 },

    /// A genuine singularity of the evaluated expression (the barrier tip).
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// Far-field formula requested outside its regime of validity.
    #[error("outside the asymptotic regime: {0}")]
    OutOfAsymptoticRange(String),

    /// Adaptive quadrature hit the order cap before the convergence target.
    /// Carries the last two (order-doubled) estimates as (re, im) pairs.
    #[error(
        "quadrature not converged at order {order}: \
         estimates {prev:?} -> {last:?} (relative change {rel_change:.3e})"
    )]
    NotConverged {
        order: usize,
        prev: (f64, f64),
        last: (f64, f64),
        rel_change: f64,
    },

    /// Bad scenario / configuration input.
    #[error("configuration error: {0}")]
    Config(String),

    /// Filesystem failure while reading or writing run artifacts.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code category used by the CLI: configuration errors
    /// exit 2, numeric failures 3, i/o failures 4.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
